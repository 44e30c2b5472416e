#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace uilab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class InvalidTransmittivity : public Error {
 public:
  using Error::Error;
};

class InvalidCopyCount : public Error {
 public:
  using Error::Error;
};

class InvalidShotCount : public Error {
 public:
  using Error::Error;
};

class InvalidTotal : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Configuration error carrying the name of the offending key, if known.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg, std::string key = {})
      : Error(msg), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace uilab
