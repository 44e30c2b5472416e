#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uilab/errors.hpp"

namespace uilab {

enum class Protocol {
  TwoRef,
  MultiRef,
  Weak,
  RecoveryRounds,
  SameUnknown,
  SplittingCompare,
  NoiseRates,
  OptimalitySweep,
  GaussianIntegralCheck,
};

const char* protocol_name(Protocol p);
Protocol protocol_from_name(const std::string& name);

/// One swept scalar parameter: `steps` points spaced evenly over
/// [min, max] (steps = 1 evaluates min only).
struct SweepAxis {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int steps = 1;
};

/// A full experiment description. Scalar parameters live in `scalars`;
/// list-valued ones (amplitudes as [re, im] pairs, `ref_amps`, `rounds`,
/// `priors`) in `lists`. Missing keys fall back to protocol defaults;
/// unknown or ill-typed keys raise ConfigError naming the key.
struct ExperimentConfig {
  Protocol protocol = Protocol::TwoRef;
  std::uint64_t shots = 0;  // 0 = analytic columns only
  std::uint64_t seed = 0;
  std::optional<SweepAxis> sweep;
  std::map<std::string, double> scalars;
  std::map<std::string, std::vector<double>> lists;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
  std::string to_json_text() const;
};

/// Column-oriented result data. Every Monte Carlo column is accompanied by
/// a *_se standard-error column.
struct ResultTable {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::string metadata_json;  // config echo, seed, version

  std::size_t rows() const { return columns.empty() ? 0 : columns[0].size(); }
  std::string to_csv() const;
  std::string to_json_text() const;
};

/// Dispatches the config to the matching module, evaluating every sweep
/// point; deterministic for a fixed seed (byte-identical serialized tables).
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Built-in consistency suite (network cancellations, unitarity, closed
/// forms against sampling, recursion against network algebra, determinism).
/// Writes one line per check; returns the number of failures.
int run_verify(std::ostream& log);

}  // namespace uilab
