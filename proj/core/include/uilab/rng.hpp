#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

#include "uilab/errors.hpp"

namespace uilab {

/// Counter-based splittable random stream.
///
/// Each (seed, stream_id) pair names an independent sequence; the generator
/// is a keyed SplitMix64 counter, so streams can be created per replica and
/// sampled in parallel while staying bit-reproducible. Identical
/// (seed, stream_id) always yields the identical sample sequence.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_(stream_id) {
    base_ = fmix64(seed ^ 0x94d049bb133111ebULL);
    gamma_ = fmix64(stream_id ^ 0xbf58476d1ce4e5b9ULL) | 1ULL;
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  std::uint64_t next_u64() noexcept {
    ++counter_;
    return fmix64(base_ + counter_ * gamma_);
  }

  /// Uniform double in [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform_open() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// One standard normal deviate (Box-Muller; the pair partner is cached).
  double normal() noexcept {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    auto [z0, z1] = normal_pair();
    cached_ = z1;
    have_cached_ = true;
    return z0;
  }

  /// A fresh independent standard normal pair.
  std::pair<double, double> normal_pair() noexcept {
    const double u1 = uniform_open();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  /// Poisson deviate by sequential inversion. Exact and portable for the
  /// moderate means that occur here; rejects means too large for e^{-m}.
  int poisson(double mean) {
    if (mean < 0.0 || !std::isfinite(mean)) {
      throw DomainError("poisson: mean must be finite and nonnegative");
    }
    if (mean == 0.0) return 0;
    double p = std::exp(-mean);
    if (p == 0.0) {
      throw DomainError("poisson: mean too large for inversion sampling");
    }
    const double u = uniform01();
    double cum = p;
    int k = 0;
    while (u > cum) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    return k;
  }

 private:
  static std::uint64_t fmix64(std::uint64_t z) noexcept {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t base_;
  std::uint64_t gamma_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace uilab
