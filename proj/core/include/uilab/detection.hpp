#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "uilab/optics.hpp"
#include "uilab/rng.hpp"

namespace uilab {

/// A set of photodetectors watching specific modes. In click-only mode a
/// detector reports 0/1; with resolve_numbers it reports the photon count.
struct DetectorBank {
  std::vector<int> monitored_modes;
  bool resolve_numbers = false;
  std::vector<std::string> names;  // optional, parallel to monitored_modes

  void validate(int mode_count) const;
};

/// Per-detector counts, in DetectorBank order.
struct ClickPattern {
  std::vector<int> counts;

  bool any_click() const noexcept;
  auto operator<=>(const ClickPattern&) const = default;
};

/// Probability of at least one photon in a coherent mode: 1 - e^{-|amp|^2}.
double p_click(Amplitude amp);

/// One independent Poisson(|amp|^2) draw per monitored mode; click-only
/// banks threshold the count at >= 1.
ClickPattern sample_counts(const ModeRegister& reg, const DetectorBank& bank,
                           RngStream& rng);

struct ShotHistogram {
  std::map<ClickPattern, std::uint64_t> bins;
  std::uint64_t shots = 0;
};

/// Evolves the input once (deterministic), then draws `shots` independent
/// click patterns using per-replica streams (seed, replica_index).
ShotHistogram run_shots(const Network& net, const ModeRegister& input,
                        const DetectorBank& bank, std::uint64_t shots,
                        std::uint64_t seed);

}  // namespace uilab
