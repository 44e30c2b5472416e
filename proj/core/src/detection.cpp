#include "uilab/detection.hpp"

#include <cmath>
#include <set>

namespace uilab {

void DetectorBank::validate(int mode_count) const {
  if (monitored_modes.empty()) {
    throw IndexOutOfRange("detector bank watches no modes");
  }
  std::set<int> seen;
  for (int m : monitored_modes) {
    if (m < 0 || m >= mode_count) {
      throw IndexOutOfRange("monitored mode out of register range");
    }
    if (!seen.insert(m).second) {
      throw IndexOutOfRange("monitored modes must be distinct");
    }
  }
  if (!names.empty() && names.size() != monitored_modes.size()) {
    throw IndexOutOfRange("detector name list length mismatch");
  }
}

bool ClickPattern::any_click() const noexcept {
  for (int c : counts) {
    if (c > 0) return true;
  }
  return false;
}

double p_click(Amplitude amp) {
  return -std::expm1(-std::norm(amp));
}

ClickPattern sample_counts(const ModeRegister& reg, const DetectorBank& bank,
                           RngStream& rng) {
  bank.validate(reg.size());
  ClickPattern pattern;
  pattern.counts.reserve(bank.monitored_modes.size());
  for (int m : bank.monitored_modes) {
    const double mean = std::norm(reg.amps[m]);
    if (bank.resolve_numbers) {
      pattern.counts.push_back(rng.poisson(mean));
    } else {
      // the thresholded count is the event u > e^{-mean}, the first step of
      // the inversion; stays exact when e^{-mean} underflows
      pattern.counts.push_back(rng.uniform01() > std::exp(-mean) ? 1 : 0);
    }
  }
  return pattern;
}

ShotHistogram run_shots(const Network& net, const ModeRegister& input,
                        const DetectorBank& bank, std::uint64_t shots,
                        std::uint64_t seed) {
  if (shots < 1) throw InvalidShotCount("run_shots needs at least one shot");
  const ModeRegister evolved = apply_network(net, input);
  bank.validate(evolved.size());

  ShotHistogram hist;
  hist.shots = shots;
  for (std::uint64_t r = 0; r < shots; ++r) {
    RngStream rng(seed, r);
    ++hist.bins[sample_counts(evolved, bank, rng)];
  }
  return hist;
}

}  // namespace uilab
