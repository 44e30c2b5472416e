#include "uilab/recovery.hpp"

#include <cmath>

namespace uilab {

namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !(lambda <= 1.0)) {
    throw DomainError("lambda must lie in (0, 1]");
  }
}

// t1_recovery in the cancellation-free form 4x^2 / (A + B) with
// A = 1 + 2x + 4x^2, B = sqrt(1 + 4x + 8x^2); equals
// 1 - (2x + sqrt(4x^2 + (1+2x)^2)) / (1+2x)^2.
double t1_recovery_of(double x) {
  const double a = 1.0 + 2.0 * x + 4.0 * x * x;
  const double b = std::sqrt(1.0 + 4.0 * x + 8.0 * x * x);
  return 4.0 * x * x / (a + b);
}

}  // namespace

RecoveryState RecoveryState::next() const {
  return {round + 1, lambda_step(lambda)};
}

double lambda_step(double x) {
  if (!(x > 0.0)) throw DomainError("lambda_step needs x > 0");
  const double a = 1.0 + 2.0 * x + 4.0 * x * x;
  const double b = std::sqrt(1.0 + 4.0 * x + 8.0 * x * x);
  return 2.0 * x * x * (1.0 + 2.0 * x) / (a + b);
}

RoundTransmittivities round_transmittivities(double lambda) {
  check_lambda(lambda);
  RoundTransmittivities out;
  out.t1 = 0.5;
  out.t2 = 2.0 * lambda / (1.0 + 2.0 * lambda);
  out.t3 = 1.0 / (1.0 + 2.0 * lambda);
  out.t1_recovery = t1_recovery_of(lambda);
  const double u = (1.0 + 2.0 * lambda) * (1.0 + 2.0 * lambda);
  const double c = (1.0 - out.t1_recovery) * u;
  out.t2_recovery = c / (1.0 + c);
  return out;
}

Network build_recovery_network(double lambda, int winner) {
  check_lambda(lambda);
  if (winner != 1 && winner != 2) {
    throw DomainError("winner must be 1 or 2");
  }
  const RoundTransmittivities t = round_transmittivities(lambda);
  // modes: B = 0, D = 1, AUX = 2. The winner's concentrated mode is split
  // first; its reflected part then cancels the winner contribution in the
  // other unmeasured mode.
  const int split_mode = (winner == 1) ? 0 : 1;
  const int cancel_mode = (winner == 1) ? 1 : 0;
  Network net;
  net.mode_count = 3;
  net.elements.push_back({t.t1_recovery, split_mode, 2});
  net.elements.push_back({t.t2_recovery, cancel_mode, 2});
  net.validate();
  return net;
}

double round_success_prob(double lambda, double delta) {
  check_lambda(lambda);
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  return -std::expm1(-(lambda / (1.0 + 2.0 * lambda)) * delta * delta);
}

double cumulative_success(int k, double delta) {
  if (k < 1) throw DomainError("need at least one round");
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  double lambda = 1.0;
  double p = 1.0;
  for (int j = 1; j <= k; ++j) {
    p *= -std::expm1(-(lambda / (1.0 + 2.0 * lambda)) * delta * delta);
    // the dilution shrinks like lambda^2 per round and underflows around
    // round 12; every later factor vanishes with it
    if (p == 0.0) return 0.0;
    if (j < k) lambda = lambda_step(lambda);
  }
  return p;
}

SameUnknownScheme same_unknown_second_round(double delta) {
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  SameUnknownScheme out;
  out.conditional_p = -std::expm1(-delta * delta / 6.0);
  out.overall_p = -std::expm1(-delta * delta / 2.0);

  Network& net = out.round2_network;
  net.mode_count = 4;
  net.elements.push_back({0.5, 3, 0});        // dilute the fresh unknown onto D
  net.elements.push_back({0.75, 1, 0});       // compare against mode B
  net.elements.push_back({0.25, 3, 2});       // compare against mode C
  net.validate();
  out.round2_bank.monitored_modes = {2, 0};   // D1 on C, D2 on A
  out.round2_bank.names = {"D1", "D2"};
  return out;
}

ModeRegister same_unknown_round2_input(Amplitude unknown, Amplitude a1,
                                       Amplitude a2) {
  // unmeasured modes of the first (t1 = 1/2) round
  const Amplitude out_b =
      std::sqrt(2.0 / 3.0) * a1 + std::sqrt(1.0 / 6.0) * unknown;
  const Amplitude out_d =
      std::sqrt(1.0 / 6.0) * unknown + std::sqrt(2.0 / 3.0) * a2;
  ModeRegister reg;
  reg.amps = {unknown, out_b, out_d, Amplitude{0.0, 0.0}};
  reg.labels = {"A", "B", "C", "D"};
  return reg;
}

double splitting_strategy_P(int N, double delta) {
  if (N < 1) throw InvalidShotCount("need at least one identification");
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const double p = -std::expm1(-delta * delta / (N + 2.0));
  return std::pow(p, N);
}

StrategyComparison compare_strategies(int N, double delta) {
  StrategyComparison out;
  out.recovery_p = cumulative_success(N, delta);
  out.splitting_p = splitting_strategy_P(N, delta);
  out.difference = out.recovery_p - out.splitting_p;
  return out;
}

}  // namespace uilab
