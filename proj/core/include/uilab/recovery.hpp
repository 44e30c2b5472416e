#pragma once

#include "uilab/optics.hpp"
#include "uilab/protocols.hpp"

namespace uilab {

/// Round index and the intensity suppression factor of the reference
/// states entering that round (lambda_1 = 1).
struct RecoveryState {
  int round = 1;
  double lambda = 1.0;

  static RecoveryState initial() { return {1, 1.0}; }
  RecoveryState next() const;
};

/// One recovery step of the reference dilution: the unique value for which
/// the two-splitter recovery network leaves *both* references equally
/// diluted. Evaluated in the cancellation-free form
///   f(x) = 2 x^2 (1+2x) / (1 + 2x + 4x^2 + sqrt(1 + 4x + 8x^2)),
/// which is algebraically the equal-dilution solution
///   ((1+2x)^2 - 2x - sqrt(4x^2 + (1+2x)^2)) / (2(1+2x))
/// and stays accurate as x -> 0. f(1) = (7 - sqrt(13))/6.
double lambda_step(double x);

/// Beam-splitter settings for identification round k (reference dilution
/// lambda) and for the recovery stage that follows a conclusive result.
struct RoundTransmittivities {
  double t1 = 0.5;          // unknown splitter
  double t2 = 0.0;          // comparison with reference 1
  double t3 = 0.0;          // comparison with reference 2
  double t1_recovery = 0.0; // splits the concentrated winner reference
  double t2_recovery = 0.0; // cancels the winner contribution in the other mode
};

RoundTransmittivities round_transmittivities(double lambda);

/// Two-splitter recovery network on modes (B=0, D=1, AUX=2), AUX starting
/// in vacuum. For the conclusive branch `winner`, the outputs on B and D are
/// |sqrt(lambda') a1> and |sqrt(lambda') a2> with lambda' = lambda_step(lambda);
/// AUX carries the remainder.
Network build_recovery_network(double lambda, int winner);

/// Per-round success 1 - exp(-(lambda/(1+2 lambda)) delta^2).
double round_success_prob(double lambda, double delta);

/// Probability that rounds 1..k all succeed (round k is reachable only if
/// every earlier identification was conclusive).
double cumulative_success(int k, double delta);

/// Second identification of the *same* unknown state, fed the unmeasured
/// modes of a first inconclusive round. Uses (t1, t2, t3) = (1/2, 3/4, 1/4).
struct SameUnknownScheme {
  double conditional_p = 0.0;  // success of the second round alone
  double overall_p = 0.0;      // success of the two-round measurement
  Network round2_network;      // modes (A=0, B=1, C=2, D=3)
  DetectorBank round2_bank;    // D1 on mode C, D2 on mode A
};

SameUnknownScheme same_unknown_second_round(double delta);

/// Input register of the second round: a fresh unknown copy plus the
/// unmeasured modes of the first round.
ModeRegister same_unknown_round2_input(Amplitude unknown, Amplitude a1,
                                       Amplitude a2);

/// Pre-splitting alternative: distribute each reference into N parts and
/// run N independent identifications; all succeed with probability
/// (1 - exp(-delta^2/(N+2)))^N.
double splitting_strategy_P(int N, double delta);

struct StrategyComparison {
  double recovery_p = 0.0;
  double splitting_p = 0.0;
  double difference = 0.0;
};

StrategyComparison compare_strategies(int N, double delta);

}  // namespace uilab
