#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uilab/detection.hpp"
#include "uilab/optics.hpp"
#include "uilab/rng.hpp"

namespace uilab {

/// Measurement verdict: either "the unknown equals reference i" or nothing.
struct UIOutcome {
  enum class Kind { Conclusive, Inconclusive };
  Kind kind = Kind::Inconclusive;
  int index = 0;  // 1-based reference index, valid when conclusive

  static UIOutcome conclusive(int i) { return {Kind::Conclusive, i}; }
  static UIOutcome inconclusive() { return {Kind::Inconclusive, 0}; }
  bool is_conclusive() const noexcept { return kind == Kind::Conclusive; }
  bool operator==(const UIOutcome&) const = default;
};

/// Which reference the unknown actually equals, plus the reference values.
struct Hypothesis {
  int index = 1;  // 1-based
  std::vector<Amplitude> ref_amps;

  Amplitude unknown() const { return ref_amps.at(index - 1); }
  void validate() const;
};

/// Identification problem shape: reference kinds, copy counts, priors.
/// Copy counts are positive reals; fractional values describe intensity
/// weights (diluted inputs) as used by the recovery and splitting schemes.
struct UIConfig {
  int m = 2;
  double n_a = 1.0;
  std::vector<double> n_refs;
  std::vector<double> priors;
  std::optional<double> t1_override;

  void validate() const;
};

/// How the prepared register is laid out: one block of modes per state
/// group, plus any auxiliary (vacuum) modes appended by the builder.
struct GroupLayout {
  int first_mode = 0;
  int copies = 1;        // modes occupied by this group
  double weight = 1.0;   // total intensity weight carried by the group
  bool fractional = false;  // single pre-diluted mode instead of raw copies
};

struct InputLayout {
  int mode_count = 0;
  GroupLayout unknown;
  std::vector<GroupLayout> refs;
  std::vector<int> aux_modes;  // vacuum inputs (splitting branches etc.)
  std::vector<std::string> labels;
};

struct ConclusionRule {
  enum class Kind { TwoRef, MultiRefAllButOne };
  Kind kind = Kind::TwoRef;
  int m = 2;
};

/// A complete measurement setup: network, detectors, classification rule
/// and the input layout needed to prepare a register from amplitudes.
struct UISetup {
  Network network;
  DetectorBank bank;
  ConclusionRule rule;
  InputLayout layout;
};

/// Fills a register according to the setup's layout. Integer groups receive
/// `copies` raw amplitudes; fractional groups one mode at sqrt(weight)*amp.
ModeRegister prepare_input(const UISetup& setup, Amplitude unknown,
                           const std::vector<Amplitude>& refs);

UIOutcome conclude(const UISetup& setup, const ClickPattern& pattern);

/// Two-detector rule: only D1 fired -> reference 1; only D2 -> reference 2;
/// none or both -> inconclusive. Pattern order is (D1, D2).
UIOutcome classify_two_ref(const ClickPattern& pattern);

/// M-detector rule: exactly the detectors {1..m}\{k} fired -> reference k,
/// anything else inconclusive. (Equivalently: exactly one detector silent;
/// any partial pattern leaves several candidates and must stay inconclusive.)
UIOutcome classify_multi_ref(const ClickPattern& pattern, int m);

/// Comparison-splitter transmittivities (T2, T3) that put the cancellation
/// ports in vacuum: T2 = 1/(1 + (n_a/n_b) t1), T3 = (1-t1)/(n_c/n_a + 1-t1).
std::pair<double, double> two_ref_transmittivities(double n_a, double n_b,
                                                   double n_c, double t1);

/// Four-mode comparison setup (modes A, B, C, D plus concentrators):
/// B1(t1) couples (D,A), B2(T2) couples (B,A), B3(T3) couples (D,C), with
/// detectors D1 on mode C and D2 on mode A.
UISetup build_two_ref_setup(double n_a, double n_b, double n_c, double t1);

struct TwoRefProbabilities {
  double p1 = 0.0;  // correct identification given unknown = ref 1
  double p2 = 0.0;
  double p = 0.0;  // prior-weighted total
};

/// Closed-form success probabilities of the two-reference setup.
TwoRefProbabilities analytic_two_ref(double n_a, double n_b, double n_c,
                                     double t1, Amplitude a1, Amplitude a2,
                                     std::array<double, 2> priors = {0.5, 0.5});

/// Symmetric special case (n_b = n_c, t1 = 1/2):
/// P = 1 - exp(-(n_a n_b/(n_a + 2 n_b)) delta_sq).
double two_ref_symmetric_P(double n_a, double n_b, double delta_sq);

/// 1/2 when n_b = n_c (state-independent optimum); otherwise no closed
/// answer exists and the caller should run optimal_t1_search.
std::optional<double> optimal_t1(double n_a, double n_b, double n_c);

/// Bounded golden-section maximization of the total success probability
/// over t1 in [0, 1], for a specific reference pair and priors.
double optimal_t1_search(double n_a, double n_b, double n_c, double delta_sq,
                         std::array<double, 2> priors = {0.5, 0.5},
                         double tol = 1e-8);

/// Best split of N modes between unknown copies and the two reference
/// groups (n_b = n_c must be integral).
struct ResourceAllocation {
  int n_a = 0;
  int n_ref = 0;        // copies per reference group
  double coeff = 0.0;   // exponent coefficient n_a (N - n_a) / (2N)

  double success(double delta) const;
};

ResourceAllocation resource_tradeoff(int N);

/// Known-states (infinite-reference) limit: 1 - exp(-(n_a/2) delta_sq),
/// i.e. 1 - |<a1|a2>|^{n_a}.
double idp_limit_P(double n_a, Amplitude a1, Amplitude a2);
double idp_limit_P_delta_sq(double n_a, double delta_sq);

/// M-reference setup: the concentrated unknown is split into m equal
/// branches (cascade with t_j = 1 - 1/(m-j+1)), each merged with one
/// concentrated reference at t = n_a/(n_a + m n_b); detectors sit on the
/// cancellation ports.
UISetup build_multi_ref_setup(int m, double n_a, double n_b);

/// P = sum_j (1/m) prod_{k != j} (1 - exp(-(n_a n_b/(n_a + m n_b)) |a_j - a_k|^2)).
double analytic_multi_ref_P(int m, double n_a, double n_b,
                            const std::vector<Amplitude>& ref_amps);

/// Sequential weak measurement: every resource split into N parts, the
/// standard triple setup run on one part per round until conclusive.
struct WeakRunResult {
  UIOutcome outcome;
  int round = 0;  // 1-based round of the conclusive result, 0 if none
  /// Concentrated unmeasured resources, ordered (reference 1, reference 2):
  /// the winner carries sqrt(2(N-k)/N), the other sqrt((N-k)/N). Absent
  /// when every round was inconclusive.
  std::optional<ModeRegister> leftover;
};

WeakRunResult weak_ui_run(int N, const Hypothesis& hyp, RngStream& rng);

/// Monte Carlo outcome tallies for a setup under prior-weighted hypotheses.
struct UIShotCounts {
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;
  std::uint64_t inconclusive = 0;
  std::uint64_t shots = 0;

  double success_frequency() const {
    return shots ? static_cast<double>(correct) / static_cast<double>(shots) : 0.0;
  }
};

/// Draws a hypothesis per shot from `priors`, evolves the matching input
/// (cached per hypothesis), samples the detectors and classifies.
/// Deterministic in `seed`; replica r uses stream (seed, r).
UIShotCounts simulate_ui(const UISetup& setup,
                         const std::vector<Amplitude>& ref_amps,
                         const std::vector<double>& priors,
                         std::uint64_t shots, std::uint64_t seed);

}  // namespace uilab
