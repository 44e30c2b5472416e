#pragma once

#include <vector>

#include "uilab/errors.hpp"

namespace uilab {

/// Detector couplings of the reduced two-detector experiment: the modes
/// feeding the conclusive detectors carry lambda_i (unknown - other ref),
/// and row orthonormality of the mode transformation bounds the couplings by
///   l1 * l2 <= (1 - 2 l1)(1 - 2 l2),   l_i = |lambda_i|^2.
struct DetectorCoupling {
  double lambda1_sq = 0.0;
  double lambda2_sq = 0.0;

  bool feasible(double tol = 1e-12) const;
};

/// Largest |lambda_2|^2 compatible with a given |lambda_1|^2 (the bound
/// saturated and solved): (1 - 2 l1)/(2 - 3 l1). Zero at l1 = 1/2.
double lambda2_sq_max(double l1);

/// Alternate second-coupling expression (1 - l1)/(2 - 3 l1). It does NOT
/// saturate the feasibility bound and is kept only for diagnostic
/// comparison against the consistent form above.
double lambda2_sq_alternate(double l1);

/// Success probability of the two-detector experiment with the second
/// coupling saturated: (1 - e^{-l1 d^2})/2 + (1 - e^{-lambda2_sq_max(l1) d^2})/2.
double two_detector_P(double l1, double delta);

/// Same probability evaluated with the alternate (non-saturating) second
/// coupling; diagnostic only.
double two_detector_P_alternate(double l1, double delta);

struct Lambda1Optimum {
  bool degenerate = false;  // delta = 0: P vanishes identically
  double l1 = 0.0;
};

/// Golden-section maximization of two_detector_P over l1 in [0, 1/2].
/// The optimum is 1/3 independently of delta.
Lambda1Optimum optimize_lambda1(double delta, double tol = 1e-8);

struct ReductionCheck {
  double p_multi = 0.0;
  double p_two = 0.0;
  double defect = 0.0;
};

/// Success probability with many conclusive detectors per conclusion
/// (product form) versus its two-detector reduction with
/// kappa_i^2 = sum |lambda|^2; the two must agree identically.
ReductionCheck multi_detector_reduction_check(
    const std::vector<double>& lambdas_1, const std::vector<double>& lambdas_2,
    double delta);

}  // namespace uilab
