#include "uilab/optimality.hpp"

#include <cmath>
#include <functional>

#include "uilab/search.hpp"

namespace uilab {

namespace {

void check_l1(double l1) {
  if (!(l1 >= 0.0 && l1 <= 0.5)) {
    throw DomainError("lambda1_sq must lie in [0, 1/2]");
  }
}

}  // namespace

bool DetectorCoupling::feasible(double tol) const {
  return lambda1_sq * lambda2_sq <=
         (1.0 - 2.0 * lambda1_sq) * (1.0 - 2.0 * lambda2_sq) + tol;
}

double lambda2_sq_max(double l1) {
  check_l1(l1);
  if (l1 == 0.5) return 0.0;
  return (1.0 - 2.0 * l1) / (2.0 - 3.0 * l1);
}

double lambda2_sq_alternate(double l1) {
  check_l1(l1);
  return (1.0 - l1) / (2.0 - 3.0 * l1);
}

double two_detector_P(double l1, double delta) {
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const double d2 = delta * delta;
  return 0.5 * (-std::expm1(-l1 * d2)) +
         0.5 * (-std::expm1(-lambda2_sq_max(l1) * d2));
}

double two_detector_P_alternate(double l1, double delta) {
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  const double d2 = delta * delta;
  return 0.5 * (-std::expm1(-l1 * d2)) +
         0.5 * (-std::expm1(-lambda2_sq_alternate(l1) * d2));
}

Lambda1Optimum optimize_lambda1(double delta, double tol) {
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");
  if (delta == 0.0) return {true, 0.0};
  const double l1 = golden_section_maximize(
      [delta](double l) { return two_detector_P(l, delta); }, 0.0, 0.5, tol);
  return {false, l1};
}

ReductionCheck multi_detector_reduction_check(
    const std::vector<double>& lambdas_1, const std::vector<double>& lambdas_2,
    double delta) {
  if (lambdas_1.empty() || lambdas_2.empty()) {
    throw DomainError("detector coupling lists must be nonempty");
  }
  if (!(delta >= 0.0)) throw DomainError("delta must be nonnegative");

  const double d2 = delta * delta;
  auto fail_prob = [d2](const std::vector<double>& ls) {
    double prod = 1.0;
    for (double l : ls) prod *= std::exp(-l * l * d2);
    return prod;
  };
  auto kappa_sq = [](const std::vector<double>& ls) {
    double s = 0.0;
    for (double l : ls) s += l * l;
    return s;
  };

  ReductionCheck out;
  out.p_multi = 0.5 * (1.0 - fail_prob(lambdas_1)) +
                0.5 * (1.0 - fail_prob(lambdas_2));
  out.p_two = 0.5 * (-std::expm1(-kappa_sq(lambdas_1) * d2)) +
              0.5 * (-std::expm1(-kappa_sq(lambdas_2) * d2));
  out.defect = std::abs(out.p_multi - out.p_two);
  return out;
}

}  // namespace uilab
