#pragma once

#include <cmath>
#include <functional>

namespace uilab {

/// Golden-section maximization of a unimodal function on [lo, hi].
/// Returns the abscissa of the maximum to within tol.
inline double golden_section_maximize(const std::function<double(double)>& f,
                                      double lo, double hi,
                                      double tol = 1e-8) {
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5)-1)/2
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace uilab
