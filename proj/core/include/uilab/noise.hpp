#pragma once

#include <cstdint>

#include "uilab/optics.hpp"
#include "uilab/rng.hpp"

namespace uilab {

/// Preparation-noise strength: every input state is displaced by a complex
/// Gaussian with per-component standard deviation sigma.
struct NoiseParams {
  double sigma = 0.0;
};

/// Phase-keying prior: references are (alpha, -alpha) with alpha drawn from
/// a zero-mean complex Gaussian of per-component dispersion xi.
struct PhaseKeyingParams {
  double xi = 1.0;
};

/// Closed-form and Monte Carlo figures for noisy identification.
struct RatesReport {
  double reliability = 1.0;
  double p_success = 0.0;
  double p_error = 0.0;
  double p_failure = 0.0;
  double theta = 0.0;
};

/// One complex Gaussian displacement; real and imaginary parts are
/// independent zero-mean normals with standard deviation sigma.
Amplitude sample_displacement(double sigma, RngStream& rng);

/// Probability that detector k (1 or 2) stays silent when the unknown
/// equals reference `true_index`, all inputs carrying sigma-noise:
///   P(D1 | rho_i) = e^{-K_C |a_i - a2|^2 / (1+2 sigma^2)} / (1+2 sigma^2),
/// K_C = n_a n_c/(n_a + 2 n_c), and the (n_b, a1) analogue for D2.
/// Assumes the symmetric splitter t1 = 1/2.
double no_click_prob_closed(int detector, int true_index, double n_a,
                            double n_b, double n_c, double sigma,
                            Amplitude a1, Amplitude a2);

/// The four conclusive-outcome probabilities Tr(E_i rho_j), i,j in {1,2}.
struct ConclusiveProbs {
  double e1_rho1 = 0.0;
  double e1_rho2 = 0.0;
  double e2_rho1 = 0.0;
  double e2_rho2 = 0.0;
};

ConclusiveProbs conclusive_probs(Amplitude a1, Amplitude a2, double sigma,
                                 double n_a, double n_b, double n_c);

/// Phase-keying reliability in the equal-copies case:
/// R = (1 + theta)/(1 + 2 theta), theta = ((n_a+2n_b)/(n_a n_b)) (sigma/2xi)^2.
struct Reliability {
  double r = 1.0;
  double theta = 0.0;
};

Reliability reliability_closed(double n_a, double n_b, double sigma, double xi);

/// Reliability of each conclusive outcome for unequal reference copy
/// counts, obtained by numerically averaging the conclusive probabilities
/// over the phase-keying prior (no compact form exists for n_b != n_c).
struct ReliabilityPair {
  double r1 = 1.0;
  double r2 = 1.0;
};

ReliabilityPair reliability_general(double n_a, double n_b, double n_c,
                                    double sigma, double xi);

/// Prior-averaged success/error/failure probabilities (equal copies):
/// denominators carry 1 + 2 sigma^2 + (8 n_a n_b/(n_a+2n_b)) xi^2.
RatesReport averaged_rates_closed(double n_a, double n_b, double sigma,
                                  double xi);

/// Monte Carlo estimate of the averaged rates: per shot the reference pair
/// is drawn from the phase-keying prior, a hypothesis chosen with equal
/// priors, every input copy (and the auxiliary vacuum mode) independently
/// displaced, the register evolved and the detectors sampled.
struct McRates {
  RatesReport estimate;
  RatesReport standard_error;
  std::uint64_t shots = 0;
  std::uint64_t conclusive = 0;
};

McRates mc_rates(int n_a, int n_b, double sigma, double xi,
                 std::uint64_t shots, std::uint64_t seed);

/// Gaussian average of a coherent overlap over m independent displacements:
/// I_m = (b/(b + 2 a sigma^2 m)) exp(-a |x|^2 / (b + 2 m a sigma^2)).
double gaussian_integral_Im(int m, double a, double b, Amplitude x,
                            double sigma);

/// Same value through the one-step recursion
/// I_m(a, b) = (b/(b + 2 a sigma^2)) I_{m-1}(a, b + 2 a sigma^2).
double gaussian_integral_Im_recursive(int m, double a, double b, Amplitude x,
                                      double sigma);

}  // namespace uilab
