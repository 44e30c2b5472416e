#include "uilab/noise.hpp"

#include <cmath>

#include "uilab/detection.hpp"
#include "uilab/protocols.hpp"

namespace uilab {

namespace {

void check_sigma(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("sigma must be finite and nonnegative");
  }
}

void check_xi(double xi) {
  if (!(xi > 0.0) || !std::isfinite(xi)) {
    throw DomainError("xi must be finite and positive");
  }
}

void check_count(double n, const char* what) {
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError(std::string(what) + " must be positive");
  }
}

double coeff_sym(double n_a, double n_ref) {
  return n_a * n_ref / (n_a + 2.0 * n_ref);
}

// integrand averages over the phase-keying prior: |a1 - a2|^2 = 4|alpha|^2
// and s = |alpha|^2 is exponential with mean 2 xi^2.
template <typename F>
double phase_keying_average(double xi, F&& g) {
  const double mean = 2.0 * xi * xi;
  const double cutoff = 50.0 * mean;  // e^{-50} tail, negligible
  const int n = 1 << 16;              // composite Simpson, even count
  const double h = cutoff / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * std::exp(-s / mean) * g(4.0 * s);
  }
  return sum * h / (3.0 * mean);
}

}  // namespace

Amplitude sample_displacement(double sigma, RngStream& rng) {
  check_sigma(sigma);
  const auto [z0, z1] = rng.normal_pair();
  return Amplitude{sigma * z0, sigma * z1};
}

double no_click_prob_closed(int detector, int true_index, double n_a,
                            double n_b, double n_c, double sigma,
                            Amplitude a1, Amplitude a2) {
  if (detector != 1 && detector != 2) throw DomainError("detector must be 1 or 2");
  if (true_index != 1 && true_index != 2) {
    throw DomainError("hypothesis index must be 1 or 2");
  }
  check_count(n_a, "n_a");
  check_count(n_b, "n_b");
  check_count(n_c, "n_c");
  check_sigma(sigma);

  const Amplitude unknown = (true_index == 1) ? a1 : a2;
  const double q = 1.0 / (1.0 + 2.0 * sigma * sigma);
  const double dist_sq = (detector == 1) ? std::norm(unknown - a2)
                                         : std::norm(unknown - a1);
  const double coeff = (detector == 1) ? coeff_sym(n_a, n_c) : coeff_sym(n_a, n_b);
  return q * std::exp(-q * coeff * dist_sq);
}

ConclusiveProbs conclusive_probs(Amplitude a1, Amplitude a2, double sigma,
                                 double n_a, double n_b, double n_c) {
  check_count(n_a, "n_a");
  check_count(n_b, "n_b");
  check_count(n_c, "n_c");
  check_sigma(sigma);

  const double q = 1.0 / (1.0 + 2.0 * sigma * sigma);
  const double delta_sq = std::norm(a1 - a2);
  const double eb = std::exp(-q * coeff_sym(n_a, n_b) * delta_sq);
  const double ec = std::exp(-q * coeff_sym(n_a, n_c) * delta_sq);

  // Tr(E_i rho_j) = [1 - P(D_i silent | rho_j)] * P(D_other silent | rho_j)
  ConclusiveProbs out;
  out.e1_rho1 = (1.0 - q * ec) * q;
  out.e1_rho2 = (1.0 - q) * q * eb;
  out.e2_rho1 = (1.0 - q) * q * ec;
  out.e2_rho2 = (1.0 - q * eb) * q;
  return out;
}

Reliability reliability_closed(double n_a, double n_b, double sigma,
                               double xi) {
  check_count(n_a, "n_a");
  check_count(n_b, "n_b");
  check_sigma(sigma);
  check_xi(xi);
  Reliability out;
  const double ratio = sigma / (2.0 * xi);
  out.theta = (n_a + 2.0 * n_b) / (n_a * n_b) * ratio * ratio;
  out.r = (1.0 + out.theta) / (1.0 + 2.0 * out.theta);
  return out;
}

ReliabilityPair reliability_general(double n_a, double n_b, double n_c,
                                    double sigma, double xi) {
  check_count(n_a, "n_a");
  check_count(n_b, "n_b");
  check_count(n_c, "n_c");
  check_sigma(sigma);
  check_xi(xi);

  const Amplitude zero{0.0, 0.0};
  auto tr = [&](double delta_sq) {
    return conclusive_probs(zero, Amplitude{std::sqrt(delta_sq), 0.0}, sigma,
                            n_a, n_b, n_c);
  };
  const double e1r1 = phase_keying_average(xi, [&](double d) { return tr(d).e1_rho1; });
  const double e1r2 = phase_keying_average(xi, [&](double d) { return tr(d).e1_rho2; });
  const double e2r1 = phase_keying_average(xi, [&](double d) { return tr(d).e2_rho1; });
  const double e2r2 = phase_keying_average(xi, [&](double d) { return tr(d).e2_rho2; });

  ReliabilityPair out;
  out.r1 = e1r1 / (e1r1 + e1r2);
  out.r2 = e2r2 / (e2r2 + e2r1);
  return out;
}

RatesReport averaged_rates_closed(double n_a, double n_b, double sigma,
                                  double xi) {
  check_count(n_a, "n_a");
  check_count(n_b, "n_b");
  check_sigma(sigma);
  check_xi(xi);

  const double two_sig = 2.0 * sigma * sigma;
  const double denom = 1.0 + two_sig + 8.0 * coeff_sym(n_a, n_b) * xi * xi;
  RatesReport out;
  out.p_success = (1.0 - 1.0 / denom) / (1.0 + two_sig);
  out.p_error = (two_sig / denom) / (1.0 + two_sig);
  out.p_failure = two_sig / (1.0 + two_sig) +
                  (1.0 - two_sig) / (1.0 + two_sig) / denom;
  const Reliability rel = reliability_closed(n_a, n_b, sigma, xi);
  out.reliability = rel.r;
  out.theta = rel.theta;
  return out;
}

McRates mc_rates(int n_a, int n_b, double sigma, double xi,
                 std::uint64_t shots, std::uint64_t seed) {
  if (n_a < 1 || n_b < 1) throw DomainError("copy counts must be at least one");
  check_sigma(sigma);
  check_xi(xi);
  if (shots < 1) throw InvalidShotCount("need at least one shot");

  const UISetup setup = build_two_ref_setup(n_a, n_b, n_b, 0.5);
  const GroupLayout& ga = setup.layout.unknown;
  const GroupLayout& gb = setup.layout.refs[0];
  const GroupLayout& gc = setup.layout.refs[1];
  const int mode_d = setup.layout.aux_modes[0];

  std::uint64_t n_success = 0;
  std::uint64_t n_error = 0;
  std::uint64_t n_fail = 0;
  ModeRegister reg = ModeRegister::vacuum(setup.layout.mode_count);
  for (std::uint64_t r = 0; r < shots; ++r) {
    RngStream rng(seed, r);
    const Amplitude alpha = sample_displacement(xi, rng);  // xi-Gaussian center
    const Amplitude a1 = alpha;
    const Amplitude a2 = -alpha;
    const int truth = (rng.next_u64() & 1ULL) ? 2 : 1;
    const Amplitude unknown = (truth == 1) ? a1 : a2;

    for (int i = 0; i < ga.copies; ++i) {
      reg.amps[ga.first_mode + i] = unknown + sample_displacement(sigma, rng);
    }
    for (int i = 0; i < gb.copies; ++i) {
      reg.amps[gb.first_mode + i] = a1 + sample_displacement(sigma, rng);
    }
    for (int i = 0; i < gc.copies; ++i) {
      reg.amps[gc.first_mode + i] = a2 + sample_displacement(sigma, rng);
    }
    reg.amps[mode_d] = sample_displacement(sigma, rng);

    ModeRegister evolved = apply_network(setup.network, reg);
    ClickPattern pattern;
    for (int mode : setup.bank.monitored_modes) {
      const double mean = std::norm(evolved.amps[mode]);
      pattern.counts.push_back(rng.uniform01() > std::exp(-mean) ? 1 : 0);
    }
    const UIOutcome outcome = classify_two_ref(pattern);
    if (!outcome.is_conclusive()) {
      ++n_fail;
    } else if (outcome.index == truth) {
      ++n_success;
    } else {
      ++n_error;
    }
  }

  const double n = static_cast<double>(shots);
  const std::uint64_t n_conc = n_success + n_error;
  McRates out;
  out.shots = shots;
  out.conclusive = n_conc;
  out.estimate.p_success = n_success / n;
  out.estimate.p_error = n_error / n;
  out.estimate.p_failure = n_fail / n;
  out.estimate.reliability =
      n_conc ? static_cast<double>(n_success) / static_cast<double>(n_conc) : 1.0;
  const Reliability rel = reliability_closed(n_a, n_b, sigma, xi);
  out.estimate.theta = rel.theta;

  auto binom_se = [](double p, double count) {
    return count > 0.0 ? std::sqrt(p * (1.0 - p) / count) : 0.0;
  };
  out.standard_error.p_success = binom_se(out.estimate.p_success, n);
  out.standard_error.p_error = binom_se(out.estimate.p_error, n);
  out.standard_error.p_failure = binom_se(out.estimate.p_failure, n);
  out.standard_error.reliability =
      binom_se(out.estimate.reliability, static_cast<double>(n_conc));
  out.standard_error.theta = 0.0;
  return out;
}

double gaussian_integral_Im(int m, double a, double b, Amplitude x,
                            double sigma) {
  if (m < 0) throw DomainError("m must be nonnegative");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("a and b must be positive");
  check_sigma(sigma);
  const double shift = b + 2.0 * a * sigma * sigma * m;
  return (b / shift) * std::exp(-(a / shift) * std::norm(x));
}

double gaussian_integral_Im_recursive(int m, double a, double b, Amplitude x,
                                      double sigma) {
  if (m < 0) throw DomainError("m must be nonnegative");
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("a and b must be positive");
  check_sigma(sigma);
  if (m == 0) return std::exp(-(a / b) * std::norm(x));
  const double step = 2.0 * a * sigma * sigma;
  return (b / (b + step)) *
         gaussian_integral_Im_recursive(m - 1, a, b + step, x, sigma);
}

}  // namespace uilab
