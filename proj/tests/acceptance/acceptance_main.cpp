// Acceptance suite: one check per release criterion, each printing a single
// PASS/FAIL line. Run all criteria (no arguments) or one (--criterion N).

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "uilab/detection.hpp"
#include "uilab/experiment.hpp"
#include "uilab/noise.hpp"
#include "uilab/optics.hpp"
#include "uilab/optimality.hpp"
#include "uilab/protocols.hpp"
#include "uilab/recovery.hpp"
#include "uilab/rng.hpp"

using namespace uilab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Amplitude rand_amp(RngStream& rng) {
  return {2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
}

// ---- criterion 1: sampled two-reference success matches the closed form

bool criterion_two_ref_sampling(std::string& detail) {
  const double copies[][3] = {{1, 1, 1}, {2, 1, 1}, {1, 2, 2}, {3, 3, 3}};
  const double deltas[] = {0.5, 1.0, 2.0};
  const std::uint64_t shots = 1000000;
  std::uint64_t seed = 11000;
  double worst_pull = 0.0;
  double worst_cell_seconds = 0.0;
  for (const auto& c : copies) {
    for (double d : deltas) {
      const auto start = Clock::now();
      const UISetup setup = build_two_ref_setup(c[0], c[1], c[2], 0.5);
      const Amplitude a2{d, 0.0};
      const double expect =
          analytic_two_ref(c[0], c[1], c[2], 0.5, {0, 0}, a2).p;
      const UIShotCounts counts =
          simulate_ui(setup, {{0, 0}, a2}, {0.5, 0.5}, shots, seed++);
      const double se =
          std::sqrt(expect * (1.0 - expect) / static_cast<double>(shots));
      const double pull =
          std::abs(counts.success_frequency() - expect) / se;
      worst_pull = std::max(worst_pull, pull);
      worst_cell_seconds = std::max(worst_cell_seconds, seconds_since(start));
      if (pull >= 3.0) {
        std::ostringstream os;
        os << "cell (" << c[0] << "," << c[1] << "," << c[2] << ") delta=" << d
           << " freq=" << counts.success_frequency() << " expected=" << expect
           << " pull=" << pull;
        detail = os.str();
        return false;
      }
    }
  }
  std::ostringstream os;
  os << "12 cells at 1e6 shots, worst pull " << worst_pull
     << " sigma, slowest cell " << worst_cell_seconds << " s";
  detail = os.str();
  return worst_cell_seconds < 30.0;
}

// ---- criterion 2: no false conclusives, exact cancellation ports

bool criterion_no_false_conclusives(std::string& detail) {
  const std::uint64_t shots = 100000;
  std::uint64_t wrong_total = 0;
  double worst_amp = 0.0;
  {
    const UISetup setup = build_two_ref_setup(1, 1, 1, 0.5);
    const std::vector<Amplitude> refs{{0.3, -0.2}, {1.4, 0.7}};
    for (int h = 1; h <= 2; ++h) {
      const ModeRegister out = apply_network(
          setup.network, prepare_input(setup, refs[h - 1], refs));
      worst_amp = std::max(
          worst_amp, std::abs(out.amps[setup.bank.monitored_modes[2 - h]]));
      std::vector<double> priors{0.0, 0.0};
      priors[h - 1] = 1.0;
      wrong_total += simulate_ui(setup, refs, priors, shots, 2200 + h).wrong;
    }
  }
  {
    const UISetup setup = build_multi_ref_setup(3, 1, 1);
    const std::vector<Amplitude> refs{{0, 0}, {1.5, 0}, {0, 1.5}};
    for (int h = 1; h <= 3; ++h) {
      const ModeRegister out = apply_network(
          setup.network, prepare_input(setup, refs[h - 1], refs));
      worst_amp = std::max(
          worst_amp, std::abs(out.amps[setup.bank.monitored_modes[h - 1]]));
      std::vector<double> priors{0.0, 0.0, 0.0};
      priors[h - 1] = 1.0;
      wrong_total += simulate_ui(setup, refs, priors, shots, 2300 + h).wrong;
    }
  }
  std::ostringstream os;
  os << "false conclusives " << wrong_total << "/5e5 shots, worst cancellation "
     << worst_amp;
  detail = os.str();
  return wrong_total == 0 && worst_amp < 1e-12;
}

// ---- criterion 3: large reference supply reaches the known-states limit

bool criterion_known_states_limit(std::string& detail) {
  double worst = 0.0;
  for (int i = 1; i <= 40; ++i) {
    const double d = 0.1 * i;
    const double p = analytic_two_ref(1, 1e6, 1e6, 0.5, {0, 0}, {d, 0}).p;
    worst = std::max(worst, std::abs(p - idp_limit_P_delta_sq(1, d * d)));
  }
  std::ostringstream os;
  os << "max deviation " << worst << " over delta in [0.1, 4]";
  detail = os.str();
  return worst < 1e-5;
}

// ---- criterion 4: recursion/network agreement and round-probability curves

bool criterion_recovery_recursion(std::string& detail) {
  if (std::abs(lambda_step(1.0) - (7.0 - std::sqrt(13.0)) / 6.0) > 1e-12) {
    detail = "first dilution step off";
    return false;
  }
  RngStream rng(4400, 0);
  double worst_amp = 0.0;
  for (int trial = 0; trial < 3; ++trial) {
    const Amplitude a1 = rand_amp(rng);
    const Amplitude a2 = rand_amp(rng);
    double lambda = 1.0;
    for (int k = 1; k <= 10; ++k) {
      const double next = lambda_step(lambda);
      const double root = std::sqrt(next);
      for (int winner = 1; winner <= 2; ++winner) {
        const UISetup setup = build_two_ref_setup(1.0, lambda, lambda, 0.5);
        const ModeRegister out = apply_network(
            setup.network,
            prepare_input(setup, winner == 1 ? a1 : a2, {a1, a2}));
        ModeRegister rec_in;
        rec_in.amps = {out.amps[1], out.amps[3], {0, 0}};
        const ModeRegister rec =
            apply_network(build_recovery_network(lambda, winner), rec_in);
        worst_amp = std::max(worst_amp, std::abs(rec.amps[0] - root * a1));
        worst_amp = std::max(worst_amp, std::abs(rec.amps[1] - root * a2));
      }
      lambda = next;
    }
  }
  if (worst_amp >= 1e-10) {
    std::ostringstream os;
    os << "network/recursion mismatch " << worst_amp;
    detail = os.str();
    return false;
  }

  const auto start = Clock::now();
  const int rounds[] = {1, 20, 40, 60, 80};
  std::vector<std::vector<double>> curves;
  for (int r : rounds) {
    std::vector<double> curve;
    for (int i = 0; i < 120; ++i) {
      curve.push_back(cumulative_success(r, 6.0 * i / 119.0));
    }
    curves.push_back(std::move(curve));
  }
  const double gen_seconds = seconds_since(start);
  for (const auto& curve : curves) {
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (curve[i] < curve[i - 1] - 1e-15) {
        detail = "round curve not monotone in the separation";
        return false;
      }
    }
  }
  for (std::size_t c = 1; c < curves.size(); ++c) {
    for (std::size_t i = 0; i < curves[c].size(); ++i) {
      if (curves[c][i] > curves[c - 1][i] + 1e-15) {
        detail = "round curves not ordered downward in round number";
        return false;
      }
    }
  }
  std::ostringstream os;
  os << "network agreement to " << worst_amp << ", curves generated in "
     << gen_seconds << " s";
  detail = os.str();
  return gen_seconds < 5.0;
}

// ---- criterion 5: recovery rounds against pre-splitting on the full grid

bool criterion_strategy_comparison(std::string& detail) {
  double worst = 1.0;
  int worst_n = 0;
  double worst_d = 0.0;
  int negative_cells = 0;
  for (int n = 1; n <= 10; ++n) {
    for (int i = 1; i <= 40; ++i) {
      const double d = 0.1 * i;
      const double diff = compare_strategies(n, d).difference;
      if (diff < -1e-12) ++negative_cells;
      if (diff < worst) {
        worst = diff;
        worst_n = n;
        worst_d = d;
      }
    }
  }
  std::ostringstream os;
  os << "min difference " << worst << " at N=" << worst_n << " delta=" << worst_d
     << " (" << negative_cells << "/400 cells below -1e-12)";
  detail = os.str();
  return worst >= -1e-12;
}

// ---- criterion 6: noisy success/error/failure rates

bool criterion_noise_rates(std::string& detail) {
  const auto start = Clock::now();
  RngStream rng(6600, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double na = 1 + static_cast<int>(rng.next_u64() % 4);
    const double nb = 1 + static_cast<int>(rng.next_u64() % 4);
    const double sigma = 2.0 * rng.uniform01();
    const double xi = 0.1 + 3.0 * rng.uniform01();
    const RatesReport r = averaged_rates_closed(na, nb, sigma, xi);
    if (std::abs(r.p_success + r.p_error + r.p_failure - 1.0) > 1e-12) {
      detail = "sum rule violated";
      return false;
    }
  }

  const RatesReport closed = averaged_rates_closed(1, 1, 0.25, 1.0);
  if (std::abs(closed.p_success - 0.654457) > 1e-6 ||
      std::abs(closed.p_error - 0.029304) > 1e-6 ||
      std::abs(closed.p_failure - 0.316239) > 1e-6 ||
      std::abs(closed.reliability - 0.957143) > 1e-6) {
    detail = "closed-form values off at sigma=0.25, xi=1";
    return false;
  }

  const std::uint64_t shots = 1000000;
  const McRates mc = mc_rates(1, 1, 0.25, 1.0, shots, 660601);
  const double pulls[] = {
      std::abs(mc.estimate.p_success - closed.p_success) /
          mc.standard_error.p_success,
      std::abs(mc.estimate.p_error - closed.p_error) /
          mc.standard_error.p_error,
      std::abs(mc.estimate.p_failure - closed.p_failure) /
          mc.standard_error.p_failure,
      std::abs(mc.estimate.reliability - closed.reliability) /
          mc.standard_error.reliability,
  };
  double worst_pull = 0.0;
  for (double p : pulls) worst_pull = std::max(worst_pull, p);
  if (worst_pull >= 3.0) {
    std::ostringstream os;
    os << "sampled rates off, worst pull " << worst_pull << " sigma";
    detail = os.str();
    return false;
  }

  const McRates strong = mc_rates(1, 1, 0.25, 10.0, shots, 660602);
  const double elapsed = seconds_since(start);
  std::ostringstream os;
  os << "worst pull " << worst_pull << " sigma; strong-signal p_error "
     << strong.estimate.p_error << ", p_failure " << strong.estimate.p_failure
     << "; " << elapsed << " s";
  detail = os.str();
  return strong.estimate.p_error < 1e-3 && strong.estimate.p_failure > 0.05 &&
         elapsed < 60.0;
}

// ---- criterion 7: coupling optimum and detector reduction

bool criterion_coupling_optimum(std::string& detail) {
  for (double d : {0.5, 1.0, 2.0, 4.0}) {
    const Lambda1Optimum opt = optimize_lambda1(d);
    if (opt.degenerate || std::abs(opt.l1 - 1.0 / 3.0) > 1e-6) {
      std::ostringstream os;
      os << "optimum at delta=" << d << " is " << opt.l1;
      detail = os.str();
      return false;
    }
  }
  RngStream rng(7700, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> l1, l2;
    const int n1 = 1 + static_cast<int>(rng.next_u64() % 5);
    const int n2 = 1 + static_cast<int>(rng.next_u64() % 5);
    for (int i = 0; i < n1; ++i) l1.push_back(rng.uniform01());
    for (int i = 0; i < n2; ++i) l2.push_back(rng.uniform01());
    worst = std::max(
        worst,
        multi_detector_reduction_check(l1, l2, 0.3 + 3.0 * rng.uniform01())
            .defect);
  }
  std::ostringstream os;
  os << "optimum 1/3 at four separations; reduction defect max " << worst;
  detail = os.str();
  return worst < 1e-12;
}

// ---- criterion 8: Gaussian overlap average, recursion and quadrature

bool criterion_gaussian_integral(std::string& detail) {
  RngStream rng(8800, 0);
  double worst_rel = 0.0;
  for (int m = 0; m <= 6; ++m) {
    for (int trial = 0; trial < 30; ++trial) {
      const double a = 0.2 + 2.0 * rng.uniform01();
      const double b = 0.2 + 2.0 * rng.uniform01();
      const double sigma = rng.uniform01();
      const Amplitude x = rand_amp(rng);
      const double closed = gaussian_integral_Im(m, a, b, x, sigma);
      const double rec = gaussian_integral_Im_recursive(m, a, b, x, sigma);
      worst_rel = std::max(
          worst_rel, std::abs(closed - rec) / std::max(1.0, std::abs(closed)));
    }
  }
  if (worst_rel >= 1e-12) {
    detail = "recursion and closed form disagree";
    return false;
  }
  // independent quadrature of the single-displacement average; the
  // integrand factorizes into two real-line Gaussians.
  const double a = 1.0, b = 2.0, sigma = 0.3;
  const Amplitude x{1.0, 1.0};
  auto one_axis = [&](double x0) {
    const double span = 10.0 * sigma + 6.0 * std::abs(x0) + 1.0;
    const int n = 4096;
    const double h = 2.0 * span / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double u = -span + i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      sum += w * std::exp(-u * u / (2.0 * sigma * sigma) -
                          (a / b) * (x0 + u) * (x0 + u));
    }
    return sum * h / 3.0 / std::sqrt(2.0 * std::numbers::pi * sigma * sigma);
  };
  const double numeric = one_axis(x.real()) * one_axis(x.imag());
  const double closed = gaussian_integral_Im(1, a, b, x, sigma);
  std::ostringstream os;
  os << "recursion max rel diff " << worst_rel << "; quadrature gap "
     << std::abs(closed - numeric);
  detail = os.str();
  return std::abs(closed - numeric) < 1e-3;
}

// ---- criterion 9: weak sequential scheme

bool criterion_weak_scheme(std::string& detail) {
  const Amplitude a1{0.0, 0.0};
  const Amplitude a2{1.0, 0.0};
  const double expect = -std::expm1(-1.0 / 3.0);
  const int runs = 100000;
  double worst_pull = 0.0;
  for (int N : {1, 4, 16}) {
    std::uint64_t correct = 0;
    for (int r = 0; r < runs; ++r) {
      RngStream rng(9900 + N, r);
      const int truth = (rng.next_u64() & 1ULL) ? 2 : 1;
      const WeakRunResult res =
          weak_ui_run(N, Hypothesis{truth, {a1, a2}}, rng);
      if (res.outcome.is_conclusive()) {
        if (res.outcome.index != truth) {
          detail = "false conclusive in the weak scheme";
          return false;
        }
        ++correct;
      }
    }
    const double se = std::sqrt(expect * (1.0 - expect) / runs);
    const double pull =
        std::abs(static_cast<double>(correct) / runs - expect) / se;
    worst_pull = std::max(worst_pull, pull);
    if (pull >= 3.0) {
      std::ostringstream os;
      os << "N=" << N << " frequency pull " << pull << " sigma";
      detail = os.str();
      return false;
    }
  }
  // leftover scaling across conclusive rounds
  const int N = 4;
  double worst_amp = 0.0;
  int seen = 0;
  for (int r = 0; r < 5000 && seen < 200; ++r) {
    RngStream rng(9944, r);
    const int truth = (rng.next_u64() & 1ULL) ? 2 : 1;
    const WeakRunResult res = weak_ui_run(N, Hypothesis{truth, {a1, a2}}, rng);
    if (!res.outcome.is_conclusive()) continue;
    ++seen;
    const int k = res.round;
    const double w_win = std::sqrt(2.0 * (N - k) / N);
    const double w_lose = std::sqrt(static_cast<double>(N - k) / N);
    const Amplitude want1 = (truth == 1 ? w_win : w_lose) * a1;
    const Amplitude want2 = (truth == 1 ? w_lose : w_win) * a2;
    worst_amp = std::max(worst_amp, std::abs(res.leftover->amps[0] - want1));
    worst_amp = std::max(worst_amp, std::abs(res.leftover->amps[1] - want2));
  }
  std::ostringstream os;
  os << "worst frequency pull " << worst_pull << " sigma; leftover scaling to "
     << worst_amp << " over " << seen << " conclusive runs";
  detail = os.str();
  return seen > 0 && worst_amp < 1e-12;
}

// ---- criterion 10: byte-identical reruns

bool criterion_determinism(std::string& detail) {
  ExperimentConfig cfg;
  cfg.protocol = Protocol::TwoRef;
  cfg.shots = 20000;
  cfg.seed = 123456;
  cfg.sweep = SweepAxis{"delta", 0.5, 2.0, 4};
  const ResultTable t1 = run_experiment(cfg);
  const ResultTable t2 = run_experiment(cfg);
  if (t1.to_csv() != t2.to_csv() || t1.to_json_text() != t2.to_json_text()) {
    detail = "two-reference tables differ between reruns";
    return false;
  }

  ExperimentConfig noisy;
  noisy.protocol = Protocol::NoiseRates;
  noisy.shots = 20000;
  noisy.seed = 99;
  const bool noise_same =
      run_experiment(noisy).to_csv() == run_experiment(noisy).to_csv();
  if (!noise_same) {
    detail = "noise-rate tables differ between reruns";
    return false;
  }
  detail = "CSV and JSON reruns byte-identical";
  return true;
}

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "two-reference sampling matches the closed form",
       criterion_two_ref_sampling},
      {2, "no false conclusive outcomes; cancellation ports in vacuum",
       criterion_no_false_conclusives},
      {3, "large reference supply reaches the known-states limit",
       criterion_known_states_limit},
      {4, "recovery recursion agrees with the network; ordered round curves",
       criterion_recovery_recursion},
      {5, "recovery rounds never lose to pre-splitting on the grid",
       criterion_strategy_comparison},
      {6, "noisy rates: sum rule, closed forms and sampling agree",
       criterion_noise_rates},
      {7, "detector-coupling optimum at 1/3; reduction equality",
       criterion_coupling_optimum},
      {8, "Gaussian overlap average: recursion and quadrature agree",
       criterion_gaussian_integral},
      {9, "weak sequential scheme: rate and leftover scaling",
       criterion_weak_scheme},
      {10, "experiments re-run byte-identically per seed",
       criterion_determinism},
  };

  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[i + 1]);
      ++i;
    }
  }

  int failures = 0;
  int executed = 0;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    ++executed;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": "
              << c.title;
    if (!detail.empty()) std::cout << " [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++failures;
  }
  if (executed == 0) {
    std::cerr << "no such criterion\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
