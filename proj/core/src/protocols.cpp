#include "uilab/protocols.hpp"

#include <cmath>
#include <numeric>

#include "uilab/search.hpp"

namespace uilab {

namespace {

constexpr double kIntegerWeightTol = 1e-9;

bool integral_weight(double w, int& out) {
  const double r = std::round(w);
  if (r >= 1.0 && std::abs(w - r) < kIntegerWeightTol) {
    out = static_cast<int>(r);
    return true;
  }
  return false;
}

void check_weight(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw InvalidCopyCount(std::string(what) + " must be a positive count or weight");
  }
}

void check_t1(double t1) {
  if (!(t1 >= 0.0 && t1 <= 1.0)) {
    throw InvalidTransmittivity("t1 must lie in [0, 1]");
  }
}

GroupLayout make_group(int first, double weight) {
  GroupLayout g;
  g.first_mode = first;
  g.weight = weight;
  int copies = 1;
  if (integral_weight(weight, copies)) {
    g.copies = copies;
    g.fractional = false;
  } else {
    g.copies = 1;
    g.fractional = true;
  }
  return g;
}

void push_group_labels(std::vector<std::string>& labels, const GroupLayout& g,
                       const std::string& stem) {
  if (g.copies == 1) {
    labels.push_back(stem);
  } else {
    for (int i = 1; i <= g.copies; ++i) labels.push_back(stem + std::to_string(i));
  }
}

void fill_group(ModeRegister& reg, const GroupLayout& g, Amplitude amp) {
  if (g.fractional) {
    reg.amps[g.first_mode] = std::sqrt(g.weight) * amp;
  } else {
    for (int i = 0; i < g.copies; ++i) reg.amps[g.first_mode + i] = amp;
  }
}

void check_priors(const std::vector<double>& priors) {
  double sum = 0.0;
  for (double p : priors) {
    if (!(p >= 0.0)) throw DomainError("priors must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw DomainError("priors must sum to one");
  }
}

}  // namespace

void Hypothesis::validate() const {
  if (ref_amps.empty()) throw DomainError("hypothesis needs reference amplitudes");
  if (index < 1 || index > static_cast<int>(ref_amps.size())) {
    throw IndexOutOfRange("hypothesis index out of range");
  }
}

void UIConfig::validate() const {
  if (m < 2) throw InvalidCopyCount("need at least two reference kinds");
  check_weight(n_a, "n_a");
  if (static_cast<int>(n_refs.size()) != m) {
    throw InvalidCopyCount("n_refs must list one count per reference kind");
  }
  for (double w : n_refs) check_weight(w, "reference count");
  if (static_cast<int>(priors.size()) != m) {
    throw DomainError("priors must list one weight per reference kind");
  }
  check_priors(priors);
  if (t1_override) check_t1(*t1_override);
}

ModeRegister prepare_input(const UISetup& setup, Amplitude unknown,
                           const std::vector<Amplitude>& refs) {
  if (refs.size() != setup.layout.refs.size()) {
    throw IndexOutOfRange("reference amplitude count does not match layout");
  }
  ModeRegister reg = ModeRegister::vacuum(setup.layout.mode_count,
                                          setup.layout.labels);
  fill_group(reg, setup.layout.unknown, unknown);
  for (std::size_t i = 0; i < refs.size(); ++i) {
    fill_group(reg, setup.layout.refs[i], refs[i]);
  }
  return reg;
}

UIOutcome classify_two_ref(const ClickPattern& pattern) {
  if (pattern.counts.size() != 2) {
    throw IndexOutOfRange("two-reference rule expects a two-detector pattern");
  }
  const bool d1 = pattern.counts[0] > 0;
  const bool d2 = pattern.counts[1] > 0;
  if (d1 && !d2) return UIOutcome::conclusive(1);
  if (d2 && !d1) return UIOutcome::conclusive(2);
  return UIOutcome::inconclusive();
}

UIOutcome classify_multi_ref(const ClickPattern& pattern, int m) {
  if (static_cast<int>(pattern.counts.size()) != m) {
    throw IndexOutOfRange("pattern size does not match detector count");
  }
  int silent = -1;
  int fired = 0;
  for (int k = 0; k < m; ++k) {
    if (pattern.counts[k] > 0) {
      ++fired;
    } else {
      silent = k;
    }
  }
  if (fired == m - 1) return UIOutcome::conclusive(silent + 1);
  return UIOutcome::inconclusive();
}

UIOutcome conclude(const UISetup& setup, const ClickPattern& pattern) {
  switch (setup.rule.kind) {
    case ConclusionRule::Kind::TwoRef:
      return classify_two_ref(pattern);
    case ConclusionRule::Kind::MultiRefAllButOne:
      return classify_multi_ref(pattern, setup.rule.m);
  }
  return UIOutcome::inconclusive();
}

std::pair<double, double> two_ref_transmittivities(double n_a, double n_b,
                                                   double n_c, double t1) {
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");
  check_weight(n_c, "n_c");
  check_t1(t1);
  const double t2 = 1.0 / (1.0 + (n_a / n_b) * t1);
  const double t3 = (1.0 - t1) / (n_c / n_a + 1.0 - t1);
  return {t2, t3};
}

UISetup build_two_ref_setup(double n_a, double n_b, double n_c, double t1) {
  const auto [t2, t3] = two_ref_transmittivities(n_a, n_b, n_c, t1);

  UISetup setup;
  InputLayout& lay = setup.layout;
  lay.unknown = make_group(0, n_a);
  GroupLayout ref1 = make_group(lay.unknown.copies, n_b);
  GroupLayout ref2 = make_group(ref1.first_mode + ref1.copies, n_c);
  lay.refs = {ref1, ref2};
  const int mode_d = ref2.first_mode + ref2.copies;
  lay.aux_modes = {mode_d};
  lay.mode_count = mode_d + 1;

  push_group_labels(lay.labels, lay.unknown, "A");
  push_group_labels(lay.labels, ref1, "B");
  push_group_labels(lay.labels, ref2, "C");
  lay.labels.push_back("D");

  Network& net = setup.network;
  net.mode_count = lay.mode_count;
  append_concentrator(net, lay.unknown.first_mode, lay.unknown.copies);
  append_concentrator(net, ref1.first_mode, ref1.copies);
  append_concentrator(net, ref2.first_mode, ref2.copies);

  const int a0 = lay.unknown.first_mode;
  const int b0 = ref1.first_mode;
  const int c0 = ref2.first_mode;
  // mode orders chosen so the comparison ports cancel:
  // B1 dilutes the unknown onto D, B2 compares against reference 1 on A,
  // B3 against reference 2 on C.
  net.elements.push_back({t1, mode_d, a0});
  net.elements.push_back({t2, b0, a0});
  net.elements.push_back({t3, mode_d, c0});
  net.validate();

  setup.bank.monitored_modes = {c0, a0};
  setup.bank.names = {"D1", "D2"};
  setup.bank.resolve_numbers = false;
  setup.rule = {ConclusionRule::Kind::TwoRef, 2};
  return setup;
}

TwoRefProbabilities analytic_two_ref(double n_a, double n_b, double n_c,
                                     double t1, Amplitude a1, Amplitude a2,
                                     std::array<double, 2> priors) {
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");
  check_weight(n_c, "n_c");
  check_t1(t1);
  check_priors({priors[0], priors[1]});

  const double delta_sq = std::norm(a1 - a2);
  const double k1 = n_c * n_a * (1.0 - t1) / (n_c + n_a * (1.0 - t1));
  const double k2 = n_b * n_a * t1 / (n_b + n_a * t1);
  TwoRefProbabilities out;
  out.p1 = -std::expm1(-k1 * delta_sq);
  out.p2 = -std::expm1(-k2 * delta_sq);
  out.p = priors[0] * out.p1 + priors[1] * out.p2;
  return out;
}

double two_ref_symmetric_P(double n_a, double n_b, double delta_sq) {
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");
  return -std::expm1(-(n_a * n_b / (n_a + 2.0 * n_b)) * delta_sq);
}

std::optional<double> optimal_t1(double n_a, double n_b, double n_c) {
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");
  check_weight(n_c, "n_c");
  if (n_b == n_c) return 0.5;
  return std::nullopt;
}

double optimal_t1_search(double n_a, double n_b, double n_c, double delta_sq,
                         std::array<double, 2> priors, double tol) {
  if (!(delta_sq >= 0.0)) throw DomainError("delta_sq must be nonnegative");
  const Amplitude a1{0.0, 0.0};
  const Amplitude a2{std::sqrt(delta_sq), 0.0};
  return golden_section_maximize(
      [&](double t1) {
        return analytic_two_ref(n_a, n_b, n_c, t1, a1, a2, priors).p;
      },
      0.0, 1.0, tol);
}

double ResourceAllocation::success(double delta) const {
  return -std::expm1(-coeff * delta * delta);
}

ResourceAllocation resource_tradeoff(int N) {
  if (N < 3) throw InvalidTotal("need at least three modes to allocate");
  // n_a(N - n_a) maximized over splits with N - n_a even; when floor(N/2)
  // has the wrong parity its two neighbors are the only candidates, and
  // ties (even N) resolve to the smaller unknown count
  int n_a = N / 2;
  if ((N - n_a) % 2 != 0) {
    const int down = n_a - 1;
    const int up = n_a + 1;
    n_a = down;
    if (up <= N - 2 &&
        static_cast<long>(up) * (N - up) > static_cast<long>(down) * (N - down)) {
      n_a = up;
    }
  }
  ResourceAllocation out;
  out.n_a = n_a;
  out.n_ref = (N - n_a) / 2;
  out.coeff = static_cast<double>(n_a) * (N - n_a) / (2.0 * N);
  return out;
}

double idp_limit_P_delta_sq(double n_a, double delta_sq) {
  check_weight(n_a, "n_a");
  return -std::expm1(-0.5 * n_a * delta_sq);
}

double idp_limit_P(double n_a, Amplitude a1, Amplitude a2) {
  return idp_limit_P_delta_sq(n_a, std::norm(a1 - a2));
}

UISetup build_multi_ref_setup(int m, double n_a, double n_b) {
  if (m < 2) throw InvalidCopyCount("need at least two reference kinds");
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");

  UISetup setup;
  InputLayout& lay = setup.layout;
  lay.unknown = make_group(0, n_a);
  int next = lay.unknown.copies;
  lay.refs.reserve(m);
  for (int j = 1; j <= m; ++j) {
    GroupLayout g = make_group(next, n_b);
    next += g.copies;
    lay.refs.push_back(g);
  }
  const int first_branch = next;
  for (int j = 1; j < m; ++j) lay.aux_modes.push_back(first_branch + j - 1);
  lay.mode_count = first_branch + (m - 1);

  push_group_labels(lay.labels, lay.unknown, "A");
  for (int j = 1; j <= m; ++j) {
    push_group_labels(lay.labels, lay.refs[j - 1], "R" + std::to_string(j) + "_");
  }
  for (int j = 1; j < m; ++j) lay.labels.push_back("V" + std::to_string(j));

  Network& net = setup.network;
  net.mode_count = lay.mode_count;
  append_concentrator(net, lay.unknown.first_mode, lay.unknown.copies);
  for (const auto& g : lay.refs) append_concentrator(net, g.first_mode, g.copies);

  // Equal-split cascade: stage j peels intensity n_a/m off the unknown
  // onto branch V_j; the residue on A is the last branch.
  const int a0 = lay.unknown.first_mode;
  for (int j = 1; j < m; ++j) {
    const double t = 1.0 - 1.0 / (m - j + 1);
    net.elements.push_back({t, first_branch + j - 1, a0});
  }
  const double t_cmp = n_a / (n_a + m * n_b);
  std::vector<int> detector_modes;
  for (int k = 1; k <= m; ++k) {
    const int branch = (k < m) ? first_branch + k - 1 : a0;
    const int ref0 = lay.refs[k - 1].first_mode;
    net.elements.push_back({t_cmp, branch, ref0});
    detector_modes.push_back(ref0);
  }
  net.validate();

  setup.bank.monitored_modes = detector_modes;
  for (int k = 1; k <= m; ++k) setup.bank.names.push_back("D" + std::to_string(k));
  setup.bank.resolve_numbers = false;
  setup.rule = {ConclusionRule::Kind::MultiRefAllButOne, m};
  return setup;
}

double analytic_multi_ref_P(int m, double n_a, double n_b,
                            const std::vector<Amplitude>& ref_amps) {
  if (m < 2) throw InvalidCopyCount("need at least two reference kinds");
  check_weight(n_a, "n_a");
  check_weight(n_b, "n_b");
  if (static_cast<int>(ref_amps.size()) != m) {
    throw IndexOutOfRange("reference amplitude count must equal m");
  }
  const double coeff = n_a * n_b / (n_a + m * n_b);
  double p = 0.0;
  for (int j = 0; j < m; ++j) {
    double prod = 1.0;
    for (int k = 0; k < m; ++k) {
      if (k == j) continue;
      prod *= -std::expm1(-coeff * std::norm(ref_amps[j] - ref_amps[k]));
    }
    p += prod / m;
  }
  return p;
}

WeakRunResult weak_ui_run(int N, const Hypothesis& hyp, RngStream& rng) {
  if (N < 1) throw InvalidShotCount("need at least one round");
  hyp.validate();
  if (hyp.ref_amps.size() != 2) {
    throw InvalidCopyCount("weak scheme is defined for two reference kinds");
  }

  const UISetup setup = build_two_ref_setup(1.0, 1.0, 1.0, 0.5);
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const ModeRegister evolved = apply_network(
      setup.network, prepare_input(setup, scale * hyp.unknown(),
                                   {scale * hyp.ref_amps[0],
                                    scale * hyp.ref_amps[1]}));

  WeakRunResult result;
  result.outcome = UIOutcome::inconclusive();
  for (int k = 1; k <= N; ++k) {
    const ClickPattern pattern = sample_counts(evolved, setup.bank, rng);
    const UIOutcome outcome = classify_two_ref(pattern);
    if (!outcome.is_conclusive()) continue;

    result.outcome = outcome;
    result.round = k;
    const int winner = outcome.index;
    const int rem = N - k;
    Amplitude winner_amp{0.0, 0.0};
    Amplitude loser_amp{0.0, 0.0};
    if (rem > 0) {
      // the unmeasured unknown parts join the winner's reference parts
      ModeRegister w;
      w.amps.assign(static_cast<std::size_t>(2 * rem),
                    scale * hyp.ref_amps[winner - 1]);
      winner_amp = apply_network(build_concentrator(2 * rem), w).amps[0];
      ModeRegister l;
      l.amps.assign(static_cast<std::size_t>(rem),
                    scale * hyp.ref_amps[2 - winner]);
      loser_amp = apply_network(build_concentrator(rem), l).amps[0];
    }
    ModeRegister leftover;
    leftover.labels = {"R1", "R2"};
    leftover.amps = (winner == 1)
                        ? std::vector<Amplitude>{winner_amp, loser_amp}
                        : std::vector<Amplitude>{loser_amp, winner_amp};
    result.leftover = std::move(leftover);
    return result;
  }
  return result;
}

UIShotCounts simulate_ui(const UISetup& setup,
                         const std::vector<Amplitude>& ref_amps,
                         const std::vector<double>& priors,
                         std::uint64_t shots, std::uint64_t seed) {
  if (shots < 1) throw InvalidShotCount("need at least one shot");
  const int m = static_cast<int>(ref_amps.size());
  if (static_cast<int>(priors.size()) != m) {
    throw DomainError("priors must list one weight per reference kind");
  }
  check_priors(priors);

  // deterministic evolution, one register per hypothesis
  std::vector<std::vector<double>> means(m);
  for (int h = 0; h < m; ++h) {
    const ModeRegister evolved = apply_network(
        setup.network, prepare_input(setup, ref_amps[h], ref_amps));
    for (int mode : setup.bank.monitored_modes) {
      means[h].push_back(std::norm(evolved.amps[mode]));
    }
  }

  UIShotCounts counts;
  counts.shots = shots;
  ClickPattern pattern;
  for (std::uint64_t r = 0; r < shots; ++r) {
    RngStream rng(seed, r);
    const double u = rng.uniform01();
    int h = 0;
    double cum = 0.0;
    for (; h < m - 1; ++h) {
      cum += priors[h];
      if (u < cum) break;
    }
    pattern.counts.clear();
    for (double mean : means[h]) {
      if (setup.bank.resolve_numbers) {
        pattern.counts.push_back(rng.poisson(mean));
      } else {
        pattern.counts.push_back(rng.uniform01() > std::exp(-mean) ? 1 : 0);
      }
    }
    const UIOutcome outcome = conclude(setup, pattern);
    if (!outcome.is_conclusive()) {
      ++counts.inconclusive;
    } else if (outcome.index == h + 1) {
      ++counts.correct;
    } else {
      ++counts.wrong;
    }
  }
  return counts;
}

}  // namespace uilab
