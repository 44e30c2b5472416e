#include "uilab/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "uilab/detection.hpp"
#include "uilab/noise.hpp"
#include "uilab/optics.hpp"
#include "uilab/optimality.hpp"
#include "uilab/protocols.hpp"
#include "uilab/recovery.hpp"
#include "uilab/rng.hpp"

namespace uilab {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct ProtocolInfo {
  Protocol protocol;
  const char* name;
  std::set<std::string> scalar_keys;
  std::set<std::string> list_keys;
  std::set<std::string> sweep_keys;
};

const std::vector<ProtocolInfo>& protocol_table() {
  static const std::vector<ProtocolInfo> table = {
      {Protocol::TwoRef,
       "two_ref",
       {"n_a", "n_b", "n_c", "t1", "delta"},
       {"alpha1", "alpha2", "priors"},
       {"delta", "t1", "n_a", "n_b", "n_c"}},
      {Protocol::MultiRef,
       "multi_ref",
       {"m", "n_a", "n_b", "scale"},
       {"ref_amps"},
       {"scale", "n_a", "n_b"}},
      {Protocol::Weak, "weak", {"N", "delta"}, {"alpha1", "alpha2"}, {"N", "delta"}},
      {Protocol::RecoveryRounds, "recovery_rounds", {"delta"}, {"rounds"}, {"delta"}},
      {Protocol::SameUnknown, "same_unknown", {"delta"}, {}, {"delta"}},
      {Protocol::SplittingCompare,
       "splitting_compare",
       {"N", "delta"},
       {},
       {"delta", "N"}},
      {Protocol::NoiseRates,
       "noise_rates",
       {"n_a", "n_b", "sigma", "xi"},
       {},
       {"xi", "sigma", "n_a", "n_b"}},
      {Protocol::OptimalitySweep, "optimality_sweep", {"delta"}, {}, {"delta"}},
      {Protocol::GaussianIntegralCheck,
       "gaussian_integral_check",
       {"m_max", "a", "b", "sigma"},
       {"x"},
       {}},
  };
  return table;
}

const ProtocolInfo& info_for(Protocol p) {
  for (const auto& row : protocol_table()) {
    if (row.protocol == p) return row;
  }
  throw ConfigError("unknown protocol");
}

/// Scalar view over a config with one swept value overriding.
struct ParamView {
  const ExperimentConfig& cfg;
  std::string axis;
  double axis_value = 0.0;

  bool has(const std::string& key) const {
    return key == axis || cfg.scalars.count(key) > 0;
  }
  double get(const std::string& key, double fallback) const {
    if (key == axis) return axis_value;
    auto it = cfg.scalars.find(key);
    return it == cfg.scalars.end() ? fallback : it->second;
  }
  int get_int(const std::string& key, int fallback) const {
    const double v = get(key, static_cast<double>(fallback));
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9) {
      throw ConfigError("parameter must be an integer", key);
    }
    return static_cast<int>(r);
  }
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> fallback) const {
    auto it = cfg.lists.find(key);
    return it == cfg.lists.end() ? fallback : it->second;
  }
  Amplitude get_amp(const std::string& key, Amplitude fallback) const {
    auto it = cfg.lists.find(key);
    if (it == cfg.lists.end()) return fallback;
    if (it->second.size() != 2) {
      throw ConfigError("amplitude must be a [re, im] pair", key);
    }
    return {it->second[0], it->second[1]};
  }
};

std::uint64_t point_seed(const ExperimentConfig& cfg, std::size_t point) {
  return RngStream(cfg.seed, point).next_u64();
}

std::vector<double> sweep_values(const ExperimentConfig& cfg) {
  if (!cfg.sweep) return {0.0};  // single unnamed point
  const SweepAxis& ax = *cfg.sweep;
  if (ax.steps < 1) throw ConfigError("sweep needs at least one step", "steps");
  if (ax.steps == 1) return {ax.min};
  std::vector<double> out;
  out.reserve(ax.steps);
  for (int i = 0; i < ax.steps; ++i) {
    out.push_back(ax.min + (ax.max - ax.min) * i / (ax.steps - 1));
  }
  return out;
}

double binom_se(double p, double n) {
  return n > 0.0 ? std::sqrt(p * (1.0 - p) / n) : 0.0;
}

struct TableBuilder {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void push(const std::string& name, double value) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) {
      names.push_back(name);
      columns.emplace_back();
      columns.back().push_back(value);
    } else {
      columns[static_cast<std::size_t>(it - names.begin())].push_back(value);
    }
  }
};

std::pair<Amplitude, Amplitude> resolve_pair(const ParamView& p) {
  if (p.has("delta")) {
    const double d = p.get("delta", 1.0);
    if (!(d >= 0.0)) throw ConfigError("delta must be nonnegative", "delta");
    return {Amplitude{0.0, 0.0}, Amplitude{d, 0.0}};
  }
  return {p.get_amp("alpha1", {0.0, 0.0}), p.get_amp("alpha2", {1.0, 0.0})};
}

void run_two_ref_point(const ExperimentConfig& cfg, const ParamView& p,
                       std::size_t point, TableBuilder& tb) {
  const double n_a = p.get("n_a", 1.0);
  const double n_b = p.get("n_b", 1.0);
  const double n_c = p.get("n_c", 1.0);
  const double t1 = p.get("t1", 0.5);
  const auto [a1, a2] = resolve_pair(p);
  const auto priors_list = p.get_list("priors", {0.5, 0.5});
  if (priors_list.size() != 2) {
    throw ConfigError("priors must hold two weights", "priors");
  }
  const std::array<double, 2> priors{priors_list[0], priors_list[1]};

  const TwoRefProbabilities res = analytic_two_ref(n_a, n_b, n_c, t1, a1, a2, priors);
  tb.push("p1", res.p1);
  tb.push("p2", res.p2);
  tb.push("p", res.p);
  if (cfg.shots > 0) {
    const UISetup setup = build_two_ref_setup(n_a, n_b, n_c, t1);
    const UIShotCounts counts =
        simulate_ui(setup, {a1, a2}, {priors[0], priors[1]}, cfg.shots,
                    point_seed(cfg, point));
    const double mc = counts.success_frequency();
    tb.push("mc_p", mc);
    tb.push("mc_p_se", binom_se(mc, static_cast<double>(cfg.shots)));
  }
}

void run_multi_ref_point(const ExperimentConfig& cfg, const ParamView& p,
                         std::size_t point, TableBuilder& tb) {
  const int m = p.get_int("m", 3);
  const double n_a = p.get("n_a", 1.0);
  const double n_b = p.get("n_b", 1.0);
  const double scale = p.get("scale", 1.0);

  std::vector<double> flat;
  for (int k = 0; k < m; ++k) {
    flat.push_back(static_cast<double>(k));
    flat.push_back(0.0);
  }
  flat = p.get_list("ref_amps", flat);
  if (flat.size() != static_cast<std::size_t>(2 * m)) {
    throw ConfigError("ref_amps must hold m [re, im] pairs", "ref_amps");
  }
  std::vector<Amplitude> refs;
  for (int k = 0; k < m; ++k) {
    refs.emplace_back(scale * flat[2 * k], scale * flat[2 * k + 1]);
  }

  tb.push("p", analytic_multi_ref_P(m, n_a, n_b, refs));
  if (cfg.shots > 0) {
    const UISetup setup = build_multi_ref_setup(m, n_a, n_b);
    const std::vector<double> priors(m, 1.0 / m);
    const UIShotCounts counts =
        simulate_ui(setup, refs, priors, cfg.shots, point_seed(cfg, point));
    const double mc = counts.success_frequency();
    tb.push("mc_p", mc);
    tb.push("mc_p_se", binom_se(mc, static_cast<double>(cfg.shots)));
  }
}

void run_weak_point(const ExperimentConfig& cfg, const ParamView& p,
                    std::size_t point, TableBuilder& tb) {
  const int N = p.get_int("N", 4);
  if (N < 1) throw ConfigError("N must be at least one", "N");
  const auto [a1, a2] = resolve_pair(p);
  const double delta_sq = std::norm(a1 - a2);
  tb.push("p_analytic", -std::expm1(-delta_sq / 3.0));
  if (cfg.shots > 0) {
    std::uint64_t correct = 0;
    const std::uint64_t sub = point_seed(cfg, point);
    for (std::uint64_t r = 0; r < cfg.shots; ++r) {
      RngStream rng(sub, r);
      const int truth = (rng.next_u64() & 1ULL) ? 2 : 1;
      const Hypothesis hyp{truth, {a1, a2}};
      const WeakRunResult res = weak_ui_run(N, hyp, rng);
      if (res.outcome.is_conclusive() && res.outcome.index == truth) ++correct;
    }
    const double mc = static_cast<double>(correct) / static_cast<double>(cfg.shots);
    tb.push("mc_p", mc);
    tb.push("mc_p_se", binom_se(mc, static_cast<double>(cfg.shots)));
  }
}

void run_recovery_rounds_point(const ParamView& p, TableBuilder& tb) {
  const double delta = p.get("delta", 1.0);
  std::vector<double> rounds = p.get_list("rounds", {1, 20, 40, 60, 80});
  for (double r : rounds) {
    const int k = static_cast<int>(std::round(r));
    if (k < 1 || std::abs(r - k) > 1e-9) {
      throw ConfigError("rounds must be positive integers", "rounds");
    }
    tb.push("p_round_" + std::to_string(k), cumulative_success(k, delta));
  }
}

void run_same_unknown_point(const ExperimentConfig& cfg, const ParamView& p,
                            std::size_t point, TableBuilder& tb) {
  const double delta = p.get("delta", 1.0);
  const SameUnknownScheme scheme = same_unknown_second_round(delta);
  tb.push("conditional_p", scheme.conditional_p);
  tb.push("overall_p", scheme.overall_p);
  if (cfg.shots == 0) return;

  const Amplitude a1{0.0, 0.0};
  const Amplitude a2{delta, 0.0};
  const UISetup round1 = build_two_ref_setup(1.0, 1.0, 1.0, 0.5);
  // detector means per hypothesis, both rounds evolved once
  std::array<std::array<double, 2>, 2> mean1{};
  std::array<std::array<double, 2>, 2> mean2{};
  for (int h = 0; h < 2; ++h) {
    const Amplitude unknown = (h == 0) ? a1 : a2;
    const ModeRegister ev1 = apply_network(
        round1.network, prepare_input(round1, unknown, {a1, a2}));
    const ModeRegister ev2 = apply_network(
        scheme.round2_network, same_unknown_round2_input(unknown, a1, a2));
    for (int d = 0; d < 2; ++d) {
      mean1[h][d] = std::norm(ev1.amps[round1.bank.monitored_modes[d]]);
      mean2[h][d] = std::norm(ev2.amps[scheme.round2_bank.monitored_modes[d]]);
    }
  }

  std::uint64_t success = 0;
  const std::uint64_t sub = point_seed(cfg, point);
  ClickPattern pattern;
  pattern.counts.resize(2);
  for (std::uint64_t r = 0; r < cfg.shots; ++r) {
    RngStream rng(sub, r);
    const int h = (rng.next_u64() & 1ULL) ? 1 : 0;
    pattern.counts[0] = rng.poisson(mean1[h][0]) > 0 ? 1 : 0;
    pattern.counts[1] = rng.poisson(mean1[h][1]) > 0 ? 1 : 0;
    UIOutcome outcome = classify_two_ref(pattern);
    if (!outcome.is_conclusive()) {
      pattern.counts[0] = rng.poisson(mean2[h][0]) > 0 ? 1 : 0;
      pattern.counts[1] = rng.poisson(mean2[h][1]) > 0 ? 1 : 0;
      outcome = classify_two_ref(pattern);
    }
    if (outcome.is_conclusive() && outcome.index == h + 1) ++success;
  }
  const double mc = static_cast<double>(success) / static_cast<double>(cfg.shots);
  tb.push("mc_overall", mc);
  tb.push("mc_overall_se", binom_se(mc, static_cast<double>(cfg.shots)));
}

void run_splitting_compare_point(const ParamView& p, TableBuilder& tb) {
  const int N = p.get_int("N", 3);
  const double delta = p.get("delta", 1.0);
  const StrategyComparison cmp = compare_strategies(N, delta);
  tb.push("recovery_p", cmp.recovery_p);
  tb.push("splitting_p", cmp.splitting_p);
  tb.push("difference", cmp.difference);
}

void run_noise_rates_point(const ExperimentConfig& cfg, const ParamView& p,
                           std::size_t point, TableBuilder& tb) {
  const double n_a = p.get("n_a", 1.0);
  const double n_b = p.get("n_b", 1.0);
  const double sigma = p.get("sigma", 0.25);
  const double xi = p.get("xi", 1.0);
  const RatesReport rates = averaged_rates_closed(n_a, n_b, sigma, xi);
  tb.push("theta", rates.theta);
  tb.push("reliability", rates.reliability);
  tb.push("p_success", rates.p_success);
  tb.push("p_error", rates.p_error);
  tb.push("p_failure", rates.p_failure);
  if (cfg.shots > 0) {
    const int ia = p.get_int("n_a", 1);
    const int ib = p.get_int("n_b", 1);
    const McRates mc = mc_rates(ia, ib, sigma, xi, cfg.shots, point_seed(cfg, point));
    tb.push("mc_reliability", mc.estimate.reliability);
    tb.push("mc_reliability_se", mc.standard_error.reliability);
    tb.push("mc_p_success", mc.estimate.p_success);
    tb.push("mc_p_success_se", mc.standard_error.p_success);
    tb.push("mc_p_error", mc.estimate.p_error);
    tb.push("mc_p_error_se", mc.standard_error.p_error);
    tb.push("mc_p_failure", mc.estimate.p_failure);
    tb.push("mc_p_failure_se", mc.standard_error.p_failure);
  }
}

void run_optimality_point(const ParamView& p, TableBuilder& tb) {
  const double delta = p.get("delta", 1.0);
  const Lambda1Optimum opt = optimize_lambda1(delta);
  const double l1 = opt.degenerate ? std::nan("") : opt.l1;
  const double p_opt = opt.degenerate ? 0.0 : two_detector_P(opt.l1, delta);
  const double p_ref = two_ref_symmetric_P(1.0, 1.0, delta * delta);
  tb.push("l1_opt", l1);
  tb.push("p_opt", p_opt);
  tb.push("p_reference", p_ref);
  tb.push("gap", std::abs(p_opt - p_ref));
}

void run_gaussian_integral_rows(const ParamView& p, TableBuilder& tb) {
  const int m_max = p.get_int("m_max", 6);
  if (m_max < 0) throw ConfigError("m_max must be nonnegative", "m_max");
  const double a = p.get("a", 1.0);
  const double b = p.get("b", 1.0);
  const double sigma = p.get("sigma", 0.5);
  const Amplitude x = p.get_amp("x", {1.0, 0.0});
  for (int m = 0; m <= m_max; ++m) {
    const double closed = gaussian_integral_Im(m, a, b, x, sigma);
    const double rec = gaussian_integral_Im_recursive(m, a, b, x, sigma);
    tb.push("m", m);
    tb.push("closed_form", closed);
    tb.push("recursion", rec);
    tb.push("abs_diff", std::abs(closed - rec));
  }
}

void validate_keys(const ExperimentConfig& cfg) {
  const ProtocolInfo& info = info_for(cfg.protocol);
  for (const auto& [key, value] : cfg.scalars) {
    (void)value;
    if (!info.scalar_keys.count(key)) {
      throw ConfigError("unknown scalar parameter for protocol " +
                            std::string(info.name),
                        key);
    }
  }
  for (const auto& [key, value] : cfg.lists) {
    (void)value;
    if (!info.list_keys.count(key)) {
      throw ConfigError("unknown list parameter for protocol " +
                            std::string(info.name),
                        key);
    }
  }
  if (cfg.sweep) {
    if (!info.sweep_keys.count(cfg.sweep->parameter)) {
      throw ConfigError("protocol " + std::string(info.name) +
                            " cannot sweep this parameter",
                        cfg.sweep->parameter);
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

const char* protocol_name(Protocol p) { return info_for(p).name; }

Protocol protocol_from_name(const std::string& name) {
  for (const auto& row : protocol_table()) {
    if (name == row.name) return row.protocol;
  }
  throw ConfigError("unknown protocol '" + name + "'", "protocol");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "protocol") {
      if (!value.is_string()) throw ConfigError("protocol must be a string", key);
      cfg.protocol = protocol_from_name(value.get<std::string>());
    } else if (key == "shots") {
      if (!value.is_number_integer() && !value.is_number_unsigned()) {
        throw ConfigError("shots must be a nonnegative integer", key);
      }
      const auto v = value.get<std::int64_t>();
      if (v < 0) throw ConfigError("shots must be nonnegative", key);
      cfg.shots = static_cast<std::uint64_t>(v);
    } else if (key == "seed") {
      if (!value.is_number_integer() && !value.is_number_unsigned()) {
        throw ConfigError("seed must be an integer", key);
      }
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "sweep") {
      if (!value.is_object()) throw ConfigError("sweep must be an object", key);
      SweepAxis ax;
      if (!value.contains("parameter") || !value["parameter"].is_string()) {
        throw ConfigError("sweep needs a parameter name", "parameter");
      }
      ax.parameter = value["parameter"].get<std::string>();
      if (!value.contains("min") || !value.contains("max") ||
          !value.contains("steps")) {
        throw ConfigError("sweep needs min, max and steps", key);
      }
      ax.min = value["min"].get<double>();
      ax.max = value["max"].get<double>();
      ax.steps = value["steps"].get<int>();
      cfg.sweep = ax;
    } else if (key == "parameters") {
      if (!value.is_object()) throw ConfigError("parameters must be an object", key);
      for (const auto& [pkey, pval] : value.items()) {
        if (pval.is_number()) {
          cfg.scalars[pkey] = pval.get<double>();
        } else if (pval.is_array()) {
          std::vector<double> flat;
          for (const auto& item : pval) {
            if (item.is_number()) {
              flat.push_back(item.get<double>());
            } else if (item.is_array() && item.size() == 2 &&
                       item[0].is_number() && item[1].is_number()) {
              flat.push_back(item[0].get<double>());
              flat.push_back(item[1].get<double>());
            } else {
              throw ConfigError("list parameters must hold numbers or [re, im] pairs",
                                pkey);
            }
          }
          cfg.lists[pkey] = std::move(flat);
        } else {
          throw ConfigError("parameter must be a number or a list", pkey);
        }
      }
    } else {
      throw ConfigError("unknown configuration key", key);
    }
  }
  if (!j.contains("protocol")) throw ConfigError("missing protocol", "protocol");
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["protocol"] = protocol_name(protocol);
  j["shots"] = shots;
  j["seed"] = seed;
  if (sweep) {
    j["sweep"] = {{"parameter", sweep->parameter},
                  {"min", sweep->min},
                  {"max", sweep->max},
                  {"steps", sweep->steps}};
  }
  json params = json::object();
  for (const auto& [key, value] : scalars) params[key] = value;
  for (const auto& [key, value] : lists) params[key] = value;
  j["parameters"] = params;
  return j.dump(2);
}

std::string ResultTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c) out += ',';
    out += names[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += ',';
      out += format_double(columns[c][r]);
    }
    out += '\n';
  }
  return out;
}

std::string ResultTable::to_json_text() const {
  json j;
  j["metadata"] = metadata_json.empty() ? json::object() : json::parse(metadata_json);
  json cols = json::array();
  for (std::size_t c = 0; c < names.size(); ++c) {
    json col;
    col["name"] = names[c];
    col["values"] = columns[c];
    cols.push_back(col);
  }
  j["columns"] = cols;
  return j.dump(2);
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  validate_keys(cfg);
  TableBuilder tb;

  if (cfg.protocol == Protocol::GaussianIntegralCheck) {
    ParamView p{cfg, "", 0.0};
    run_gaussian_integral_rows(p, tb);
  } else {
    const std::vector<double> axis = sweep_values(cfg);
    for (std::size_t i = 0; i < axis.size(); ++i) {
      ParamView p{cfg, cfg.sweep ? cfg.sweep->parameter : "", axis[i]};
      if (cfg.sweep) tb.push(cfg.sweep->parameter, axis[i]);
      switch (cfg.protocol) {
        case Protocol::TwoRef:
          run_two_ref_point(cfg, p, i, tb);
          break;
        case Protocol::MultiRef:
          run_multi_ref_point(cfg, p, i, tb);
          break;
        case Protocol::Weak:
          run_weak_point(cfg, p, i, tb);
          break;
        case Protocol::RecoveryRounds:
          run_recovery_rounds_point(p, tb);
          break;
        case Protocol::SameUnknown:
          run_same_unknown_point(cfg, p, i, tb);
          break;
        case Protocol::SplittingCompare:
          run_splitting_compare_point(p, tb);
          break;
        case Protocol::NoiseRates:
          run_noise_rates_point(cfg, p, i, tb);
          break;
        case Protocol::OptimalitySweep:
          run_optimality_point(p, tb);
          break;
        case Protocol::GaussianIntegralCheck:
          break;  // handled above
      }
    }
  }

  ResultTable table;
  table.names = std::move(tb.names);
  table.columns = std::move(tb.columns);
  json meta;
  meta["tool"] = "uilab";
  meta["version"] = kVersion;
  meta["protocol"] = protocol_name(cfg.protocol);
  meta["seed"] = cfg.seed;
  meta["shots"] = cfg.shots;
  meta["config"] = json::parse(cfg.to_json_text());
  table.metadata_json = meta.dump();
  return table;
}

namespace {

struct VerifyCheck {
  std::string name;
  bool ok;
  std::string detail;
};

VerifyCheck check(const std::string& name, bool ok, std::string detail = {}) {
  return {name, ok, std::move(detail)};
}

std::vector<VerifyCheck> run_all_checks() {
  std::vector<VerifyCheck> results;
  RngStream rng(20090731, 0);
  auto rand_amp = [&rng]() {
    return Amplitude{2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
  };

  {  // concentrators: unitary, and k copies -> sqrt(k) on mode 0
    bool ok = true;
    for (int k = 1; k <= 8 && ok; ++k) {
      const Network net = build_concentrator(k);
      ok = check_unitarity(compose_network(net)) < 1e-12;
      const Amplitude beta = rand_amp();
      ModeRegister reg;
      reg.amps.assign(k, beta);
      const ModeRegister out = apply_network(net, reg);
      ok = ok && std::abs(out.amps[0] - std::sqrt(double(k)) * beta) < 1e-12;
      for (int j = 1; j < k; ++j) ok = ok && std::abs(out.amps[j]) < 1e-12;
    }
    results.push_back(check("concentrator unitarity and output", ok));
  }
  {  // energy conservation
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      ModeRegister reg;
      for (int i = 0; i < 5; ++i) reg.amps.push_back(rand_amp());
      const double before = reg.total_intensity();
      apply_beamsplitter_in_place(reg, {rng.uniform01(), 1, 3});
      ok = std::abs(reg.total_intensity() - before) <= 1e-12 * (1.0 + before);
    }
    results.push_back(check("beam splitters conserve total intensity", ok));
  }
  {  // composition consistency
    bool ok = true;
    for (int trial = 0; trial < 20 && ok; ++trial) {
      Network net;
      net.mode_count = 4;
      for (int e = 0; e < 6; ++e) {
        const int a = static_cast<int>(rng.next_u64() % 4);
        int b = static_cast<int>(rng.next_u64() % 4);
        if (b == a) b = (b + 1) % 4;
        net.elements.push_back({rng.uniform01(), a, b});
      }
      ModeRegister reg;
      for (int i = 0; i < 4; ++i) reg.amps.push_back(rand_amp());
      const ModeRegister seq = apply_network(net, reg);
      const ModeRegister mat = compose_network(net).apply(reg);
      for (int i = 0; i < 4; ++i) {
        ok = ok && std::abs(seq.amps[i] - mat.amps[i]) < 1e-12;
      }
    }
    results.push_back(check("matrix composition equals sequential application", ok));
  }
  {  // two-reference cancellation ports
    bool ok = true;
    for (int trial = 0; trial < 10 && ok; ++trial) {
      const double n_a = 1 + static_cast<int>(rng.next_u64() % 3);
      const double n_b = 1 + static_cast<int>(rng.next_u64() % 3);
      const double n_c = 1 + static_cast<int>(rng.next_u64() % 3);
      const double t1 = 0.1 + 0.8 * rng.uniform01();
      const UISetup setup = build_two_ref_setup(n_a, n_b, n_c, t1);
      const Amplitude a1 = rand_amp();
      const Amplitude a2 = rand_amp();
      for (int h = 1; h <= 2; ++h) {
        const ModeRegister out = apply_network(
            setup.network,
            prepare_input(setup, h == 1 ? a1 : a2, {a1, a2}));
        const int silent = setup.bank.monitored_modes[2 - h];  // D2 for h=1
        ok = ok && std::abs(out.amps[silent]) < 1e-12;
      }
    }
    results.push_back(check("two-reference comparison ports cancel", ok));
  }
  {  // multi-reference cancellation ports
    bool ok = true;
    for (int m = 2; m <= 4 && ok; ++m) {
      const UISetup setup = build_multi_ref_setup(m, 2.0, 1.0);
      std::vector<Amplitude> refs;
      for (int k = 0; k < m; ++k) refs.push_back(rand_amp());
      for (int h = 1; h <= m; ++h) {
        const ModeRegister out = apply_network(
            setup.network, prepare_input(setup, refs[h - 1], refs));
        ok = ok && std::abs(out.amps[setup.bank.monitored_modes[h - 1]]) < 1e-12;
      }
    }
    results.push_back(check("multi-reference cancellation ports", ok));
  }
  {  // no false conclusives, noiseless
    bool ok = true;
    const UISetup two = build_two_ref_setup(1, 1, 1, 0.5);
    const UISetup multi = build_multi_ref_setup(3, 1, 1);
    const std::vector<Amplitude> pair{{0.3, 0.1}, {1.4, -0.6}};
    const std::vector<Amplitude> triple{{0.0, 0.0}, {1.5, 0.0}, {0.0, 1.5}};
    for (int h = 1; h <= 2; ++h) {
      std::vector<double> priors{0.0, 0.0};
      priors[h - 1] = 1.0;
      ok = ok && simulate_ui(two, pair, priors, 10000, 7 + h).wrong == 0;
    }
    for (int h = 1; h <= 3 && ok; ++h) {
      std::vector<double> priors{0.0, 0.0, 0.0};
      priors[h - 1] = 1.0;
      ok = ok && simulate_ui(multi, triple, priors, 10000, 17 + h).wrong == 0;
    }
    results.push_back(check("no false conclusive outcomes (noiseless)", ok));
  }
  {  // sampling agrees with the closed form
    const UISetup setup = build_two_ref_setup(1, 1, 1, 0.5);
    const std::vector<Amplitude> pair{{0.0, 0.0}, {2.0, 0.0}};
    const UIShotCounts counts = simulate_ui(setup, pair, {0.5, 0.5}, 100000, 11);
    const double expect = two_ref_symmetric_P(1, 1, 4.0);
    const double se = binom_se(expect, 100000);
    const double diff = std::abs(counts.success_frequency() - expect);
    results.push_back(check("sampled success matches the closed form", diff < 4 * se,
                            "diff=" + format_double(diff)));
  }
  {  // recovery recursion against the network, k <= 10
    bool ok = true;
    const Amplitude a1 = rand_amp();
    const Amplitude a2 = rand_amp();
    double lambda = 1.0;
    for (int k = 1; k <= 10 && ok; ++k) {
      const double next = lambda_step(lambda);
      for (int winner = 1; winner <= 2; ++winner) {
        const UISetup setup = build_two_ref_setup(1.0, lambda, lambda, 0.5);
        const ModeRegister out = apply_network(
            setup.network,
            prepare_input(setup, winner == 1 ? a1 : a2, {a1, a2}));
        ModeRegister rec_in;
        rec_in.amps = {out.amps[1], out.amps[3], {0.0, 0.0}};  // B, D, AUX
        const ModeRegister rec =
            apply_network(build_recovery_network(lambda, winner), rec_in);
        const double root = std::sqrt(next);
        ok = ok && std::abs(rec.amps[0] - root * a1) < 1e-10 &&
             std::abs(rec.amps[1] - root * a2) < 1e-10;
      }
      lambda = next;
    }
    results.push_back(check("recovery recursion matches the network", ok));
  }
  {  // noise closed forms: sum rule and noiseless reduction
    bool ok = true;
    for (int trial = 0; trial < 50 && ok; ++trial) {
      const double n_a = 1 + static_cast<int>(rng.next_u64() % 3);
      const double n_b = 1 + static_cast<int>(rng.next_u64() % 3);
      const double sigma = rng.uniform01();
      const double xi = 0.2 + 2.0 * rng.uniform01();
      const RatesReport r = averaged_rates_closed(n_a, n_b, sigma, xi);
      ok = std::abs(r.p_success + r.p_error + r.p_failure - 1.0) < 1e-12;
    }
    const ConclusiveProbs noiseless =
        conclusive_probs({0.0, 0.0}, {1.0, 0.5}, 0.0, 1, 2, 2);
    ok = ok && noiseless.e1_rho2 == 0.0 && noiseless.e2_rho1 == 0.0;
    results.push_back(check("noise closed forms: sum rule and zero-noise limit", ok));
  }
  {  // detector reduction equality and the 1/3 optimum
    bool ok = true;
    for (int trial = 0; trial < 100 && ok; ++trial) {
      std::vector<double> l1{rng.uniform01(), rng.uniform01()};
      std::vector<double> l2{rng.uniform01()};
      ok = multi_detector_reduction_check(l1, l2, 1.5).defect < 1e-12;
    }
    const Lambda1Optimum opt = optimize_lambda1(1.0);
    ok = ok && !opt.degenerate && std::abs(opt.l1 - 1.0 / 3.0) < 1e-6;
    results.push_back(check("two-detector reduction and coupling optimum", ok));
  }
  {  // Gaussian integral recursion equals the closed form
    bool ok = true;
    for (int m = 0; m <= 6 && ok; ++m) {
      const double a = 0.3 + rng.uniform01();
      const double b = 0.3 + rng.uniform01();
      const double sigma = rng.uniform01();
      const Amplitude x = rand_amp();
      const double closed = gaussian_integral_Im(m, a, b, x, sigma);
      const double rec = gaussian_integral_Im_recursive(m, a, b, x, sigma);
      ok = std::abs(closed - rec) <= 1e-12 * std::max(1.0, std::abs(closed));
    }
    results.push_back(check("Gaussian integral recursion equals closed form", ok));
  }
  {  // experiment determinism
    ExperimentConfig cfg;
    cfg.protocol = Protocol::TwoRef;
    cfg.shots = 1000;
    cfg.seed = 99;
    cfg.scalars["delta"] = 1.5;
    const std::string first = run_experiment(cfg).to_csv();
    const std::string second = run_experiment(cfg).to_csv();
    results.push_back(check("experiments are byte-identical per seed", first == second));
  }
  return results;
}

}  // namespace

int run_verify(std::ostream& log) {
  int failures = 0;
  for (const auto& r : run_all_checks()) {
    log << (r.ok ? "ok   " : "FAIL ") << r.name;
    if (!r.detail.empty()) log << " (" << r.detail << ")";
    log << '\n';
    if (!r.ok) ++failures;
  }
  return failures;
}

}  // namespace uilab
