// Experiment runner: one subcommand per measurement protocol plus `verify`.
// Results are written as CSV or JSON tables; runs are deterministic for a
// fixed seed (config < UI_LAB_SEED < --seed precedence).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uilab/experiment.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::uint64_t> shots;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON experiment configuration");
  cmd->add_option("--out", opts.out_path, "Output file (default: stdout)");
  cmd->add_option("--format", opts.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--shots", opts.shots,
                  "Monte Carlo shot count (0 = analytic only)");
  cmd->add_option("--seed", opts.seed, "Random seed override");
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("UI_LAB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') {
    throw uilab::ConfigError("UI_LAB_SEED must be a nonnegative integer",
                             "UI_LAB_SEED");
  }
  return static_cast<std::uint64_t>(v);
}

int run_protocol(uilab::Protocol protocol, const CommonOptions& opts) {
  uilab::ExperimentConfig cfg;
  if (!opts.config_path.empty()) {
    cfg = uilab::ExperimentConfig::from_json_file(opts.config_path);
    if (cfg.protocol != protocol) {
      throw uilab::ConfigError(
          std::string("config protocol '") + uilab::protocol_name(cfg.protocol) +
              "' does not match the subcommand",
          "protocol");
    }
  } else {
    cfg.protocol = protocol;
  }
  if (const auto s = env_seed()) cfg.seed = *s;
  if (opts.seed) cfg.seed = *opts.seed;
  if (opts.shots) cfg.shots = *opts.shots;

  const uilab::ResultTable table = uilab::run_experiment(cfg);
  const std::string payload =
      (opts.format == "json") ? table.to_json_text() : table.to_csv();
  if (opts.out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
      throw uilab::ConfigError("cannot open output file '" + opts.out_path + "'");
    }
    out << payload;
  }
  return 0;
}

void print_error(const char* type, const std::string& message,
                 const std::string& key = {}) {
  std::cerr << "{\"error\":{\"type\":\"" << type << "\",\"message\":\""
            << message << "\"";
  if (!key.empty()) std::cerr << ",\"key\":\"" << key << "\"";
  std::cerr << "}}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uilab - unambiguous identification of coherent states:\n"
               "beam-splitter networks, closed forms and Monte Carlo checks"};
  app.require_subcommand(1);

  const uilab::Protocol protocols[] = {
      uilab::Protocol::TwoRef,          uilab::Protocol::MultiRef,
      uilab::Protocol::Weak,            uilab::Protocol::RecoveryRounds,
      uilab::Protocol::SameUnknown,     uilab::Protocol::SplittingCompare,
      uilab::Protocol::NoiseRates,      uilab::Protocol::OptimalitySweep,
      uilab::Protocol::GaussianIntegralCheck,
  };

  std::vector<CommonOptions> opts(std::size(protocols));
  for (std::size_t i = 0; i < std::size(protocols); ++i) {
    CLI::App* cmd = app.add_subcommand(
        uilab::protocol_name(protocols[i]),
        std::string("Run the ") + uilab::protocol_name(protocols[i]) +
            " experiment");
    add_common(cmd, opts[i]);
  }
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the built-in consistency checks and report pass/fail");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) {
      const int failures = uilab::run_verify(std::cout);
      if (failures > 0) {
        std::cout << failures << " check(s) failed\n";
        return 1;
      }
      std::cout << "all checks passed\n";
      return 0;
    }
    for (std::size_t i = 0; i < std::size(protocols); ++i) {
      if (app.get_subcommands().front()->get_name() ==
          uilab::protocol_name(protocols[i])) {
        return run_protocol(protocols[i], opts[i]);
      }
    }
    print_error("ConfigError", "no subcommand selected");
    return 2;
  } catch (const uilab::ConfigError& e) {
    print_error("ConfigError", e.what(), e.key());
    return 2;
  } catch (const uilab::Error& e) {
    print_error("DomainError", e.what());
    return 3;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return 1;
  }
}
