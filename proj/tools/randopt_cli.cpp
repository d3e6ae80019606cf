// randopt: run, sweep and verify random-model optimization experiments.
//
// Exit codes: 0 success, 1 lemma violation or failed run, 2 configuration error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "randopt/randopt.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kConfigError = 2;

// Returns stdout unless a path is given.
std::ostream& open_output(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty() || path == "-") return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw randopt::ConfigError("cannot write '" + path + "'");
  return *holder;
}

int cmd_run(const std::string& config, const std::string& output) {
  const randopt::ExperimentSpec spec = randopt::load_config(config);
  const randopt::Experiment exp(spec);
  const auto res = exp.run_replication(spec.p_grid.front(), spec.eps_grid.front(), 0, spec.replication, true);
  std::unique_ptr<std::ofstream> file;
  randopt::write_trace_csv(open_output(output, file), *res.trace);

  std::cerr << "N_eps: " << (res.hitting_index ? std::to_string(*res.hitting_index) : "not reached") << "\n";
  for (const auto& w : res.lemmas.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& v : res.process.violations) std::cerr << "violation: " << v << "\n";
  for (const auto& v : res.lemmas.violations) std::cerr << "violation: " << v << "\n";
  return res.ok() ? kOk : kViolation;
}

int cmd_sweep(const std::string& config, const std::string& output) {
  const auto rows = randopt::run_monte_carlo(randopt::load_config(config));
  std::unique_ptr<std::ofstream> file;
  randopt::write_summary_csv(open_output(output, file), rows);
  return kOk;
}

int cmd_verify(const std::string& config, std::size_t audit) {
  const auto report = randopt::verify_experiment(randopt::load_config(config), audit);
  randopt::write_verify_report(std::cout, report);
  return report.ok() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line search and ARC with probabilistically accurate models"};
  app.require_subcommand(1);

  std::string config;
  std::string output;
  std::size_t audit = 100;

  auto* run = app.add_subcommand("run", "Run one realization and write its trace CSV");
  run->add_option("-c,--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  run->add_option("-o,--output", output, "Trace CSV path (default: stdout)");

  auto* sweep = app.add_subcommand("sweep", "Run the Monte Carlo grid and write the summary CSV");
  sweep->add_option("-c,--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  sweep->add_option("-o,--output", output, "Summary CSV path (default: stdout)");

  auto* verify = app.add_subcommand("verify", "Run the per-realization lemma suite and solver audit");
  verify->add_option("-c,--config", config, "Experiment config file")->required()->check(CLI::ExistingFile);
  verify->add_option("--audit", audit, "Number of random cubic subproblems to audit");

  auto* keys = app.add_subcommand("keys", "List the accepted config keys");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, output);
    if (*sweep) return cmd_sweep(config, output);
    if (*verify) return cmd_verify(config, audit);
    if (*keys) {
      for (const auto& [k, doc] : randopt::config_keys()) std::cout << k << "  " << doc << "\n";
      return kOk;
    }
  } catch (const randopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const randopt::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const randopt::LemmaViolation& e) {
    std::cerr << "lemma violation: " << e.what() << "\n";
    return kViolation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kOk;
}
