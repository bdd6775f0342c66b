// holosim: parameter sweeps and the invariant suite.
//
// Exit codes: 0 success, 1 validation failure, 2 configuration error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "holosim/config.hpp"
#include "holosim/error.hpp"
#include "holosim/sweep.hpp"
#include "holosim/validate.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config_path;
  std::string out;
  std::optional<std::int64_t> seed;
  std::optional<int> cutoff;
  std::optional<int> workers;
  std::string fault = "none";
};

void write_outputs(const holosim::SweepResult& result, const holosim::RunConfig& config, const std::string& out,
                   bool with_script) {
  namespace fs = std::filesystem;
  const fs::path csv = out.empty() ? fs::path(result.mode + ".csv") : fs::path(out);
  if (csv.has_parent_path()) fs::create_directories(csv.parent_path());
  std::ofstream file(csv);
  if (!file) throw std::runtime_error("cannot write " + csv.string());
  holosim::write_csv(file, result, config, holosim::utc_timestamp());
  std::cout << "wrote " << csv.string() << " (" << result.rows.size() << " rows)\n";
  if (with_script) {
    fs::path gp = csv;
    gp.replace_extension(".gp");
    std::ofstream script(gp);
    script << holosim::gnuplot_script(result, csv.filename().string());
    std::cout << "wrote " << gp.string() << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Twin-beam interferometer noise simulator"};
  app.require_subcommand(1);
  Options opt;

  const char* modes[] = {"sweep-env-coupling", "sweep-env-squeezing", "sweep-modccr", "validate", "phase-mc"};
  const char* help[] = {"ratio vs lambda*tau at fixed r, per M", "ratio vs r at fixed lambda*tau, per M",
                        "deformed-commutator ratio vs r, per epsilon", "run the invariant suite",
                        "Monte-Carlo phase-correlation recovery"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(modes[i], help[i]);
    sub->add_option("--config", opt.config_path, "run configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output CSV path (default <mode>.csv)");
    sub->add_option("--seed", opt.seed, "overrides general.seed");
    sub->add_option("--cutoff", opt.cutoff, "overrides general.cutoff (Fock n_max)");
    sub->add_option("--workers", opt.workers, "worker threads (beats HOLOSIM_WORKERS)");
    if (std::string(modes[i]) == "validate") {
      sub->add_option("--inject-fault", opt.fault, "negative control: none | evolve-sign");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string mode = app.get_subcommands().front()->get_name();

  holosim::RunConfig config;
  int workers = 1;
  holosim::Fault fault = holosim::Fault::None;
  try {
    if (!opt.config_path.empty()) config = holosim::RunConfig::load(opt.config_path);
    if (opt.seed) config.set("general.seed", std::to_string(*opt.seed));
    if (opt.cutoff) {
      if (*opt.cutoff < 1) throw holosim::Error(holosim::ErrorCode::ConfigError, "--cutoff must be >= 1");
      config.set("general.cutoff", std::to_string(*opt.cutoff));
    }
    workers = holosim::resolve_workers(config, opt.workers);
    fault = holosim::parse_fault(opt.fault);
  } catch (const holosim::Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (mode == "validate") {
      const auto report = holosim::run_validate(config, fault, workers);
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "ok   " : "FAIL ") << c.name << "  observed=" << holosim::format_number(c.observed)
                  << " tol=" << holosim::format_number(c.tolerance) << (c.detail.empty() ? "" : "  " + c.detail)
                  << "\n";
      }
      write_outputs(holosim::to_sweep_result(report, fault), config, opt.out, false);
      return report.passed() ? 0 : kExitValidation;
    }
    holosim::SweepResult result;
    if (mode == "sweep-env-coupling") result = holosim::run_sweep_env_coupling(config, workers);
    else if (mode == "sweep-env-squeezing") result = holosim::run_sweep_env_squeezing(config, workers);
    else if (mode == "sweep-modccr") result = holosim::run_sweep_modccr(config, workers);
    else result = holosim::run_phase_mc(config, workers);
    write_outputs(result, config, opt.out, true);
  } catch (const holosim::Error& e) {
    std::cerr << "error (" << holosim::to_string(e.code()) << "): " << e.what() << "\n";
    return e.code() == holosim::ErrorCode::ConfigError ? kExitConfig : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return 0;
}
