#pragma once

// Parameter sweeps behind the command-line modes. Every cell is a string
// (numbers already rendered with format_number, empty for missing values)
// so a result can be written without knowing its schema.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holosim/config.hpp"

namespace holosim {

struct SweepResult {
  std::string mode;
  std::vector<std::pair<std::string, std::string>> metadata;  // beyond the config echo
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  /// Cell parsed as a number; nullopt if empty.
  std::optional<double> number(std::size_t row, const std::string& name) const;
};

/// --workers flag, then HOLOSIM_WORKERS, then general.workers, then the
/// hardware thread count.
int resolve_workers(const RunConfig& config, std::optional<int> flag);

/// Runs body(i) for i in [0, count) on up to `workers` threads and returns
/// the results in index order. The first exception is rethrown.
std::vector<std::vector<std::string>> parallel_rows(std::size_t count, int workers,
                                                    const std::function<std::vector<std::string>(std::size_t)>& body);

SweepResult run_sweep_env_coupling(const RunConfig& config, int workers);
SweepResult run_sweep_env_squeezing(const RunConfig& config, int workers);
SweepResult run_sweep_modccr(const RunConfig& config, int workers);
SweepResult run_phase_mc(const RunConfig& config, int workers);

/// `# key=value` header (tool, version, mode, generated timestamp, extra
/// metadata, config echo), column row, data rows. The timestamp line is the
/// only one that differs between identical runs.
void write_csv(std::ostream& out, const SweepResult& result, const RunConfig& config, const std::string& timestamp);

/// gnuplot script plotting the CSV at csv_path.
std::string gnuplot_script(const SweepResult& result, const std::string& csv_path);

std::string utc_timestamp();

}  // namespace holosim
