#include "holosim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "holosim/error.hpp"
#include "holosim/estimator.hpp"

#ifndef HOLOSIM_VERSION
#define HOLOSIM_VERSION "unknown"
#endif

namespace holosim {

std::size_t SweepResult::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  fail(ErrorCode::InvalidArgument, "no column '" + name + "' in " + mode);
}

std::optional<double> SweepResult::number(std::size_t row, const std::string& name) const {
  const std::string& cell = rows.at(row).at(column(name));
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  require(ec == std::errc() && ptr == cell.data() + cell.size(), ErrorCode::InvalidArgument,
          "cell '" + cell + "' in column " + name + " is not numeric");
  return v;
}

int resolve_workers(const RunConfig& config, std::optional<int> flag) {
  if (flag) {
    require(*flag >= 1, ErrorCode::ConfigError, "--workers must be >= 1");
    return *flag;
  }
  if (const char* env = std::getenv("HOLOSIM_WORKERS"); env && *env) {
    int n = 0;
    const std::string_view text(env);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    require(ec == std::errc() && ptr == text.data() + text.size() && n >= 1, ErrorCode::ConfigError,
            "HOLOSIM_WORKERS must be a positive integer, got '" + std::string(text) + "'");
    return n;
  }
  const auto configured = config.integer("general.workers");
  require(configured >= 0, ErrorCode::ConfigError, "general.workers must be >= 0");
  if (configured > 0) return static_cast<int>(configured);
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::vector<std::string>> parallel_rows(std::size_t count, int workers,
                                                    const std::function<std::vector<std::string>(std::size_t)>& body) {
  std::vector<std::vector<std::string>> rows(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        rows[i] = body(i);
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), std::max<std::size_t>(count, 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
  return rows;
}

namespace {

std::string cell(double v) { return format_number(v); }
std::string cell(std::optional<double> v) { return v ? format_number(*v) : std::string(); }
std::string flag(bool b) { return b ? "1" : "0"; }

// Full ratio, or the reason it is absent. Only the closed-form width
// undershoot is tolerated; anything else is a bug and propagates.
std::pair<std::optional<double>, std::string> env_full_cell(double r, double M, double lambda_tau) {
  try {
    return {uncertainty_env_full(r, M, lambda_tau).ratio, "ok"};
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonPhysicalState) throw;
    return {std::nullopt, "non_physical"};
  }
}

std::string env_backends() {
  return std::string(to_string(Backend::GaussianFull)) + "+" + std::string(to_string(Backend::GaussianApprox));
}

}  // namespace

SweepResult run_sweep_env_coupling(const RunConfig& config, int workers) {
  const double r = config.number("coupling.r");
  const auto& Ms = config.values("coupling.M");
  std::vector<double> grid;
  if (config.boolean("coupling.zero_endpoint")) grid.push_back(0.0);
  for (double v : config.values("coupling.lambda_tau")) grid.push_back(v);

  SweepResult res{"sweep-env-coupling",
                  {{"backend", env_backends()}, {"swept", "lambda_tau"}},
                  {"lambda_tau", "M", "r", "ratio_full", "ratio_approx", "full_over_approx", "status", "backend"},
                  {}};
  res.rows = parallel_rows(Ms.size() * grid.size(), workers, [&](std::size_t i) {
    const double M = Ms[i / grid.size()];
    const double lt = grid[i % grid.size()];
    const double approx = uncertainty_env_approx(r, M, lt).ratio;
    const auto [full, status] = env_full_cell(r, M, lt);
    std::optional<double> quotient;
    if (full && approx > 0.0) quotient = *full / approx;
    return std::vector<std::string>{cell(lt),     cell(M),        cell(r), cell(full), cell(approx),
                                    cell(quotient), status, env_backends()};
  });
  return res;
}

SweepResult run_sweep_env_squeezing(const RunConfig& config, int workers) {
  const double lt = config.number("squeezing.lambda_tau");
  const auto& Ms = config.values("squeezing.M");
  const auto& grid = config.values("squeezing.r");

  SweepResult res{"sweep-env-squeezing",
                  {{"backend", env_backends()}, {"swept", "r"}, {"decreasing_from_r", "0.5"}},
                  {"r", "M", "lambda_tau", "ratio_full", "ratio_approx", "status", "decreasing", "backend"},
                  {}};
  res.rows = parallel_rows(Ms.size() * grid.size(), workers, [&](std::size_t i) {
    const double M = Ms[i / grid.size()];
    const std::size_t k = i % grid.size();
    const double r = grid[k];
    const double approx = uncertainty_env_approx(r, M, lt).ratio;
    const auto [full, status] = env_full_cell(r, M, lt);
    // decreasing w.r.t. the previous grid point, reported from r = 0.5 on
    std::string decreasing;
    if (k > 0 && grid[k - 1] >= 0.5) decreasing = flag(approx < uncertainty_env_approx(grid[k - 1], M, lt).ratio);
    return std::vector<std::string>{cell(r), cell(M), cell(lt), cell(full), cell(approx), status, decreasing,
                                    env_backends()};
  });
  return res;
}

SweepResult run_sweep_modccr(const RunConfig& config, int workers) {
  const auto& eps_list = config.values("modccr.epsilon");
  const auto& grid = config.values("modccr.r");
  const double fock_r_max = config.number("modccr.fock_r_max");
  const double tail_tol = config.number("modccr.fock_tail_tol");
  const auto cutoff_override = config.integer("general.cutoff");

  const std::string both =
      std::string(to_string(Backend::AnalyticModccr)) + "+" + std::string(to_string(Backend::FockOracle));
  SweepResult res{"sweep-modccr",
                  {{"backend", both}, {"swept", "r"}, {"band", "5*epsilon"}},
                  {"r", "epsilon", "ratio_analytic", "ratio_fock", "relative_deviation", "within_band", "n_max",
                   "backend"},
                  {}};
  res.rows = parallel_rows(eps_list.size() * grid.size(), workers, [&](std::size_t i) {
    const double eps = eps_list[i / grid.size()];
    const double r = grid[i % grid.size()];
    const double analytic = uncertainty_modccr_analytic(r, eps).ratio;
    std::vector<std::string> row{cell(r), cell(eps), cell(analytic), "", "", "", "",
                                 std::string(to_string(Backend::AnalyticModccr))};
    if (r <= fock_r_max + 1e-9) {
      const FockCutoff cutoff =
          cutoff_override > 0 ? FockCutoff(static_cast<int>(cutoff_override)) : twin_beam_cutoff(r, tail_tol);
      const double fock = uncertainty_modccr_fock(DeformationParams(eps, r), cutoff).ratio;
      row[3] = cell(fock);
      if (analytic > 0.0) {
        const double dev = std::abs(fock / analytic - 1.0);
        row[4] = cell(dev);
        row[5] = flag(dev <= 5.0 * std::abs(eps));
      }
      row[6] = std::to_string(cutoff.n_max());
      row[7] = both;
    }
    return row;
  });
  return res;
}

SweepResult run_phase_mc(const RunConfig& config, int workers) {
  const double r = config.number("phase-mc.r");
  const double mu = config.number("phase-mc.mu");
  const double sigma = config.number("phase-mc.sigma");
  const auto samples = config.integer("phase-mc.samples");
  const double step = config.number("phase-mc.step");
  const auto seed = static_cast<std::uint64_t>(config.integer("general.seed"));
  const auto cutoff_override = config.integer("general.cutoff");
  const FockCutoff cutoff(static_cast<int>(cutoff_override > 0 ? cutoff_override : config.integer("phase-mc.cutoff")));

  const FockState in = build_interferometer_input(build_twb(SqueezeParams(r), cutoff, kFourModeTailTol),
                                                  build_coherent({mu}, cutoff), build_coherent({mu}, cutoff));
  const DeltaNResponse response(in);
  const PhaseConfig center(0.0, 0.0);
  const double denom = mixed_derivative_denominator(in, center, step);
  const double variance = delta_n_variance(in, center);
  const double delta_e = uncertainty_from_variance(variance, denom);
  const double delta_e_cl = classical_uncertainty(mu);

  SweepResult res{"phase-mc",
                  {{"backend", std::string(to_string(Backend::FockOracle))},
                   {"n_max", std::to_string(cutoff.n_max())},
                   {"shards", std::to_string(kPhaseShards)}},
                  {"rho", "sigma", "samples", "e_par", "e_par_se", "e_perp", "e_perp_se", "denominator", "correlation",
                   "correlation_se", "injected", "variance", "delta_e", "delta_e_cl", "ratio", "backend"},
                  {}};
  // rows run in turn; the workers go to the sample shards
  for (double rho : config.values("phase-mc.rho")) {
    const PhaseNoiseModel par(sigma, sigma, rho, NoiseConfiguration::Parallel);
    const auto e_par = phase_averaged_expectation(par, response, center, samples, seed, workers);
    const auto e_perp = phase_averaged_expectation(par.with_configuration(NoiseConfiguration::Orthogonal), response,
                                                   center, samples, seed, workers);
    const double corr = correlation_estimate(e_par.mean, e_perp.mean, denom);
    const double corr_se = std::hypot(e_par.standard_error, e_perp.standard_error) / std::abs(denom);
    res.rows.push_back({cell(rho), cell(sigma), std::to_string(samples), cell(e_par.mean),
                        cell(e_par.standard_error), cell(e_perp.mean), cell(e_perp.standard_error), cell(denom),
                        cell(corr), cell(corr_se), cell(rho * sigma * sigma), cell(variance), cell(delta_e),
                        cell(delta_e_cl), cell(delta_e / delta_e_cl), std::string(to_string(Backend::FockOracle))});
  }
  return res;
}

void write_csv(std::ostream& out, const SweepResult& result, const RunConfig& config, const std::string& timestamp) {
  out << "# tool=holosim\n# version=" << HOLOSIM_VERSION << "\n# mode=" << result.mode << "\n";
  out << "# generated=" << timestamp << "\n";
  for (const auto& [k, v] : result.metadata) out << "# " << k << "=" << v << "\n";
  for (const auto& [k, v] : config.echo()) out << "# config." << k << "=" << v << "\n";
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  };
  line(result.columns);
  for (const auto& row : result.rows) line(row);
}

std::string gnuplot_script(const SweepResult& result, const std::string& csv_path) {
  // gnuplot columns are 1-based
  auto col = [&](const std::string& name) { return std::to_string(result.column(name) + 1); };
  std::ostringstream s;
  s << "# generated by holosim " << result.mode << "\n";
  s << "set datafile separator ','\nset datafile commentschars '#'\nset key top right\n";
  s << "file = '" << csv_path << "'\n";
  if (result.mode == "sweep-env-coupling" || result.mode == "sweep-env-squeezing") {
    const bool coupling = result.mode == "sweep-env-coupling";
    const std::string x = col(coupling ? "lambda_tau" : "r");
    if (coupling) s << "set logscale x\nset xlabel 'lambda tau'\n";
    else s << "set xlabel 'r'\n";
    s << "set ylabel 'Delta E / Delta E_cl'\n";
    s << "Ms = '";
    std::vector<std::string> seen;
    const std::size_t mcol = result.column("M");
    for (const auto& row : result.rows) {
      if (std::find(seen.begin(), seen.end(), row[mcol]) == seen.end()) seen.push_back(row[mcol]);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) s << (i ? " " : "") << seen[i];
    s << "'\n";
    s << "plot for [m in Ms] file every ::1 using " << x << ":(column(" << col("M") << ") == real(m) ? column("
      << col("ratio_approx") << ") : 1/0) with lines title 'M='.m, \\\n";
    s << "     for [m in Ms] file every ::1 using " << x << ":(column(" << col("M") << ") == real(m) ? column("
      << col("ratio_full") << ") : 1/0) with points pt 6 notitle\n";
  } else if (result.mode == "sweep-modccr") {
    s << "set xlabel 'r'\nset ylabel 'Delta E / Delta E_cl'\n";
    s << "eps = '";
    std::vector<std::string> seen;
    const std::size_t ecol = result.column("epsilon");
    for (const auto& row : result.rows) {
      if (std::find(seen.begin(), seen.end(), row[ecol]) == seen.end()) seen.push_back(row[ecol]);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) s << (i ? " " : "") << seen[i];
    s << "'\n";
    s << "plot for [e in eps] file every ::1 using " << col("r") << ":(column(" << col("epsilon")
      << ") == real(e) ? column(" << col("ratio_analytic") << ") : 1/0) with lines title 'epsilon='.e, \\\n";
    s << "     for [e in eps] file every ::1 using " << col("r") << ":(column(" << col("epsilon")
      << ") == real(e) ? column(" << col("ratio_fock") << ") : 1/0) with points pt 6 notitle\n";
  } else {
    s << "set xlabel 'rho sigma^2 (injected)'\nset ylabel 'recovered'\nset style data points\n";
    s << "plot file every ::1 using " << col("injected") << ":" << col("correlation") << ":" << col("correlation_se")
      << " with yerrorbars title 'recovered', x with lines title 'ideal'\n";
  }
  return s.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace holosim
