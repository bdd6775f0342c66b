#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "holosim/config.hpp"
#include "holosim/error.hpp"
#include "holosim/sweep.hpp"
#include "holosim/validate.hpp"

using namespace holosim;

namespace {

std::string config_error_message(const std::string& text) {
  try {
    RunConfig::parse(text);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  FAIL("no error for: " << text);
  return {};
}

std::string without_timestamp(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.rfind("# generated=", 0) != 0) out += line + "\n";
  }
  return out;
}

std::string csv_text(const SweepResult& r, const RunConfig& c, const std::string& stamp) {
  std::ostringstream s;
  write_csv(s, r, c, stamp);
  return s.str();
}

// rows of `res` with the given value in `column`
std::vector<std::size_t> rows_where(const SweepResult& res, const std::string& column, double value) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (res.number(i, column) == value) out.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("defaults follow the figure captions") {
  const RunConfig c;
  CHECK(c.number("coupling.r") == 2.0);
  CHECK(c.number("squeezing.lambda_tau") == 1e-3);
  CHECK(c.values("coupling.M") == std::vector<double>{0.0, 0.5, 1.0, 2.0});
  CHECK(c.values("modccr.epsilon") == std::vector<double>{0.01, 0.05, 0.1});
  CHECK(c.integer("general.seed") == 1);

  const auto& lt = c.values("coupling.lambda_tau");
  REQUIRE(lt.size() == 41);
  CHECK(lt.front() == 1e-6);
  CHECK(lt.back() == 1e-2);
  CHECK(lt[30] == 1e-3);  // decade points land exactly
  for (std::size_t k = 1; k < lt.size(); ++k) CHECK(lt[k] / lt[k - 1] == doctest::Approx(std::pow(10.0, 0.1)));

  const auto& r = c.values("squeezing.r");
  REQUIRE(r.size() == 56);
  CHECK(r.front() == 0.25);
  CHECK(r.back() == 3.0);
  CHECK(r[35] == 2.0);
}

TEST_CASE("config parsing") {
  const RunConfig c = RunConfig::parse(R"(
# comment line
[coupling]
r = 1.5        # trailing comment
M = 0, 3
lambda_tau = linear(0.001, 0.002, 3)
zero_endpoint = false

[general]
seed = 77
)");
  CHECK(c.number("coupling.r") == 1.5);
  CHECK(c.values("coupling.M") == std::vector<double>{0.0, 3.0});
  CHECK(c.values("coupling.lambda_tau") == std::vector<double>{0.001, 0.0015, 0.002});
  CHECK_FALSE(c.boolean("coupling.zero_endpoint"));
  CHECK(c.integer("general.seed") == 77);
  // untouched keys keep their defaults
  CHECK(c.number("squeezing.lambda_tau") == 1e-3);
  // an explicit list is accepted where a grid is expected
  CHECK(RunConfig::parse("[modccr]\nr = 0.4, 0.8\n").values("modccr.r") == std::vector<double>{0.4, 0.8});
}

TEST_CASE("config errors carry line numbers") {
  CHECK(config_error_message("[nope]\n").find("line 1") != std::string::npos);
  CHECK(config_error_message("[coupling]\nrr = 1\n").find("line 2") != std::string::npos);
  CHECK(config_error_message("[coupling]\nr = 1\n\nr = 2\n").find("line 4: duplicate") != std::string::npos);
  CHECK(config_error_message("[coupling]\nr = two\n").find("line 2") != std::string::npos);
  CHECK(config_error_message("r = 1\n").find("outside a section") != std::string::npos);
  CHECK(config_error_message("[coupling\n").find("line 1") != std::string::npos);
  CHECK(config_error_message("[coupling]\nr\n").find("key = value") != std::string::npos);
  CHECK(config_error_message("[general]\nseed = 1.5\n").find("integer") != std::string::npos);
  CHECK(config_error_message("[coupling]\nzero_endpoint = yes\n").find("true or false") != std::string::npos);
  // grid invariants
  CHECK(config_error_message("[squeezing]\nr = linear(1, 2, 1)\n").find("2 points") != std::string::npos);
  CHECK(config_error_message("[squeezing]\nr = linear(2, 1, 5)\n").find("stop > start") != std::string::npos);
  CHECK(config_error_message("[squeezing]\nr = linear(1, 1, 5)\n").find("stop > start") != std::string::npos);
  CHECK(config_error_message("[coupling]\nlambda_tau = log(0, 1, 5)\n").find("start > 0") != std::string::npos);
  CHECK(config_error_message("[coupling]\nlambda_tau = log(1e-6, 1e-2)\n").find("line 2") != std::string::npos);
  CHECK(config_error_message("[phase-mc]\nsamples = 10\n").find("1000") != std::string::npos);
  CHECK_THROWS_AS(RunConfig::load("/nonexistent/holosim.cfg"), Error);
}

TEST_CASE("set overrides and echo") {
  RunConfig c;
  c.set("general.seed", "9");
  CHECK(c.integer("general.seed") == 9);
  CHECK_THROWS_AS(c.set("general.nope", "1"), Error);
  CHECK_THROWS_AS(c.set("general.seed", "x"), Error);
  CHECK_THROWS_AS(c.number("coupling.M"), Error);  // list read as a scalar

  const auto echo = c.echo();
  std::set<std::string> keys;
  for (const auto& [k, v] : echo) keys.insert(k);
  CHECK(keys.count("general.seed") == 1);
  CHECK(keys.size() == echo.size());
  const std::string csv = csv_text(run_phase_mc(c, 1), c, "T");
  for (const auto& [k, v] : echo) CHECK(csv.find("# config." + k + "=" + v + "\n") != std::string::npos);
}

TEST_CASE("worker count precedence") {
  RunConfig c;
  ::unsetenv("HOLOSIM_WORKERS");
  CHECK(resolve_workers(c, std::nullopt) >= 1);
  c.set("general.workers", "3");
  CHECK(resolve_workers(c, std::nullopt) == 3);
  ::setenv("HOLOSIM_WORKERS", "5", 1);
  CHECK(resolve_workers(c, std::nullopt) == 5);
  CHECK(resolve_workers(c, 2) == 2);
  ::setenv("HOLOSIM_WORKERS", "zero", 1);
  CHECK_THROWS_AS(resolve_workers(c, std::nullopt), Error);
  ::unsetenv("HOLOSIM_WORKERS");
  CHECK_THROWS_AS(resolve_workers(c, 0), Error);
}

TEST_CASE("parallel rows keep index order and rethrow") {
  const auto rows = parallel_rows(50, 4, [](std::size_t i) { return std::vector<std::string>{std::to_string(i)}; });
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].front() == std::to_string(i));
  CHECK_THROWS_AS(parallel_rows(10, 3,
                                [](std::size_t i) -> std::vector<std::string> {
                                  if (i == 7) fail(ErrorCode::InvalidArgument, "boom");
                                  return {};
                                }),
                  Error);
}

TEST_CASE("coupling sweep") {
  const RunConfig c;
  const SweepResult res = run_sweep_env_coupling(c, 2);
  CHECK(res.rows.size() == 4 * 42);
  for (std::size_t i = 0; i < res.rows.size(); ++i) CHECK_FALSE(res.rows[i][res.column("backend")].empty());

  for (std::size_t i : rows_where(res, "lambda_tau", 0.0)) {
    CHECK(res.number(i, "ratio_approx") == 0.0);
    CHECK(res.number(i, "ratio_full") == 0.0);
  }
  const auto at = rows_where(res, "lambda_tau", 1e-3);
  REQUIRE(at.size() == 4);
  const double direct = 8.0 * std::sqrt(1e-3) * std::sqrt(std::cosh(4.0) - 1.0) / std::sinh(4.0);
  CHECK(*res.number(at[0], "ratio_approx") == doctest::Approx(direct).epsilon(1e-14));

  // Both columns scale as sqrt(lambda tau) at weak coupling, but with
  // different prefactors (~0.118 at r = 2, M = 0); see README.
  std::vector<double> quotients;
  for (std::size_t i : rows_where(res, "M", 0.0)) {
    const auto lt = res.number(i, "lambda_tau");
    if (*lt > 0.0 && *lt <= 1e-4) quotients.push_back(*res.number(i, "full_over_approx"));
  }
  REQUIRE(quotients.size() == 21);
  for (double q : quotients) CHECK(q == doctest::Approx(quotients.front()).epsilon(1e-3));

  // monotone in lambda tau per M
  for (double M : c.values("coupling.M")) {
    const auto rows = rows_where(res, "M", M);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(*res.number(rows[k], "ratio_approx") > *res.number(rows[k - 1], "ratio_approx"));
    }
  }
}

TEST_CASE("squeezing sweep") {
  const RunConfig c;
  const SweepResult res = run_sweep_env_squeezing(c, 2);
  CHECK(res.rows.size() == 4 * 56);
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    if (*res.number(i, "r") > 0.5 + 1e-12) CHECK(res.number(i, "decreasing") == 1.0);
    if (*res.number(i, "r") < 0.5) CHECK_FALSE(res.number(i, "decreasing").has_value());
    CHECK((res.rows[i][res.column("status")] == "ok") == res.number(i, "ratio_full").has_value());
  }
  // larger M, larger ratio at every r
  for (double r : c.values("squeezing.r")) {
    const auto rows = rows_where(res, "r", r);
    REQUIRE(rows.size() == 4);
    for (std::size_t k = 1; k < rows.size(); ++k) {
      CHECK(*res.number(rows[k], "ratio_approx") > *res.number(rows[k - 1], "ratio_approx"));
    }
  }
  // same point as the coupling sweep
  const SweepResult coupling = run_sweep_env_coupling(c, 1);
  const auto a = rows_where(res, "r", 2.0);
  const auto b = rows_where(coupling, "lambda_tau", 1e-3);
  CHECK(res.number(a[0], "ratio_approx") == coupling.number(b[0], "ratio_approx"));
  CHECK(res.number(a[0], "ratio_full") == coupling.number(b[0], "ratio_full"));
}

TEST_CASE("modccr sweep") {
  const RunConfig c;
  const SweepResult res = run_sweep_modccr(c, 2);
  CHECK(res.rows.size() == 3 * 30);
  std::size_t fock_rows = 0;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const double r = *res.number(i, "r");
    const double eps = *res.number(i, "epsilon");
    CHECK(res.number(i, "ratio_fock").has_value() == (r <= 1.2 + 1e-9));
    if (res.number(i, "ratio_fock")) {
      ++fock_rows;
      CHECK(std::abs(*res.number(i, "ratio_fock") / *res.number(i, "ratio_analytic") - 1.0) <= 5 * eps);
      CHECK(res.number(i, "within_band") == 1.0);
    }
  }
  CHECK(fock_rows == 3 * 12);

  const auto half = rows_where(res, "epsilon", 0.05);
  const auto full = rows_where(res, "epsilon", 0.1);
  REQUIRE(half.size() == full.size());
  for (std::size_t k = 0; k < half.size(); ++k) {
    CHECK(*res.number(full[k], "ratio_analytic") == 2.0 * *res.number(half[k], "ratio_analytic"));
  }
  for (std::size_t i : half) {
    if (res.number(i, "r") == 1.0) CHECK(*res.number(i, "ratio_analytic") == doctest::Approx(0.110288).epsilon(1e-5));
  }
}

TEST_CASE("phase Monte-Carlo sweep") {
  RunConfig c;
  const SweepResult res = run_phase_mc(c, 1);
  REQUIRE(res.rows.size() == 2);
  // rho = 0 first, then rho = 0.5
  CHECK(std::abs(*res.number(0, "correlation")) < 3 * *res.number(0, "correlation_se"));
  CHECK(*res.number(1, "correlation") == doctest::Approx(5e-5).epsilon(0.1));
  CHECK(res.number(1, "injected") == doctest::Approx(5e-5));

  c.set("phase-mc.samples", "200000");
  const SweepResult doubled = run_phase_mc(c, 1);
  const double shrink = *res.number(1, "e_par_se") / *doubled.number(1, "e_par_se");
  CHECK(shrink == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("identical configs give identical output") {
  RunConfig c;
  c.set("squeezing.r", "linear(0.5, 2.5, 9)");
  const std::string one = csv_text(run_sweep_env_squeezing(c, 1), c, "2000-01-01T00:00:00Z");
  const std::string two = csv_text(run_sweep_env_squeezing(c, 3), c, "2030-06-01T12:00:00Z");
  CHECK(one != two);
  CHECK(without_timestamp(one) == without_timestamp(two));

  const std::string mc1 = csv_text(run_phase_mc(c, 1), c, "a");
  const std::string mc4 = csv_text(run_phase_mc(c, 4), c, "b");
  CHECK(without_timestamp(mc1) == without_timestamp(mc4));
  c.set("general.seed", "2");
  CHECK(without_timestamp(csv_text(run_phase_mc(c, 1), c, "a")) != without_timestamp(mc1));
}

TEST_CASE("csv layout and plot script") {
  RunConfig c;
  c.set("coupling.M", "0");
  c.set("coupling.lambda_tau", "log(1e-5, 1e-3, 3)");
  const SweepResult res = run_sweep_env_coupling(c, 1);
  std::istringstream in(csv_text(res, c, "T"));
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  CHECK(lines[0] == "# tool=holosim");
  std::size_t k = 0;
  while (lines[k].rfind("#", 0) == 0) ++k;
  CHECK(lines[k] == "lambda_tau,M,r,ratio_full,ratio_approx,full_over_approx,status,backend");
  CHECK(lines.size() - k - 1 == 4);
  CHECK(lines[k + 1].rfind("0,0,2,0,0,,ok,", 0) == 0);

  const std::string gp = gnuplot_script(res, "coupling.csv");
  CHECK(gp.find("set datafile separator ','") != std::string::npos);
  CHECK(gp.find("'coupling.csv'") != std::string::npos);
  CHECK(gp.find("set logscale x") != std::string::npos);
}

TEST_CASE("validation suite and its negative control") {
  RunConfig c;
  c.set("validate.glauber_nodes", "16");  // enough for degree 8, keeps the test quick
  const ValidationReport ok = run_validate(c, Fault::None, 2);
  for (const auto& check : ok.checks) {
    INFO(check.name << " observed " << check.observed << " " << check.detail);
    CHECK(check.passed);
  }
  CHECK(ok.passed());
  CHECK(ok.checks.size() == 20);

  const ValidationReport bad = run_validate(c, Fault::EvolveSign, 2);
  CHECK_FALSE(bad.passed());
  std::set<std::string> failed;
  for (const auto& check : bad.checks) {
    if (!check.passed) failed.insert(check.name);
  }
  CHECK(failed == std::set<std::string>{"evolve_semigroup", "fokker_planck_width_rate"});

  const SweepResult table = to_sweep_result(bad, Fault::EvolveSign);
  CHECK(table.columns == std::vector<std::string>{"check", "tolerance", "observed", "passed", "detail"});
  CHECK(table.rows.size() == bad.checks.size());
  CHECK(parse_fault("evolve-sign") == Fault::EvolveSign);
  CHECK_THROWS_AS(parse_fault("nope"), Error);
}

TEST_CASE("failing checks are reported, not thrown") {
  RunConfig c;
  c.set("validate.glauber_nodes", "4");  // under-resolved on purpose
  const ValidationReport rep = run_validate(c, Fault::None, 1);
  CHECK_FALSE(rep.passed());
  for (const auto& check : rep.checks) {
    if (check.name.rfind("glauber_vs_isserlis", 0) == 0) {
      CHECK_FALSE(check.passed);
      CHECK(std::isnan(check.observed));
      CHECK(check.detail.find("QuadratureUnderResolved") != std::string::npos);
    }
  }
}
