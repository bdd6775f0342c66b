#include "holosim/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "holosim/environment.hpp"
#include "holosim/error.hpp"
#include "holosim/modccr.hpp"
#include "holosim/ordering.hpp"

namespace holosim {

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

Fault parse_fault(std::string_view name) {
  if (name == "none") return Fault::None;
  if (name == "evolve-sign") return Fault::EvolveSign;
  fail(ErrorCode::ConfigError, "unknown fault '" + std::string(name) + "' (known: none, evolve-sign)");
}

TwoModeGaussianState evolve_wrong_sign(const TwoModeGaussianState& state, double M, double lambda_t) {
  const double bath = 0.5 * (M + 0.5) * (1.0 - std::exp(-lambda_t));
  const double grow = std::exp(lambda_t);
  return TwoModeGaussianState(bath + state.sigma_plus() * grow, bath + state.sigma_minus() * grow,
                              state.mean() * std::exp(-0.5 * lambda_t));
}

namespace {

struct Check {
  std::string name;
  double tolerance;
  std::function<double()> observe;
};

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// every normal-ordered monomial entering the uncertainty ratio
std::vector<WignerMonomial> ratio_monomials() {
  std::set<WignerMonomial> all;
  for (const auto& poly : {number_difference_power(2), number_difference_power(4), normal_order(quadrature_correlator())}) {
    for (const auto& [m, c] : poly.terms()) all.insert(m);
  }
  return {all.begin(), all.end()};
}

FockState random_state(int modes, FockCutoff cutoff, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  FockState s(modes, cutoff);
  for (auto& a : s.amplitudes()) a = cplx(g(rng), g(rng));
  return s.normalized();
}

std::vector<Check> build_checks(const RunConfig& config, const EvolveFn& evolve_fn) {
  std::vector<Check> checks;
  const QuadratureSpec quad{static_cast<int>(config.integer("validate.glauber_nodes"))};
  const auto seed = static_cast<std::uint64_t>(config.integer("general.seed"));

  for (double r : {0.5, 1.0, 1.5}) {
    checks.push_back({"twb_null_moments r=" + format_number(r) + " n_max=40", 1e-10, [r] {
                        // r = 1.5 leaves 3e-4 outside n_max = 40; the moments vanish regardless
                        const FockState s = build_twb(SqueezeParams(r), FockCutoff(40), 1e-3);
                        double worst = 0.0;
                        for (int p = 1; p <= 4; ++p) worst = std::max(worst, std::abs(number_difference_moment(s, p)));
                        return worst;
                      }});
  }

  for (double r : {0.3, 0.8, 1.2}) {
    const std::string tag = " r=" + format_number(r);
    checks.push_back({"fock_vs_isserlis" + tag, 1e-5, [r] {
                        const FockState s = build_twb(SqueezeParams(r), twin_beam_cutoff(r, 1e-18), 1e-18);
                        const auto g = TwoModeGaussianState::from_squeezing(SqueezeParams(r));
                        double worst = 0.0;
                        for (const auto& m : ratio_monomials()) {
                          worst = std::max(worst, rel_diff(expectation(s, m.word()), isserlis_moment(g, m)));
                        }
                        return worst;
                      }});
    checks.push_back({"glauber_vs_isserlis" + tag, 1e-5, [r, quad] {
                        const auto g = TwoModeGaussianState::from_squeezing(SqueezeParams(r));
                        const auto monos = ratio_monomials();
                        const auto values = glauber_moments(g, monos, quad);
                        double worst = 0.0;
                        for (std::size_t i = 0; i < monos.size(); ++i) {
                          worst = std::max(worst, rel_diff(values[i], isserlis_moment(g, monos[i])));
                        }
                        return worst;
                      }});
  }

  checks.push_back({"evolve_identity_at_t0", 1e-15, [evolve_fn] {
                      const auto s = TwoModeGaussianState::from_squeezing(SqueezeParams(1.1));
                      const auto e = evolve_fn(s, 0.8, 0.0);
                      return std::max(std::abs(e.sigma_plus() - s.sigma_plus()),
                                      std::abs(e.sigma_minus() - s.sigma_minus()));
                    }});
  checks.push_back({"evolve_semigroup", 1e-12, [evolve_fn] {
                      double worst = 0.0;
                      for (double r : {0.3, 1.1, 2.0}) {
                        const auto s = TwoModeGaussianState::from_squeezing(SqueezeParams(r));
                        for (double M : {0.0, 0.8}) {
                          for (double t1 : {0.01, 0.3}) {
                            for (double t2 : {0.2, 1.7}) {
                              const auto a = evolve_fn(evolve_fn(s, M, t1), M, t2);
                              const auto b = evolve_fn(s, M, t1 + t2);
                              worst = std::max({worst, std::abs(a.sigma_plus() - b.sigma_plus()),
                                                std::abs(a.sigma_minus() - b.sigma_minus())});
                            }
                          }
                        }
                      }
                      return worst;
                    }});
  checks.push_back({"fokker_planck_width_rate", 1e-6, [evolve_fn] {
                      double worst = 0.0;
                      for (double M : {0.0, 1.0}) {
                        for (double r : {0.5, 2.0}) {
                          const double lambda = 3.0;
                          const EnvironmentParams env(lambda, M, 1.0);
                          const auto fp = fokker_planck_coefficients(env);
                          const auto s = TwoModeGaussianState::from_squeezing(SqueezeParams(r));
                          const double dt = 1e-7 / lambda;
                          const auto e = evolve_fn(s, M, lambda * dt);
                          for (auto [now, next] : {std::pair{s.sigma_plus(), e.sigma_plus()},
                                                   std::pair{s.sigma_minus(), e.sigma_minus()}}) {
                            const double predicted = predicted_width_rate(fp, now);
                            worst = std::max(worst, std::abs((next - now) / dt / predicted - 1.0));
                          }
                        }
                      }
                      return worst;
                    }});

  for (double eps : {0.01, 0.1}) {
    checks.push_back({"deformed_commutators eps=" + format_number(eps), 1e-10,
                      [eps] { return deformed_commutator_check(AuxiliaryModeMap(eps), FockCutoff(20)).max(); }});
  }
  for (double r : {0.4, 0.8, 1.2}) {
    checks.push_back({"duhamel_vs_closed_form r=" + format_number(r), 1e-8, [r] {
                        const FockCutoff cutoff(twin_beam_cutoff(r, 1e-20).n_max() + 4);
                        const FockState duhamel = duhamel_first_order(r, squeeze_generator_expansion(r).first, cutoff);
                        return max_abs_difference(duhamel, twb_prime_correction(r, cutoff));
                      }});
  }
  checks.push_back({"squeeze_conjugation_identity", 1e-9, [] {
                      double worst = 0.0;
                      for (double u : {0.25, 0.5, 1.0}) {
                        worst = std::max(worst, conjugation_identity_deviation(0.8, u, FockCutoff(110), 4));
                      }
                      return worst;
                    }});

  checks.push_back({"beam_splitter_unitarity", 1e-10, [seed] {
                      const FockCutoff cutoff(6);
                      BeamSplitter bs(cutoff);
                      double worst = 0.0;
                      for (std::uint64_t k = 0; k < 4; ++k) {
                        const FockState s = random_state(2, cutoff, seed + k);
                        for (double phi : {0.1, 1.3, 2.9, -0.7}) {
                          worst = std::max(worst, std::abs(bs.apply(s, 0, 1, phi).norm_squared() - 1.0));
                        }
                      }
                      return worst;
                    }});
  checks.push_back({"beam_splitter_composition", 1e-9, [seed] {
                      const FockCutoff cutoff(6);
                      BeamSplitter bs(cutoff);
                      double worst = 0.0;
                      for (std::uint64_t k = 0; k < 4; ++k) {
                        const FockState s = random_state(2, cutoff, seed + k);
                        const FockState two = bs.apply(bs.apply(s, 0, 1, 0.4), 0, 1, 0.9);
                        worst = std::max(worst, max_abs_difference(two, bs.apply(s, 0, 1, 1.3)));
                      }
                      return worst;
                    }});
  return checks;
}

}  // namespace

ValidationReport run_validate(const RunConfig& config, Fault fault, int workers) {
  const EvolveFn evolve_fn = fault == Fault::EvolveSign
                                 ? EvolveFn(evolve_wrong_sign)
                                 : EvolveFn([](const TwoModeGaussianState& s, double M, double lt) {
                                     return evolve(s, M, lt);
                                   });
  const auto checks = build_checks(config, evolve_fn);
  ValidationReport report;
  report.checks.resize(checks.size());
  parallel_rows(checks.size(), workers, [&](std::size_t i) {
    const Check& c = checks[i];
    ValidationCheck& out = report.checks[i];
    out.name = c.name;
    out.tolerance = c.tolerance;
    try {
      out.observed = c.observe();
      out.passed = std::isfinite(out.observed) && out.observed <= c.tolerance;
    } catch (const std::exception& e) {
      out.observed = std::numeric_limits<double>::quiet_NaN();
      out.passed = false;
      out.detail = e.what();
    }
    return std::vector<std::string>{};
  });
  return report;
}

SweepResult to_sweep_result(const ValidationReport& report, Fault fault) {
  SweepResult res{"validate",
                  {{"fault", fault == Fault::EvolveSign ? "evolve-sign" : "none"},
                   {"passed", report.passed() ? "true" : "false"}},
                  {"check", "tolerance", "observed", "passed", "detail"},
                  {}};
  for (const auto& c : report.checks) {
    // commas and newlines would break the row
    std::string detail = c.detail;
    std::replace_if(detail.begin(), detail.end(), [](char ch) { return ch == ',' || ch == '\n'; }, ';');
    res.rows.push_back({c.name, format_number(c.tolerance), std::isnan(c.observed) ? "" : format_number(c.observed),
                        c.passed ? "1" : "0", detail});
  }
  return res;
}

}  // namespace holosim
