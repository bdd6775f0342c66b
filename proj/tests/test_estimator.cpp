#include <doctest.h>

#include <array>
#include <cmath>

#include "holosim/estimator.hpp"

using namespace holosim;

namespace {

const FockCutoff kCut(12);

FockState standard_input(double r = 0.6, double mu = 0.8) {
  return build_interferometer_input(build_twb(SqueezeParams(r), kCut, kFourModeTailTol), build_coherent({mu}, kCut),
                                    build_coherent({mu}, kCut));
}

// Heisenberg picture: c = a cos(phi/2) + b sin(phi/2) applied to the input,
// no beam-splitter unitary involved
double delta_n_heisenberg(const FockState& in, double phi1, double phi2) {
  auto output_number = [](int a, int b, double phi) {
    const OperatorPolynomial c = OperatorPolynomial::single(annihilate(a), std::cos(phi / 2)) +
                                 OperatorPolynomial::single(annihilate(b), std::sin(phi / 2));
    return c.adjoint() * c;
  };
  const OperatorPolynomial diff = output_number(0, 1, phi1) - output_number(2, 3, phi2);
  return (diff * diff).expectation(in).real();
}

}  // namespace

TEST_CASE("number difference after the interferometers") {
  CHECK(std::abs(delta_n_expectation(standard_input(), PhaseConfig(0.0, 0.0))) < 1e-12);
  const FockState vac = FockState::vacuum(4, FockCutoff(4));
  CHECK(delta_n_expectation(vac, PhaseConfig(0.3, -1.1)) == 0.0);

  const FockState in = standard_input();
  CHECK(delta_n_expectation(in, PhaseConfig(0.2, 0.2)) ==
        doctest::Approx(delta_n_heisenberg(in, 0.2, 0.2)).epsilon(1e-6));
  CHECK(delta_n_expectation(in, PhaseConfig(0.7, -0.4)) ==
        doctest::Approx(delta_n_heisenberg(in, 0.7, -0.4)).epsilon(1e-6));
}

TEST_CASE("trigonometric response matches the interferometer evaluation") {
  const FockState in = standard_input();
  const DeltaNResponse resp(in);
  for (auto [p1, p2] : {std::pair{0.0, 0.0}, {0.2, 0.2}, {1.0, -0.3}, {-2.0, 0.5}}) {
    CHECK(resp.value(p1, p2) == doctest::Approx(delta_n_expectation(in, PhaseConfig(p1, p2))).epsilon(1e-7));
  }
}

TEST_CASE("correlation estimate") {
  CHECK(correlation_estimate(2.5, 2.5, 0.3) == 0.0);
  CHECK(correlation_estimate(3.0, 1.0, 2.0) == 1.0);
  CHECK_THROWS_AS(correlation_estimate(1.0, 0.0, 1e-9), Error);
}

TEST_CASE("mixed derivative denominator") {
  const FockState in = standard_input();
  const PhaseConfig center(0.0, 0.0);
  const double d = mixed_derivative_denominator(in, center, 1e-3);
  const double gaussian =
      mixed_derivative_gaussian(TwoModeGaussianState::from_squeezing(SqueezeParams(0.6)), 0.8, 0.8);
  // closed form: -mu^2 sinh(2r) / 2
  CHECK(gaussian == doctest::Approx(-0.32 * std::sinh(1.2)).epsilon(1e-12));
  CHECK(d == doctest::Approx(gaussian).epsilon(0.01));
  CHECK(d == doctest::Approx(DeltaNResponse(in).mixed_derivative(0.0, 0.0)).epsilon(1e-6));

  // relabelling the interferometers
  const std::array<int, 4> swap{2, 3, 0, 1};
  CHECK(mixed_derivative_denominator(permute_modes(in, swap), center, 1e-3) == doctest::Approx(d).epsilon(1e-9));

  const FockState vac = FockState::vacuum(4, FockCutoff(4));
  CHECK_THROWS_AS(mixed_derivative_denominator(vac, center, 1e-3), Error);
  CHECK_THROWS_AS(mixed_derivative_denominator(in, center, 0.1), Error);
  CHECK_THROWS_AS(mixed_derivative_denominator(in, center, 1e-5), Error);
}

TEST_CASE("phase averaging") {
  const FockState in = standard_input();
  const DeltaNResponse resp(in);
  const PhaseConfig center(0.0, 0.0);

  SUBCASE("zero width reproduces the central value") {
    const auto e = phase_averaged_expectation(PhaseNoiseModel(0.0, 0.0, 0.0, NoiseConfiguration::Parallel), resp,
                                              center, 1000, 7);
    CHECK(e.mean == doctest::Approx(delta_n_expectation(in, center)).epsilon(1e-12));
    CHECK(e.standard_error == 0.0);
  }
  SUBCASE("uncorrelated arrangements agree") {
    const PhaseNoiseModel par(1e-2, 1e-2, 0.0, NoiseConfiguration::Parallel);
    const auto a = phase_averaged_expectation(par, resp, center, 100000, 3);
    const auto b = phase_averaged_expectation(par.with_configuration(NoiseConfiguration::Orthogonal), resp, center,
                                              100000, 3);
    CHECK(std::abs(a.mean - b.mean) < 3 * std::hypot(a.standard_error, b.standard_error));
  }
  SUBCASE("orthogonal arrangement drops the correlation") {
    CHECK(PhaseNoiseModel(0.1, 0.1, 0.5, NoiseConfiguration::Orthogonal).rho() == 0.0);
  }
  SUBCASE("worker count does not change the estimate") {
    const PhaseNoiseModel par(1e-2, 1e-2, 0.5, NoiseConfiguration::Parallel);
    const auto one = phase_averaged_expectation(par, resp, center, 20000, 11, 1);
    const auto four = phase_averaged_expectation(par, resp, center, 20000, 11, 4);
    CHECK(one.mean == four.mean);
    CHECK(one.standard_error == four.standard_error);
  }
  SUBCASE("standard error scales with the sample count") {
    const PhaseNoiseModel par(1e-2, 1e-2, 0.5, NoiseConfiguration::Parallel);
    const auto small = phase_averaged_expectation(par, resp, center, 50000, 5);
    const auto large = phase_averaged_expectation(par, resp, center, 100000, 5);
    CHECK(small.standard_error / large.standard_error == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
  }
  SUBCASE("too few samples") {
    CHECK_THROWS_AS(phase_averaged_expectation(PhaseNoiseModel(0.01, 0.01, 0, NoiseConfiguration::Parallel), resp,
                                               center, 999, 1),
                    Error);
  }
}

TEST_CASE("injected phase correlation is recovered") {
  const FockState in = standard_input();
  const DeltaNResponse resp(in);
  const PhaseConfig center(0.0, 0.0);
  const double sigma = 1e-2;
  const double rho = 0.5;
  const double denom = mixed_derivative_denominator(in, center, 1e-3);
  const PhaseNoiseModel par(sigma, sigma, rho, NoiseConfiguration::Parallel);
  const auto e_par = phase_averaged_expectation(par, resp, center, 100000, 2024);
  const auto e_perp =
      phase_averaged_expectation(par.with_configuration(NoiseConfiguration::Orthogonal), resp, center, 100000, 2024);
  const double est = correlation_estimate(e_par.mean, e_perp.mean, denom);
  const double se = std::hypot(e_par.standard_error, e_perp.standard_error) / std::abs(denom);
  CHECK(est == doctest::Approx(rho * sigma * sigma).epsilon(0.1));
  CHECK(std::abs(est - rho * sigma * sigma) < 3 * se);
}

TEST_CASE("uncertainty at the central phases vanishes for the twin beam") {
  const FockState in = standard_input();
  const PhaseConfig center(0.0, 0.0);
  const double var = delta_n_variance(in, center);
  CHECK(std::abs(var) < 1e-12);
  CHECK(uncertainty_from_variance(var, mixed_derivative_denominator(in, center, 1e-3)) < 1e-5);
}

TEST_CASE("closed-form uncertainty") {
  CHECK(uncertainty_env_approx(2.0, 0.0, 0.0).ratio == 0.0);
  // direct evaluation of 8 sqrt(lt) sqrt((2M+1) cosh 2r - 1) / sinh 2r
  const double expected = 8.0 * std::sqrt(1e-3) * std::sqrt(std::cosh(4.0) - 1.0) / std::sinh(4.0);
  CHECK(uncertainty_env_approx(2.0, 0.0, 1e-3).ratio == doctest::Approx(expected).epsilon(1e-14));
  CHECK(std::abs(uncertainty_env_approx(2.0, 0.0, 1e-3).ratio - 0.0475481) < 1e-6);
  CHECK(std::abs(uncertainty_env_approx(2.0, 1.0, 1e-3).ratio - 0.083393) < 1e-6);
  CHECK(uncertainty_env_approx(2.0, 1.0, 1e-3).backend == Backend::GaussianApprox);
  CHECK_THROWS_AS(uncertainty_env_approx(0.0, 0.0, 1e-3), Error);

  CHECK(uncertainty_modccr_analytic(1.0, 0.0).ratio == 0.0);
  CHECK(uncertainty_modccr_analytic(1.0, 0.05).ratio == doctest::Approx(0.4 / std::sinh(2.0)).epsilon(1e-14));
  CHECK(uncertainty_modccr_analytic(1.0, 0.05).ratio == doctest::Approx(0.110288).epsilon(1e-5));
  CHECK(uncertainty_modccr_analytic(1e-4, 0.05).ratio == doctest::Approx(4 * 0.05).epsilon(1e-7));
  CHECK(uncertainty_modccr_analytic(0.5, -0.05).ratio == uncertainty_modccr_analytic(0.5, 0.05).ratio);
}

TEST_CASE("bath-evolved uncertainty from the Gaussian backend") {
  CHECK(uncertainty_env_full(2.0, 0.0, 0.0).ratio == 0.0);
  CHECK(uncertainty_env_full(2.0, 1.5, 0.0).ratio == 0.0);
  double prev = 0.0;
  for (double M : {0.0, 0.5, 1.0, 2.0}) {
    const auto res = uncertainty_env_full(2.0, M, 1e-3);
    CHECK(res.backend == Backend::GaussianFull);
    CHECK(res.ratio > prev);
    prev = res.ratio;
  }
  // the closed-form widths undershoot the vacuum at weak squeezing
  CHECK_THROWS_AS(uncertainty_env_full(1.0, 0.0, 1e-3), Error);
  CHECK_THROWS_AS(uncertainty_env_full(0.0, 0.0, 1e-3), Error);
}

TEST_CASE("moments on the undamped twin beam") {
  const auto m = gaussian_ratio_moments(TwoModeGaussianState::from_squeezing(SqueezeParams(1.3)));
  CHECK(std::abs(m.dn2) < 1e-12 * m.scale);
  CHECK(std::abs(m.dn4) < 1e-12 * m.scale);
  CHECK(m.correlator == doctest::Approx(std::sinh(2.6)).epsilon(1e-13));
}

TEST_CASE("deformed-commutator uncertainty on the Fock oracle") {
  const FockCutoff cutoff(twin_beam_cutoff(0.8, 1e-14).n_max());
  CHECK(uncertainty_modccr_fock(DeformationParams(0.0, 0.8), cutoff).ratio == 0.0);
  const double eps = 0.05;
  const double fock = uncertainty_modccr_fock(DeformationParams(eps, 0.8), cutoff).ratio;
  const double analytic = 8 * 0.8 * eps / std::sinh(1.6);
  CHECK(std::abs(fock / analytic - 1.0) <= 5 * eps);
  const double doubled = uncertainty_modccr_fock(DeformationParams(2 * eps, 0.8), cutoff).ratio;
  CHECK(doubled / fock == doctest::Approx(2.0).epsilon(5 * 2 * eps));
  CHECK_THROWS_AS(uncertainty_modccr_fock(DeformationParams(0.15, 0.8), cutoff), Error);
  CHECK_THROWS_AS(uncertainty_modccr_fock(DeformationParams(0.05, 1.3), cutoff), Error);
}

TEST_CASE("classical baseline") {
  CHECK(classical_uncertainty(1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(classical_uncertainty(2.0) == doctest::Approx(classical_uncertainty(1.0) / 4));
  CHECK(classical_uncertainty(1e3) == doctest::Approx(1.41421e-6).epsilon(1e-5));
  CHECK_THROWS_AS(classical_uncertainty(0.0), Error);
}
