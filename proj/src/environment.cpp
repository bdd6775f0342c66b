#include "holosim/environment.hpp"

#include <cmath>

#include "holosim/error.hpp"

namespace holosim {

EnvironmentParams::EnvironmentParams(double lambda, double M, double tau) : lambda_(lambda), M_(M), tau_(tau) {
  require(lambda >= 0.0 && M >= 0.0 && tau >= 0.0, ErrorCode::NegativeParameter,
          "lambda, M and tau must be non-negative");
}

EnvironmentParams EnvironmentParams::from_bath(double lambda, double beta, double omega, double length) {
  EnvironmentParams env(lambda, boltzmann_factor(beta, omega), flight_time(length));
  env.provenance_ = BathProvenance{beta, omega, length};
  return env;
}

double boltzmann_factor(double beta, double omega) {
  const double x = beta * omega;
  require(x > 0.0, ErrorCode::NonPositiveExponent, "beta*omega must be positive");
  return 1.0 / std::expm1(x);
}

Eigen::Matrix4d kossakowski(const EnvironmentParams& env) {
  const double l = env.lambda();
  const double m = env.M();
  return Eigen::Vector4d(l * (1.0 + m), l * m, l * (1.0 + m), l * m).asDiagonal();
}

FokkerPlanckCoefficients fokker_planck_coefficients(const EnvironmentParams& env) {
  return {env.lambda() / 2.0, env.lambda() * (2.0 * env.M() + 1.0) / 2.0};
}

double predicted_width_rate(const FokkerPlanckCoefficients& fp, double sigma) {
  // What the closed-form width evolution does: contraction at 2*drift, bath
  // feed diffusion/2, fixed point (2M+1)/4. The drift-diffusion equation
  // integrated for Sigma = 2 var(x1 + x2) would feed 8*diffusion (fixed
  // point 4(2M+1)); the thermal width is 2M+1. See the README.
  return -2.0 * fp.drift * sigma + fp.diffusion / 2.0;
}

double flight_time(double length) {
  require(length > 0.0, ErrorCode::NonPositiveLength, "arm length must be positive");
  return 4.0 * length / kSpeedOfLight;
}

double planck_coupling_estimate(double omega_ev) {
  require(omega_ev >= 0.0, ErrorCode::NegativeParameter, "photon energy must be non-negative");
  return omega_ev * 1e-9 / kPlanckMassGeV;
}

}  // namespace holosim
