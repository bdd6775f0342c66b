#pragma once

// Thermal-bath channel parameters. Operator index convention for the
// Kossakowski matrix: (a1, a1^dag, a2, a2^dag).

#include <optional>

#include <Eigen/Core>

namespace holosim {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s, exact SI value
inline constexpr double kPlanckMassGeV = 1.22e19;     // reduced to three digits

struct BathProvenance {
  double beta;   // inverse temperature
  double omega;  // bath energy, same units as 1/beta
  double length; // interferometer arm, metres
};

class EnvironmentParams {
 public:
  /// lambda in 1/s, tau in s.
  EnvironmentParams(double lambda, double M, double tau);
  /// M from the Boltzmann factor, tau from the arm length.
  static EnvironmentParams from_bath(double lambda, double beta, double omega, double length);

  double lambda() const { return lambda_; }
  double M() const { return M_; }
  double tau() const { return tau_; }
  double lambda_tau() const { return lambda_ * tau_; }
  const std::optional<BathProvenance>& provenance() const { return provenance_; }

 private:
  double lambda_;
  double M_;
  double tau_;
  std::optional<BathProvenance> provenance_;
};

/// 1/(e^{beta omega} - 1). Throws NonPositiveExponent unless beta*omega > 0.
double boltzmann_factor(double beta, double omega);

/// lambda * diag(1+M, M, 1+M, M).
Eigen::Matrix4d kossakowski(const EnvironmentParams& env);

struct FokkerPlanckCoefficients {
  double drift;      // multiplies d_x x + d_y y
  double diffusion;  // multiplies d_x^2 + d_y^2
};

FokkerPlanckCoefficients fokker_planck_coefficients(const EnvironmentParams& env);

/// Rate of change of a width Sigma implied by the drift-diffusion equation,
/// in the width convention where the vacuum has Sigma = 1.
double predicted_width_rate(const FokkerPlanckCoefficients& fp, double sigma);

/// tau = 4L/c. Throws NonPositiveLength for L <= 0.
double flight_time(double length);

/// lambda*tau ~ omega/M_P with omega in eV.
double planck_coupling_estimate(double omega_ev);

}  // namespace holosim
