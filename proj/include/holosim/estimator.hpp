#pragma once

// Photon-number-difference statistics, the phase-correlation estimator and
// the normalized uncertainty in its several evaluation routes. Four-mode
// states are ordered (a1, b1, a2, b2).

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "holosim/fock.hpp"
#include "holosim/gaussian.hpp"
#include "holosim/modccr.hpp"

namespace holosim {

inline constexpr double kDenominatorFloor = 1e-8;
inline constexpr int kMinPhaseSamples = 1000;
inline constexpr int kPhaseShards = 16;

enum class Backend { GaussianFull, GaussianApprox, FockOracle, AnalyticModccr };

std::string_view to_string(Backend backend);

struct UncertaintyResult {
  double ratio;
  Backend backend;
  std::vector<std::pair<std::string, double>> inputs;
};

enum class NoiseConfiguration { Parallel, Orthogonal };

std::string_view to_string(NoiseConfiguration config);

/// Bivariate Gaussian phase noise about the central phases. The orthogonal
/// arrangement is uncorrelated whatever rho is passed.
class PhaseNoiseModel {
 public:
  PhaseNoiseModel(double sigma1, double sigma2, double rho, NoiseConfiguration config);

  double sigma1() const { return sigma1_; }
  double sigma2() const { return sigma2_; }
  double rho() const { return rho_; }
  NoiseConfiguration configuration() const { return config_; }

  /// Same marginals in the other arrangement.
  PhaseNoiseModel with_configuration(NoiseConfiguration config) const;

 private:
  double sigma1_;
  double sigma2_;
  double rho_;
  NoiseConfiguration config_;
};

/// <[N_c1 - N_c2]^2> after the two interferometers.
double delta_n_expectation(const FockState& state, const PhaseConfig& phases, BeamSplitter& splitter);
double delta_n_expectation(const FockState& state, const PhaseConfig& phases);

/// <(N_c1 - N_c2)^4> - <(N_c1 - N_c2)^2>^2 at the given phases.
double delta_n_variance(const FockState& state, const PhaseConfig& phases);

/// <Delta N(phi1, phi2)> as an exact trigonometric quadratic form. With
/// t(phi) = (1, cos phi, sin phi):
///   f = t1' G1 t1 + t2' G2 t2 - 2 t1' K t2.
class DeltaNResponse {
 public:
  explicit DeltaNResponse(const FockState& state);

  double value(double phi1, double phi2) const;
  /// d^2 f / dphi1 dphi2, analytic.
  double mixed_derivative(double phi1, double phi2) const;

  const Eigen::Matrix3d& g1() const { return g1_; }
  const Eigen::Matrix3d& g2() const { return g2_; }
  const Eigen::Matrix3d& k() const { return k_; }

 private:
  Eigen::Matrix3d g1_;
  Eigen::Matrix3d g2_;
  Eigen::Matrix3d k_;
};

struct MonteCarloEstimate {
  double mean;
  double standard_error;
  std::int64_t samples;
};

/// Average of <Delta N> over the noise model centred on the reference
/// phases. Samples are split into kPhaseShards fixed shards with seeds
/// derived from (seed, shard), so the result does not depend on workers.
/// Throws InvalidArgument below kMinPhaseSamples.
MonteCarloEstimate phase_averaged_expectation(const PhaseNoiseModel& noise, const DeltaNResponse& response,
                                              const PhaseConfig& center, std::int64_t samples, std::uint64_t seed,
                                              int workers = 1);
MonteCarloEstimate phase_averaged_expectation(const PhaseNoiseModel& noise, const FockState& state,
                                              const PhaseConfig& center, std::int64_t samples, std::uint64_t seed,
                                              int workers = 1);

/// (e_par - e_perp) / denom. Throws DegenerateDenominator if |denom| <= 1e-8.
double correlation_estimate(double e_par, double e_perp, double denom);

/// Central finite difference of delta_n_expectation in both phases at the
/// reference phases with steps h and h/2, returning their Richardson
/// extrapolation. Throws StepTooLarge
/// for h outside [1e-4, 1e-2] or if the two steps differ by more than 1%,
/// DegenerateDenominator if the result is below the floor.
double mixed_derivative_denominator(const FockState& state, const PhaseConfig& phases, double h);

/// Same quantity at zero reference phases from the Gaussian backend with
/// coherent b-ports: -1/2 <(mu1 a1^dag + mu1* a1)(mu2 a2^dag + mu2* a2)>.
double mixed_derivative_gaussian(const TwoModeGaussianState& a_ports, cplx mu1, cplx mu2);

/// sqrt(2 Var[Delta N]) / |<d1 d2 Delta N>| at the reference phases.
double uncertainty_from_variance(double variance, double denominator);

/// Moments entering the normalized uncertainty.
struct RatioMoments {
  double dn2;          // <DeltaN^2>, DeltaN = a1^dag a1 - a2^dag a2
  double dn4;          // <DeltaN^4>
  double correlator;   // <(a1^dag + a1)(a2^dag + a2)>
  double scale;        // largest term magnitude, for the round-off guard
};

RatioMoments gaussian_ratio_moments(const TwoModeGaussianState& state);

/// 2 (dn4 - dn2^2)^{1/2} / correlator. Variances within round-off of zero
/// are treated as zero; clearly negative ones throw NonPhysicalState.
double uncertainty_ratio(const RatioMoments& m);

/// Twin beam evolved in the bath for lambda*tau, all moments from the
/// Gaussian backend. Throws NonPhysicalState where the evolved widths give
/// a negative number-difference variance.
UncertaintyResult uncertainty_env_full(double r, double M, double lambda_tau);

/// 8 sqrt(lambda tau) [(2M+1) cosh 2r - 1]^{1/2} / sinh 2r.
UncertaintyResult uncertainty_env_approx(double r, double M, double lambda_tau);

/// 8 r |eps| / sinh 2r.
UncertaintyResult uncertainty_modccr_analytic(double r, double epsilon);

/// Fock evaluation on the normalized perturbed twin beam, number
/// difference of the auxiliary modes; correlator from the undeformed twin
/// beam. Requires r <= 1.2 and |eps| <= 0.1.
UncertaintyResult uncertainty_modccr_fock(const DeformationParams& params, FockCutoff cutoff);

/// sqrt(2) / |mu|^2. Throws ZeroAmplitude for mu = 0.
double classical_uncertainty(cplx mu);

}  // namespace holosim
