#include "holosim/estimator.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "holosim/ordering.hpp"

namespace holosim {

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::GaussianFull: return "gaussian_full";
    case Backend::GaussianApprox: return "gaussian_approx";
    case Backend::FockOracle: return "fock_oracle";
    case Backend::AnalyticModccr: return "analytic_modccr";
  }
  return "unknown";
}

std::string_view to_string(NoiseConfiguration config) {
  return config == NoiseConfiguration::Parallel ? "parallel" : "orthogonal";
}

PhaseNoiseModel::PhaseNoiseModel(double sigma1, double sigma2, double rho, NoiseConfiguration config)
    : sigma1_(sigma1), sigma2_(sigma2), rho_(config == NoiseConfiguration::Orthogonal ? 0.0 : rho), config_(config) {
  require(sigma1 >= 0.0 && sigma2 >= 0.0, ErrorCode::NegativeParameter, "phase-noise widths must be non-negative");
  require(rho >= -1.0 && rho <= 1.0, ErrorCode::InvalidArgument, "phase correlation must lie in [-1, 1]");
}

PhaseNoiseModel PhaseNoiseModel::with_configuration(NoiseConfiguration config) const {
  return PhaseNoiseModel(sigma1_, sigma2_, rho_, config);
}

namespace {

void require_four_modes(const FockState& state) {
  require(state.modes() == 4, ErrorCode::InvalidArgument, "expected a four-mode state ordered (a1, b1, a2, b2)");
}

FockState interferometer_output(const FockState& state, const PhaseConfig& phases, BeamSplitter& splitter) {
  require_four_modes(state);
  return splitter.apply(splitter.apply(state, 0, 1, phases.phi1()), 2, 3, phases.phi2());
}

}  // namespace

double delta_n_expectation(const FockState& state, const PhaseConfig& phases, BeamSplitter& splitter) {
  return number_difference_moment(interferometer_output(state, phases, splitter), 2, 0, 2);
}

double delta_n_expectation(const FockState& state, const PhaseConfig& phases) {
  BeamSplitter splitter(state.cutoff());
  return delta_n_expectation(state, phases, splitter);
}

double delta_n_variance(const FockState& state, const PhaseConfig& phases) {
  BeamSplitter splitter(state.cutoff());
  const FockState out = interferometer_output(state, phases, splitter);
  const double m2 = number_difference_moment(out, 2, 0, 2);
  return number_difference_moment(out, 4, 0, 2) - m2 * m2;
}

// --- trigonometric response ---------------------------------------------

namespace {

// O = (N_a + N_b, N_a - N_b, a^dag b + b^dag a) / 2 for one interferometer
std::array<FockState, 3> port_operators(const FockState& s, int a, int b) {
  const FockState na = apply_ladder(apply_ladder(s, annihilate(a)), create(a));
  const FockState nb = apply_ladder(apply_ladder(s, annihilate(b)), create(b));
  const FockState hop = apply_ladder(apply_ladder(s, annihilate(b)), create(a)) +
                        apply_ladder(apply_ladder(s, annihilate(a)), create(b));
  return {cplx(0.5) * (na + nb), cplx(0.5) * (na - nb), cplx(0.5) * hop};
}

Eigen::Vector3d trig(double phi) { return {1.0, std::cos(phi), std::sin(phi)}; }
Eigen::Vector3d trig_slope(double phi) { return {0.0, -std::sin(phi), std::cos(phi)}; }

}  // namespace

DeltaNResponse::DeltaNResponse(const FockState& state) {
  require_four_modes(state);
  const auto o1 = port_operators(state, 0, 1);
  const auto o2 = port_operators(state, 2, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // O Hermitian: <O_i psi | O_j psi> = <O_i O_j>
      g1_(i, j) = inner(o1[i], o1[j]).real();
      g2_(i, j) = inner(o2[i], o2[j]).real();
      k_(i, j) = inner(o1[i], o2[j]).real();
    }
  }
}

double DeltaNResponse::value(double phi1, double phi2) const {
  const Eigen::Vector3d t1 = trig(phi1);
  const Eigen::Vector3d t2 = trig(phi2);
  return t1.dot(g1_ * t1) + t2.dot(g2_ * t2) - 2.0 * t1.dot(k_ * t2);
}

double DeltaNResponse::mixed_derivative(double phi1, double phi2) const {
  return -2.0 * trig_slope(phi1).dot(k_ * trig_slope(phi2));
}

// --- Monte Carlo -------------------------------------------------------------

namespace {

struct ShardSums {
  std::int64_t n = 0;
  double sum = 0.0;     // of f - f0
  double sum_sq = 0.0;
};

ShardSums run_shard(const PhaseNoiseModel& noise, const DeltaNResponse& response, const PhaseConfig& center,
                    std::int64_t n, std::uint64_t seed, int shard, double f0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shard),
                    static_cast<std::uint32_t>(noise.configuration() == NoiseConfiguration::Parallel ? 1 : 2)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  const double rho = noise.rho();
  const double tail = std::sqrt(1.0 - rho * rho);
  ShardSums out;
  out.n = n;
  for (std::int64_t i = 0; i < n; ++i) {
    const double z1 = normal(rng);
    const double z2 = normal(rng);
    const double d1 = noise.sigma1() * z1;
    const double d2 = noise.sigma2() * (rho * z1 + tail * z2);
    const double f = response.value(center.phi1_0() + d1, center.phi2_0() + d2) - f0;
    out.sum += f;
    out.sum_sq += f * f;
  }
  return out;
}

}  // namespace

MonteCarloEstimate phase_averaged_expectation(const PhaseNoiseModel& noise, const DeltaNResponse& response,
                                              const PhaseConfig& center, std::int64_t samples, std::uint64_t seed,
                                              int workers) {
  require(samples >= kMinPhaseSamples, ErrorCode::InvalidArgument, "phase averaging needs at least 1000 samples");
  const double f0 = response.value(center.phi1_0(), center.phi2_0());
  std::vector<ShardSums> shards(kPhaseShards);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int s = next++; s < kPhaseShards; s = next++) {
      const std::int64_t n = samples / kPhaseShards + (s < samples % kPhaseShards ? 1 : 0);
      shards[static_cast<std::size_t>(s)] = run_shard(noise, response, center, n, seed, s, f0);
    }
  };
  const int threads = std::clamp(workers, 1, kPhaseShards);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  // combine in shard order so the sum does not depend on scheduling
  double sum = 0.0;
  double sum_sq = 0.0;
  for (const auto& s : shards) {
    sum += s.sum;
    sum_sq += s.sum_sq;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - sum * mean) / (n - 1.0));
  return {f0 + mean, std::sqrt(var / n), samples};
}

MonteCarloEstimate phase_averaged_expectation(const PhaseNoiseModel& noise, const FockState& state,
                                              const PhaseConfig& center, std::int64_t samples, std::uint64_t seed,
                                              int workers) {
  return phase_averaged_expectation(noise, DeltaNResponse(state), center, samples, seed, workers);
}

double correlation_estimate(double e_par, double e_perp, double denom) {
  require(std::abs(denom) > kDenominatorFloor, ErrorCode::DegenerateDenominator,
          "mixed-derivative denominator vanishes");
  return (e_par - e_perp) / denom;
}

namespace {

double central_mixed(const FockState& state, const PhaseConfig& phases, double h, BeamSplitter& splitter) {
  const double p1 = phases.phi1_0();
  const double p2 = phases.phi2_0();
  auto f = [&](double a, double b) { return delta_n_expectation(state, PhaseConfig(p1 + a, p2 + b, p1, p2), splitter); };
  return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h);
}

}  // namespace

double mixed_derivative_denominator(const FockState& state, const PhaseConfig& phases, double h) {
  require(h >= 1e-4 && h <= 1e-2, ErrorCode::StepTooLarge, "finite-difference step must lie in [1e-4, 1e-2]");
  BeamSplitter splitter(state.cutoff());
  const double coarse = central_mixed(state, phases, h, splitter);
  require(std::abs(coarse) > kDenominatorFloor, ErrorCode::DegenerateDenominator,
          "mixed-derivative denominator vanishes");
  const double fine = central_mixed(state, phases, h / 2.0, splitter);
  require(std::abs(coarse - fine) <= 0.01 * std::abs(fine), ErrorCode::StepTooLarge,
          "finite difference changed by more than 1% when halving the step");
  return (4.0 * fine - coarse) / 3.0;
}

double mixed_derivative_gaussian(const TwoModeGaussianState& a_ports, cplx mu1, cplx mu2) {
  const OperatorPolynomial x1 =
      OperatorPolynomial::single(create(0), mu1) + OperatorPolynomial::single(annihilate(0), std::conj(mu1));
  const OperatorPolynomial x2 =
      OperatorPolynomial::single(create(1), mu2) + OperatorPolynomial::single(annihilate(1), std::conj(mu2));
  const OperatorPolynomial product = x1 * x2;
  cplx acc{};
  for (const auto& term : product.terms()) acc += term.coefficient * ordered_moment(a_ports, term.word);
  return -0.5 * acc.real();
}

double uncertainty_from_variance(double variance, double denominator) {
  require(std::abs(denominator) > kDenominatorFloor, ErrorCode::DegenerateDenominator,
          "mixed-derivative denominator vanishes");
  require(variance >= -1e-12, ErrorCode::NonPhysicalState, "negative variance");
  return std::sqrt(2.0 * std::max(variance, 0.0)) / std::abs(denominator);
}

// --- normalized uncertainty ----------------------------------------------

RatioMoments gaussian_ratio_moments(const TwoModeGaussianState& state) {
  static const NormalOrderedPolynomial dn2_poly = number_difference_power(2);
  static const NormalOrderedPolynomial dn4_poly = number_difference_power(4);
  static const NormalOrderedPolynomial corr_poly = normal_order(quadrature_correlator());
  RatioMoments m{0.0, 0.0, 0.0, 0.0};
  for (const auto& [mono, c] : dn2_poly.terms()) m.dn2 += (c * isserlis_moment(state, mono)).real();
  for (const auto& [mono, c] : dn4_poly.terms()) {
    const double term = (c * isserlis_moment(state, mono)).real();
    m.dn4 += term;
    m.scale = std::max(m.scale, std::abs(term));
  }
  m.correlator = isserlis_moment(state, corr_poly).real();
  return m;
}

double uncertainty_ratio(const RatioMoments& m) {
  require(std::abs(m.correlator) > kDenominatorFloor, ErrorCode::DegenerateDenominator,
          "quadrature correlator vanishes");
  const double guard = 1e-12 * std::max({1.0, m.scale, m.dn2 * m.dn2});
  const double variance = m.dn4 - m.dn2 * m.dn2;
  require(m.dn2 >= -guard && variance >= -guard, ErrorCode::NonPhysicalState,
          "negative number-difference moment: <dN^2> = " + format_number(m.dn2) +
              ", variance = " + format_number(variance));
  return 2.0 * std::sqrt(variance > guard ? variance : 0.0) / std::abs(m.correlator);
}

UncertaintyResult uncertainty_env_full(double r, double M, double lambda_tau) {
  const auto initial = TwoModeGaussianState::from_squeezing(SqueezeParams(r));
  const auto evolved = evolve(initial, M, lambda_tau);
  return {uncertainty_ratio(gaussian_ratio_moments(evolved)), Backend::GaussianFull,
          {{"r", r}, {"M", M}, {"lambda_tau", lambda_tau}}};
}

UncertaintyResult uncertainty_env_approx(double r, double M, double lambda_tau) {
  require(r > 0.0, ErrorCode::DegenerateDenominator, "sinh(2r) vanishes at r = 0");
  require(M >= 0.0 && lambda_tau >= 0.0, ErrorCode::NegativeParameter, "M and lambda*tau must be non-negative");
  const double ratio =
      8.0 * std::sqrt(lambda_tau) * std::sqrt((2.0 * M + 1.0) * std::cosh(2.0 * r) - 1.0) / std::sinh(2.0 * r);
  return {ratio, Backend::GaussianApprox, {{"r", r}, {"M", M}, {"lambda_tau", lambda_tau}}};
}

UncertaintyResult uncertainty_modccr_analytic(double r, double epsilon) {
  require(r > 0.0, ErrorCode::DegenerateDenominator, "sinh(2r) vanishes at r = 0");
  return {8.0 * r * std::abs(epsilon) / std::sinh(2.0 * r), Backend::AnalyticModccr, {{"r", r}, {"epsilon", epsilon}}};
}

UncertaintyResult uncertainty_modccr_fock(const DeformationParams& params, FockCutoff cutoff) {
  require(params.r() > 0.0, ErrorCode::DegenerateDenominator, "sinh(2r) vanishes at r = 0");
  // slack so grid points like 1.2000000000000002 are accepted
  require(params.r() <= 1.2 + 1e-9 && std::abs(params.epsilon()) <= 0.1 + 1e-12, ErrorCode::InvalidArgument,
          "Fock evaluation covers r <= 1.2 and |eps| <= 0.1");
  const FockState state = build_twb_prime(params, cutoff);
  const double dn2 = number_difference_moment(state, 2, 0, 1);
  const double dn4 = number_difference_moment(state, 4, 0, 1);
  const double corr = quadrature_correlator().expectation(build_twb(SqueezeParams(params.r()), cutoff)).real();
  const double ratio = uncertainty_ratio({dn2, dn4, corr, dn4});
  return {ratio, Backend::FockOracle,
          {{"r", params.r()}, {"epsilon", params.epsilon()}, {"n_max", static_cast<double>(cutoff.n_max())}}};
}

double classical_uncertainty(cplx mu) {
  require(std::abs(mu) > 0.0, ErrorCode::ZeroAmplitude, "coherent amplitude must be nonzero");
  return std::sqrt(2.0) / std::norm(mu);
}

}  // namespace holosim
