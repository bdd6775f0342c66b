#include "holosim/modccr.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "holosim/pair_exponential.hpp"
#include "holosim/quadrature.hpp"

namespace holosim {

DeformationParams::DeformationParams(double epsilon, double r) : epsilon_(epsilon), r_(r) {
  require(std::isfinite(epsilon) && std::abs(epsilon) <= kMaxDeformation, ErrorCode::InvalidArgument,
          "|epsilon| must not exceed 0.2");
  require(std::isfinite(r) && r >= 0.0, ErrorCode::InvalidArgument, "squeezing r must be >= 0");
}

AuxiliaryModeMap::AuxiliaryModeMap(double epsilon) : epsilon_(epsilon) {
  require(epsilon > -1.0, ErrorCode::InvalidArgument, "epsilon must exceed -1");
}

Eigen::Matrix<double, 2, 4> AuxiliaryModeMap::coefficients() const {
  const double s = std::sqrt(1.0 + epsilon_);
  const double k = epsilon_ / (2.0 * s);
  Eigen::Matrix<double, 2, 4> c;
  c << s, 0.0, k, -k,
       k, k, s, 0.0;
  return c;
}

OperatorPolynomial AuxiliaryModeMap::combine(const Eigen::Matrix<double, 1, 4>& row) {
  const std::array<Ladder, 4> basis{annihilate(0), create(0), annihilate(1), create(1)};
  OperatorPolynomial p;
  for (int j = 0; j < 4; ++j) {
    if (row(j) != 0.0) p.add(row(j), {basis[static_cast<std::size_t>(j)]});
  }
  return p;
}

OperatorPolynomial AuxiliaryModeMap::annihilator(int i) const {
  require(i == 0 || i == 1, ErrorCode::InvalidModeIndex, "deformed modes are 0 and 1");
  return combine(coefficients().row(i));
}

OperatorPolynomial AuxiliaryModeMap::creator(int i) const { return annihilator(i).adjoint(); }

OperatorPolynomial AuxiliaryModeMap::annihilator_slope(int i) {
  require(i == 0 || i == 1, ErrorCode::InvalidModeIndex, "deformed modes are 0 and 1");
  // sqrt(1+eps) -> 1/2, eps/(2 sqrt(1+eps)) -> 1/2
  Eigen::Matrix<double, 2, 4> d;
  d << 0.5, 0.0, 0.5, -0.5,
       0.5, 0.5, 0.5, 0.0;
  return combine(d.row(i));
}

double CommutatorReport::max() const { return std::max({a1_a2, a1_a2_dagger, a1_a1_dagger, a2_a2_dagger}); }

namespace {

OperatorPolynomial commutator(const OperatorPolynomial& x, const OperatorPolynomial& y) { return x * y - y * x; }

double deviation_on_guarded(const OperatorPolynomial& op, cplx target, FockCutoff cutoff) {
  const int guard = cutoff.n_max() - 2;
  double worst = 0.0;
  for (int n1 = 0; n1 <= guard; ++n1) {
    for (int n2 = 0; n2 <= guard; ++n2) {
      const std::array<int, 2> occ{n1, n2};
      const FockState basis = FockState::basis(cutoff, occ);
      worst = std::max(worst, max_abs_difference(op.apply(basis), target * basis));
    }
  }
  return worst;
}

void require_twin_beam_fits(double r, FockCutoff cutoff) {
  const double t2 = std::tanh(r) * std::tanh(r);
  const double tail = std::pow(t2, cutoff.n_max() + 1);
  require(tail <= kTwoModeTailTol, ErrorCode::CutoffTooSmall,
          "twin beam at r=" + format_number(r) + " leaks " + format_number(tail) + " beyond n_max=" +
              std::to_string(cutoff.n_max()));
}

}  // namespace

CommutatorReport deformed_commutator_check(const AuxiliaryModeMap& map, FockCutoff cutoff) {
  require(cutoff.n_max() >= 3, ErrorCode::CutoffTooSmall, "commutator check needs n_max >= 3");
  const double eps = map.epsilon();
  const OperatorPolynomial a1 = map.annihilator(0);
  const OperatorPolynomial a2 = map.annihilator(1);
  const OperatorPolynomial a1d = map.creator(0);
  const OperatorPolynomial a2d = map.creator(1);
  return {
      deviation_on_guarded(commutator(a1, a2), eps, cutoff),
      deviation_on_guarded(commutator(a1, a2d), eps, cutoff),
      deviation_on_guarded(commutator(a1, a1d), 1.0 + eps, cutoff),
      deviation_on_guarded(commutator(a2, a2d), 1.0 + eps, cutoff),
  };
}

GeneratorExpansion squeeze_generator_expansion(double r) {
  const auto A1 = OperatorPolynomial::single(annihilate(0));
  const auto A2 = OperatorPolynomial::single(annihilate(1));
  const auto A1d = OperatorPolynomial::single(create(0));
  const auto A2d = OperatorPolynomial::single(create(1));
  const OperatorPolynomial d1 = AuxiliaryModeMap::annihilator_slope(0);
  const OperatorPolynomial d2 = AuxiliaryModeMap::annihilator_slope(1);
  const OperatorPolynomial d1d = d1.adjoint();
  const OperatorPolynomial d2d = d2.adjoint();

  GeneratorExpansion out;
  out.zeroth = cplx(r) * (A1d * A2d - A1 * A2);
  // product rule on a1^dag a2^dag - a1 a2
  out.first = cplx(r) * (d1d * A2d + A1d * d2d - d1 * A2 - A1 * d2);
  return out;
}

namespace {

FockState duhamel_integral(double r, const OperatorPolynomial& perturbation, FockCutoff cutoff, int nodes,
                           PairExponential& squeeze) {
  const FockState vacuum = FockState::vacuum(2, cutoff);
  const QuadratureRule rule = gauss_legendre_unit(nodes);
  FockState acc(2, cutoff);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double u = rule.nodes[i];
    const FockState forward = squeeze.apply(vacuum, 0, 1, u * r);
    const FockState kicked = perturbation.apply(forward);
    acc = acc + cplx(rule.weights[i]) * squeeze.apply(kicked, 0, 1, -u * r);
  }
  return squeeze.apply(acc, 0, 1, r);
}

}  // namespace

FockState duhamel_first_order(double r, const OperatorPolynomial& perturbation, FockCutoff cutoff, int nodes) {
  require(nodes >= 2, ErrorCode::QuadratureUnderResolved, "Duhamel rule needs at least two nodes");
  require_twin_beam_fits(r, cutoff);
  PairExponential squeeze(PairGenerator::Squeeze, cutoff);
  const FockState coarse = duhamel_integral(r, perturbation, cutoff, nodes, squeeze);
  const FockState fine = duhamel_integral(r, perturbation, cutoff, 2 * nodes, squeeze);
  const double scale = std::max(1.0, std::sqrt(fine.norm_squared()));
  require(std::sqrt((coarse - fine).norm_squared()) <= 1e-10 * scale, ErrorCode::QuadratureUnderResolved,
          "Duhamel integral changed under node doubling");
  return coarse;
}

FockState twb_prime_correction(double r, FockCutoff cutoff) {
  require_twin_beam_fits(r, cutoff);
  const auto sum = OperatorPolynomial::single(create(0)) + OperatorPolynomial::single(create(1));
  const OperatorPolynomial bracket = cplx(0.5) * (sum * sum) - OperatorPolynomial::identity();
  const FockState kicked = bracket.apply(FockState::vacuum(2, cutoff));
  PairExponential squeeze(PairGenerator::Squeeze, cutoff);
  return cplx(r) * squeeze.apply(kicked, 0, 1, r);
}

FockState build_twb_prime(const DeformationParams& params, FockCutoff cutoff) {
  const FockState twb = build_twb(SqueezeParams(params.r()), cutoff);
  if (params.epsilon() == 0.0 || params.r() == 0.0) return twb;
  return (twb + cplx(params.epsilon()) * twb_prime_correction(params.r(), cutoff)).normalized();
}

double conjugation_identity_deviation(double r, double u, FockCutoff cutoff, int max_occupation) {
  require(max_occupation >= 0 && max_occupation <= cutoff.n_max(), ErrorCode::InvalidArgument,
          "max_occupation must lie inside the cutoff");
  PairExponential squeeze(PairGenerator::Squeeze, cutoff);
  const double c = std::cosh(r * u);
  const double s = std::sinh(r * u);
  double worst = 0.0;
  for (int n1 = 0; n1 <= max_occupation; ++n1) {
    for (int n2 = 0; n2 <= max_occupation; ++n2) {
      const std::array<int, 2> occ{n1, n2};
      const FockState basis = FockState::basis(cutoff, occ);
      const FockState lhs =
          squeeze.apply(apply_ladder(squeeze.apply(basis, 0, 1, u * r), annihilate(0)), 0, 1, -u * r);
      const FockState rhs = cplx(c) * apply_ladder(basis, annihilate(0)) + cplx(s) * apply_ladder(basis, create(1));
      worst = std::max(worst, max_abs_difference(lhs, rhs));
    }
  }
  return worst;
}

}  // namespace holosim
