#include "holosim/gaussian.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "holosim/quadrature.hpp"

namespace holosim {

TwoModeGaussianState::TwoModeGaussianState(double sigma_plus, double sigma_minus, const Eigen::Vector4d& mean)
    : sigma_plus_(sigma_plus), sigma_minus_(sigma_minus), mean_(mean) {
  require(sigma_plus > 0.0 && sigma_minus > 0.0, ErrorCode::InvalidArgument, "Gaussian widths must be positive");
}

TwoModeGaussianState TwoModeGaussianState::from_squeezing(const SqueezeParams& params) {
  require(params.theta() == 0.0, ErrorCode::UnsupportedPhase, "only real squeezing is supported");
  return TwoModeGaussianState(std::exp(2.0 * params.r()), std::exp(-2.0 * params.r()));
}

Eigen::Matrix4d TwoModeGaussianState::covariance() const {
  const double v = (sigma_plus_ + sigma_minus_) / 8.0;
  const double c = (sigma_plus_ - sigma_minus_) / 8.0;
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  s.diagonal().setConstant(v);
  s(0, 2) = s(2, 0) = c;
  s(1, 3) = s(3, 1) = -c;
  return s;
}

TwoModeGaussianState evolve(const TwoModeGaussianState& state, double M, double lambda_t) {
  require(M >= 0.0 && lambda_t >= 0.0, ErrorCode::NegativeParameter, "M and lambda*t must be non-negative");
  const double decay = std::exp(-lambda_t);
  const double bath = 0.5 * (M + 0.5) * (1.0 - decay);
  return TwoModeGaussianState(bath + state.sigma_plus() * decay, bath + state.sigma_minus() * decay,
                              state.mean() * std::exp(-0.5 * lambda_t));
}

TwoModeGaussianState evolve(const TwoModeGaussianState& state, const EnvironmentParams& env, double t) {
  require(t >= 0.0, ErrorCode::NegativeParameter, "evolution time must be non-negative");
  return evolve(state, env.M(), env.lambda() * t);
}

namespace {

using Vec4c = Eigen::Matrix<cplx, 4, 1>;

Vec4c ladder_coefficients(const Ladder& op) {
  require(op.mode == 0 || op.mode == 1, ErrorCode::InvalidModeIndex, "Gaussian backend has modes 0 and 1");
  Vec4c c = Vec4c::Zero();
  c(2 * op.mode) = 1.0;
  c(2 * op.mode + 1) = op.dagger ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
  return c;
}

}  // namespace

cplx ordered_moment(const TwoModeGaussianState& state, std::span<const Ladder> word) {
  const int k = static_cast<int>(word.size());
  require(k <= kMaxMonomialDegree, ErrorCode::DegreeTooHigh, "moment degree above 8");
  if (k == 0) return 1.0;

  // <xi_p xi_q> = S_pq + (i/4) Omega_pq
  Eigen::Matrix4cd two_point = state.covariance().cast<cplx>();
  for (int m = 0; m < 2; ++m) {
    two_point(2 * m, 2 * m + 1) += cplx(0.0, 0.25);
    two_point(2 * m + 1, 2 * m) -= cplx(0.0, 0.25);
  }
  std::vector<Vec4c> coeff;
  std::vector<cplx> means;
  for (const Ladder& op : word) {
    coeff.push_back(ladder_coefficients(op));
    means.push_back((coeff.back().transpose() * state.mean().cast<cplx>())(0));
  }

  std::vector<std::vector<cplx>> g(static_cast<std::size_t>(k), std::vector<cplx>(static_cast<std::size_t>(k)));
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      g[i][j] = (coeff[i].transpose() * two_point * coeff[j])(0);
    }
  }

  // memo over the set of not-yet-contracted factors
  const unsigned full = (1u << k) - 1u;
  std::vector<cplx> memo(full + 1u);
  std::vector<bool> known(full + 1u, false);
  memo[0] = 1.0;
  known[0] = true;
  auto solve = [&](auto&& self, unsigned mask) -> cplx {
    if (known[mask]) return memo[mask];
    const int i = std::countr_zero(mask);
    const unsigned rest = mask & ~(1u << i);
    cplx acc = means[i] == cplx{} ? cplx{} : means[i] * self(self, rest);
    for (int j = i + 1; j < k; ++j) {
      if (rest & (1u << j)) acc += g[i][j] * self(self, rest & ~(1u << j));
    }
    known[mask] = true;
    return memo[mask] = acc;
  };
  return solve(solve, full);
}

cplx isserlis_moment(const TwoModeGaussianState& state, const WignerMonomial& monomial) {
  monomial.validate();
  return ordered_moment(state, monomial.word());
}

cplx isserlis_moment(const TwoModeGaussianState& state, const NormalOrderedPolynomial& poly) {
  cplx acc{};
  for (const auto& [m, c] : poly.terms()) acc += c * isserlis_moment(state, m);
  return acc;
}

namespace {

// Per-mode Laguerre kernel with j = min(n, m), k = |m - n|:
//   j! (-1/2)^j w^k L_j^{(k)}(2|z|^2),  w = z if m >= n else conj(z).
struct KernelKey {
  int j;
  int k;
  bool conj;
  friend auto operator<=>(const KernelKey&, const KernelKey&) = default;
};

KernelKey kernel_key(int n, int m) { return {std::min(n, m), std::abs(m - n), m < n}; }

cplx kernel(const KernelKey& key, cplx z) {
  const double prefactor = std::tgamma(key.j + 1.0) * std::pow(-0.5, key.j);
  const cplx w = key.conj ? std::conj(z) : z;
  cplx power = 1.0;
  for (int i = 0; i < key.k; ++i) power *= w;
  return prefactor * power * laguerre(key.j, key.k, 2.0 * std::norm(z));
}

}  // namespace

std::vector<cplx> glauber_moments(const TwoModeGaussianState& state, std::span<const WignerMonomial> monomials,
                                  const QuadratureSpec& quad) {
  int max_degree = 0;
  for (const auto& m : monomials) {
    m.validate();
    max_degree = std::max(max_degree, m.degree());
  }
  const int n = quad.nodes_per_axis;
  require(n >= 12 && 2 * n >= max_degree + 2, ErrorCode::QuadratureUnderResolved,
          "quadrature rule too coarse for the requested moments");

  // Distinct kernels per mode, so each grid point evaluates each once.
  std::map<KernelKey, int> index1;
  std::map<KernelKey, int> index2;
  std::vector<std::pair<int, int>> uses;
  for (const auto& m : monomials) {
    const auto k1 = index1.emplace(kernel_key(m.n1, m.m1), static_cast<int>(index1.size())).first->second;
    const auto k2 = index2.emplace(kernel_key(m.n2, m.m2), static_cast<int>(index2.size())).first->second;
    uses.emplace_back(k1, k2);
  }
  std::vector<KernelKey> keys1(index1.size());
  std::vector<KernelKey> keys2(index2.size());
  for (const auto& [key, i] : index1) keys1[static_cast<std::size_t>(i)] = key;
  for (const auto& [key, i] : index2) keys2[static_cast<std::size_t>(i)] = key;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> eig(state.covariance());
  const Eigen::Matrix4d transform = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  const QuadratureRule rule = gauss_hermite_normal(n);

  std::vector<cplx> sums(monomials.size());
  std::vector<cplx> f1(keys1.size());
  std::vector<cplx> f2(keys2.size());
  Eigen::Vector4d eta;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        const double wabc = rule.weights[a] * rule.weights[b] * rule.weights[c];
        for (int d = 0; d < n; ++d) {
          eta << rule.nodes[a], rule.nodes[b], rule.nodes[c], rule.nodes[d];
          const Eigen::Vector4d xi = state.mean() + transform * eta;
          const double w = wabc * rule.weights[d];
          const cplx z1(xi(0), xi(1));
          const cplx z2(xi(2), xi(3));
          for (std::size_t i = 0; i < keys1.size(); ++i) f1[i] = kernel(keys1[i], z1);
          for (std::size_t i = 0; i < keys2.size(); ++i) f2[i] = kernel(keys2[i], z2);
          for (std::size_t i = 0; i < uses.size(); ++i) {
            sums[i] += w * f1[static_cast<std::size_t>(uses[i].first)] * f2[static_cast<std::size_t>(uses[i].second)];
          }
        }
      }
    }
  }
  return sums;
}

cplx glauber_moment(const TwoModeGaussianState& state, const WignerMonomial& monomial, const QuadratureSpec& quad) {
  const std::array<WignerMonomial, 1> one{monomial};
  return glauber_moments(state, one, quad)[0];
}

cplx glauber_moment(const TwoModeGaussianState& state, const NormalOrderedPolynomial& poly, const QuadratureSpec& quad) {
  std::vector<WignerMonomial> monomials;
  std::vector<cplx> coefficients;
  for (const auto& [m, c] : poly.terms()) {
    monomials.push_back(m);
    coefficients.push_back(c);
  }
  const std::vector<cplx> values = glauber_moments(state, monomials, quad);
  cplx acc{};
  for (std::size_t i = 0; i < values.size(); ++i) acc += coefficients[i] * values[i];
  return acc;
}

}  // namespace holosim
