#pragma once

// Two-mode Gaussian backend. Quadratures: a_k = x_k + i y_k with
// [x_k, y_k] = i/2, so the vacuum has <x^2> = 1/4. Phase-space coordinates
// are ordered (x1, y1, x2, y2).

#include <span>
#include <vector>

#include <Eigen/Core>

#include "holosim/environment.hpp"
#include "holosim/fock.hpp"
#include "holosim/ordering.hpp"

namespace holosim {

/// Widths Sigma_+ and Sigma_- of the twin-beam family: var(x1 + x2) =
/// var(y1 - y2) = Sigma_+/2 and var(y1 + y2) = var(x1 - x2) = Sigma_-/2.
/// The vacuum has Sigma_+ = Sigma_- = 1.
class TwoModeGaussianState {
 public:
  TwoModeGaussianState(double sigma_plus, double sigma_minus, const Eigen::Vector4d& mean = Eigen::Vector4d::Zero());

  /// Sigma_pm = e^{pm 2r}. Throws UnsupportedPhase for theta != 0.
  static TwoModeGaussianState from_squeezing(const SqueezeParams& params);

  double sigma_plus() const { return sigma_plus_; }
  double sigma_minus() const { return sigma_minus_; }
  const Eigen::Vector4d& mean() const { return mean_; }

  /// Symmetric (Wigner) covariance of (x1, y1, x2, y2).
  Eigen::Matrix4d covariance() const;

 private:
  double sigma_plus_;
  double sigma_minus_;
  Eigen::Vector4d mean_;
};

/// Closed-form bath evolution of the widths:
///   Sigma(t) = (M + 1/2)(1 - e^{-lambda t})/2 + Sigma(0) e^{-lambda t}.
/// Means relax with the drift, as e^{-lambda t/2}.
TwoModeGaussianState evolve(const TwoModeGaussianState& state, const EnvironmentParams& env, double t);
TwoModeGaussianState evolve(const TwoModeGaussianState& state, double M, double lambda_t);

/// Expectation of a ladder word on modes 0 and 1 in the order written,
/// from ordered two-point functions (Gaussian moment theorem with means).
cplx ordered_moment(const TwoModeGaussianState& state, std::span<const Ladder> word);

/// Tr[rho (a1^dag)^n1 a1^m1 (a2^dag)^n2 a2^m2].
cplx isserlis_moment(const TwoModeGaussianState& state, const WignerMonomial& monomial);
cplx isserlis_moment(const TwoModeGaussianState& state, const NormalOrderedPolynomial& poly);

struct QuadratureSpec {
  int nodes_per_axis = 48;
};

/// Same moment by integrating the Laguerre kernel against the Wigner
/// function with a tensor Gauss-Hermite rule along the covariance axes.
/// Throws QuadratureUnderResolved if the rule cannot integrate the kernel
/// exactly or has fewer than 12 nodes per axis.
cplx glauber_moment(const TwoModeGaussianState& state, const WignerMonomial& monomial, const QuadratureSpec& quad = {});

/// Batch form; one pass over the grid for all monomials.
std::vector<cplx> glauber_moments(const TwoModeGaussianState& state, std::span<const WignerMonomial> monomials,
                                  const QuadratureSpec& quad = {});

cplx glauber_moment(const TwoModeGaussianState& state, const NormalOrderedPolynomial& poly, const QuadratureSpec& quad = {});

}  // namespace holosim
