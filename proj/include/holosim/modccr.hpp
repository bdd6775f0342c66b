#pragma once

// Constant deformation of the two-mode commutators, realized on auxiliary
// canonical modes A1 (mode 0) and A2 (mode 1):
//   a1 = sqrt(1+eps) A1 + eps/(2 sqrt(1+eps)) (A2 - A2^dag)
//   a2 = sqrt(1+eps) A2 + eps/(2 sqrt(1+eps)) (A1 + A1^dag)
// giving [a1, a2] = [a1, a2^dag] = eps and [a_i, a_i^dag] = 1 + eps.

#include <Eigen/Core>

#include "holosim/fock.hpp"

namespace holosim {

inline constexpr double kMaxDeformation = 0.2;
inline constexpr int kDuhamelNodes = 16;

class DeformationParams {
 public:
  /// Throws InvalidArgument for |eps| > 0.2 or r < 0.
  DeformationParams(double epsilon, double r);

  double epsilon() const { return epsilon_; }
  double r() const { return r_; }

 private:
  double epsilon_;
  double r_;
};

class AuxiliaryModeMap {
 public:
  explicit AuxiliaryModeMap(double epsilon);

  double epsilon() const { return epsilon_; }

  /// Rows a1, a2; columns A1, A1^dag, A2, A2^dag.
  Eigen::Matrix<double, 2, 4> coefficients() const;

  /// a_{i+1} or its adjoint as a polynomial in the auxiliary modes, i in {0, 1}.
  OperatorPolynomial annihilator(int i) const;
  OperatorPolynomial creator(int i) const;

  /// d a_i / d eps at eps = 0.
  static OperatorPolynomial annihilator_slope(int i);

 private:
  static OperatorPolynomial combine(const Eigen::Matrix<double, 1, 4>& row);

  double epsilon_;
};

struct CommutatorReport {
  double a1_a2;          // |[a1, a2] - eps|
  double a1_a2_dagger;   // |[a1, a2^dag] - eps|
  double a1_a1_dagger;   // |[a1, a1^dag] - (1 + eps)|
  double a2_a2_dagger;   // |[a2, a2^dag] - (1 + eps)|

  double max() const;
};

/// Largest deviation of each commutator from its target on basis states
/// with both occupations <= n_max - 2. Throws CutoffTooSmall for n_max < 3.
CommutatorReport deformed_commutator_check(const AuxiliaryModeMap& map, FockCutoff cutoff);

struct GeneratorExpansion {
  OperatorPolynomial zeroth;  // r (A1^dag A2^dag - A1 A2)
  OperatorPolynomial first;   // d/d eps of r (a1^dag a2^dag - a1 a2) at eps = 0
};

/// Expands r (a1^dag a2^dag - a1 a2), products kept in the order written.
GeneratorExpansion squeeze_generator_expansion(double r);

/// e^{A} int_0^1 e^{-uA} B e^{uA} du |0>, A = r (A1^dag A2^dag - A1 A2),
/// with an n-node Gauss-Legendre rule in u. The rule is re-run with 2n
/// nodes and QuadratureUnderResolved is thrown if the two disagree beyond
/// 1e-10 relative. Throws CutoffTooSmall if the twin beam at r leaks more
/// than the two-mode tail tolerance.
FockState duhamel_first_order(double r, const OperatorPolynomial& perturbation, FockCutoff cutoff,
                              int nodes = kDuhamelNodes);

/// r e^{A} { (A1^dag + A2^dag)^2 / 2 - 1 } |0>, the coefficient of eps in
/// the perturbed twin beam (not normalized).
FockState twb_prime_correction(double r, FockCutoff cutoff);

/// Twin beam plus eps times the correction, renormalized.
FockState build_twb_prime(const DeformationParams& params, FockCutoff cutoff);

/// Largest |(e^{-uA} A1 e^{uA} - cosh(ru) A1 - sinh(ru) A2^dag)|n1, n2>|
/// over basis states with n1, n2 <= max_occupation.
double conjugation_identity_deviation(double r, double u, FockCutoff cutoff, int max_occupation);

}  // namespace holosim
