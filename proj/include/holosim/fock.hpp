#pragma once

// Truncated Fock-space engine. This is the brute-force oracle the analytic
// backends are checked against, so everything here favours exactness on the
// truncated space over speed.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

#include "holosim/error.hpp"

namespace holosim {

using cplx = std::complex<double>;

inline constexpr double kTwoModeTailTol = 1e-10;
inline constexpr double kFourModeTailTol = 1e-6;
inline constexpr int kMaxModes = 4;
inline constexpr int kMaxMonomialDegree = 8;

/// Maximum occupation per mode (inclusive).
class FockCutoff {
 public:
  explicit FockCutoff(int n_max);

  int n_max() const { return n_max_; }
  int dim() const { return n_max_ + 1; }

  friend bool operator==(const FockCutoff&, const FockCutoff&) = default;

 private:
  int n_max_;
};

/// Two-mode squeezing zeta = r e^{i theta}.
class SqueezeParams {
 public:
  explicit SqueezeParams(double r, double theta = 0.0);

  double r() const { return r_; }
  double theta() const { return theta_; }

 private:
  double r_;
  double theta_;
};

struct CoherentInput {
  cplx mu;
};

/// Interferometer phases and their central values.
class PhaseConfig {
 public:
  PhaseConfig(double phi1, double phi2, double phi1_0 = 0.0, double phi2_0 = 0.0);

  double phi1() const { return phi1_; }
  double phi2() const { return phi2_; }
  double phi1_0() const { return phi1_0_; }
  double phi2_0() const { return phi2_0_; }
  double delta1() const { return phi1_ - phi1_0_; }
  double delta2() const { return phi2_ - phi2_0_; }

  /// Phases set to their central values.
  PhaseConfig at_center() const { return PhaseConfig(phi1_0_, phi2_0_, phi1_0_, phi2_0_); }

 private:
  double phi1_, phi2_, phi1_0_, phi2_0_;
};

/// Complex amplitude tensor over occupations (n_0, ..., n_{m-1}), mode 0
/// varying slowest. Vectors that are not normalized (perturbative
/// corrections, intermediate operator images) are represented by the same
/// type; builders document whether their result is normalized.
class FockState {
 public:
  FockState(int modes, FockCutoff cutoff);
  FockState(int modes, FockCutoff cutoff, std::vector<cplx> amplitudes, double tail_mass = 0.0);

  static FockState basis(FockCutoff cutoff, std::span<const int> occupations);
  static FockState vacuum(int modes, FockCutoff cutoff);

  int modes() const { return modes_; }
  const FockCutoff& cutoff() const { return cutoff_; }
  std::size_t size() const { return amplitudes_.size(); }

  std::span<const cplx> amplitudes() const { return amplitudes_; }
  std::span<cplx> amplitudes() { return amplitudes_; }

  std::size_t index(std::span<const int> occupations) const;
  std::size_t stride(int mode) const { return strides_[static_cast<std::size_t>(mode)]; }
  int occupation(std::size_t flat, int mode) const;

  cplx amplitude(std::span<const int> occupations) const { return amplitudes_[index(occupations)]; }
  cplx amplitude(std::initializer_list<int> occupations) const;

  double norm_squared() const;

  /// Probability mass discarded by truncation when this state was built
  /// (the construction receipt). Zero for states not built from a closed form.
  double tail_mass() const { return tail_mass_; }

  /// Copy rescaled to unit norm; throws InvalidArgument for the zero vector.
  FockState normalized() const;

  void check_mode(int mode) const;

 private:
  int modes_;
  FockCutoff cutoff_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> amplitudes_;
  double tail_mass_ = 0.0;
};

FockState operator+(const FockState& a, const FockState& b);
FockState operator-(const FockState& a, const FockState& b);
FockState operator*(cplx scale, const FockState& s);

/// <a|b>, antilinear in the first argument.
cplx inner(const FockState& a, const FockState& b);

/// Largest |a_i - b_i| over the amplitude tensor.
double max_abs_difference(const FockState& a, const FockState& b);

// --- mode operators ---------------------------------------------------------

struct Ladder {
  int mode;
  bool dagger;

  friend bool operator==(const Ladder&, const Ladder&) = default;
  friend auto operator<=>(const Ladder&, const Ladder&) = default;
};

inline Ladder create(int mode) { return {mode, true}; }
inline Ladder annihilate(int mode) { return {mode, false}; }

/// Operator product in written order; the rightmost factor acts first.
using Monomial = std::vector<Ladder>;

/// a|n> = sqrt(n)|n-1>, a^dag|n> = sqrt(n+1)|n+1> with the image of the top
/// level dropped.
FockState apply_ladder(const FockState& state, Ladder op);
FockState apply_monomial(const FockState& state, std::span<const Ladder> word);

/// Exact truncated-space <psi| word |psi>. The product is evaluated in the
/// order given; no implicit reordering takes place.
cplx expectation(const FockState& state, std::span<const Ladder> word);

/// Finite linear combination of monomials.
class OperatorPolynomial {
 public:
  struct Term {
    cplx coefficient;
    Monomial word;
  };

  OperatorPolynomial() = default;
  static OperatorPolynomial identity(cplx scale = 1.0);
  static OperatorPolynomial single(Ladder op, cplx scale = 1.0);

  const std::vector<Term>& terms() const { return terms_; }
  void add(cplx coefficient, Monomial word);

  OperatorPolynomial& operator+=(const OperatorPolynomial& other);
  OperatorPolynomial& operator-=(const OperatorPolynomial& other);
  OperatorPolynomial& operator*=(cplx scale);

  friend OperatorPolynomial operator+(OperatorPolynomial a, const OperatorPolynomial& b) { return a += b; }
  friend OperatorPolynomial operator-(OperatorPolynomial a, const OperatorPolynomial& b) { return a -= b; }
  friend OperatorPolynomial operator*(cplx s, OperatorPolynomial a) { return a *= s; }
  /// Operator product (word concatenation).
  friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b);

  /// Formal adjoint: conjugated coefficients, reversed words with daggers flipped.
  OperatorPolynomial adjoint() const;

  FockState apply(const FockState& state) const;
  cplx expectation(const FockState& state) const;

 private:
  std::vector<Term> terms_;
};

// --- state construction -----------------------------------------------------

/// Smallest per-mode cutoff that keeps the twin-beam tail mass below tail_tol.
FockCutoff twin_beam_cutoff(double r, double tail_tol);

/// Two-mode squeezed vacuum, renormalized on the truncated space.
/// Throws CutoffTooSmall when the discarded mass exceeds tail_tol.
FockState build_twb(const SqueezeParams& params, FockCutoff cutoff, double tail_tol = kTwoModeTailTol);

/// Single-mode coherent state. Throws AmplitudeTooLarge if |mu|^2 > n_max/4.
FockState build_coherent(const CoherentInput& input, FockCutoff cutoff);

FockState tensor_product(const FockState& a, const FockState& b);

/// Result mode k is input mode order[k].
FockState permute_modes(const FockState& state, std::span<const int> order);

/// Four-mode interferometer input ordered (a1, b1, a2, b2) from a two-mode
/// a-port state (a1, a2) and single-mode b-port states.
FockState build_interferometer_input(const FockState& a_ports, const FockState& b1, const FockState& b2);

// --- beam splitter ----------------------------------------------------------

/// Unitary whose Heisenberg action is c = a cos(phi/2) + b sin(phi/2),
/// d = b cos(phi/2) - a sin(phi/2). Holds the cached generator
/// eigendecompositions for one cutoff; use one instance per thread.
class BeamSplitter {
 public:
  explicit BeamSplitter(FockCutoff cutoff);
  ~BeamSplitter();
  BeamSplitter(BeamSplitter&&) noexcept;
  BeamSplitter& operator=(BeamSplitter&&) noexcept;

  FockState apply(const FockState& state, int mode_a, int mode_b, double phi);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

FockState apply_beam_splitter(const FockState& state, int mode_a, int mode_b, double phi);

/// <(N_a - N_b)^p> for p in 1..4.
double number_difference_moment(const FockState& state, int p, int mode_a = 0, int mode_b = 1);

}  // namespace holosim
