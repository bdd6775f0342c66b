#pragma once

// Two-mode normal-ordering table. Words over the ladder operators of modes 0
// and 1 are rewritten as combinations of (a1^dag)^n1 a1^m1 (a2^dag)^n2 a2^m2.

#include <compare>
#include <map>
#include <span>

#include "holosim/fock.hpp"

namespace holosim {

struct WignerMonomial {
  int n1 = 0;
  int m1 = 0;
  int n2 = 0;
  int m2 = 0;

  int degree() const { return n1 + m1 + n2 + m2; }
  /// Throws DegreeTooHigh above kMaxMonomialDegree, InvalidArgument on negatives.
  void validate() const;
  /// Ladder word in the written order, modes 0 and 1.
  Monomial word() const;

  friend auto operator<=>(const WignerMonomial&, const WignerMonomial&) = default;
};

class NormalOrderedPolynomial {
 public:
  using Terms = std::map<WignerMonomial, cplx>;

  const Terms& terms() const { return terms_; }
  void add(const WignerMonomial& m, cplx c);

  NormalOrderedPolynomial& operator+=(const NormalOrderedPolynomial& other);
  NormalOrderedPolynomial& operator*=(cplx s);

  int max_degree() const;

 private:
  Terms terms_;
};

/// Normal-ordered form of an arbitrary word on modes 0 and 1.
NormalOrderedPolynomial normal_order(std::span<const Ladder> word);
NormalOrderedPolynomial normal_order(const OperatorPolynomial& poly);

/// (a1^dag a1 - a2^dag a2)^p, p in 1..4.
NormalOrderedPolynomial number_difference_power(int p);

/// (a1^dag + a1)(a2^dag + a2).
OperatorPolynomial quadrature_correlator();

}  // namespace holosim
