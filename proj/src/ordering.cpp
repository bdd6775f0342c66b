#include "holosim/ordering.hpp"

#include <algorithm>
#include <utility>

namespace holosim {

void WignerMonomial::validate() const {
  require(n1 >= 0 && m1 >= 0 && n2 >= 0 && m2 >= 0, ErrorCode::InvalidArgument, "monomial powers must be non-negative");
  require(degree() <= kMaxMonomialDegree, ErrorCode::DegreeTooHigh, "monomial degree above 8");
}

Monomial WignerMonomial::word() const {
  Monomial w;
  w.insert(w.end(), static_cast<std::size_t>(n1), create(0));
  w.insert(w.end(), static_cast<std::size_t>(m1), annihilate(0));
  w.insert(w.end(), static_cast<std::size_t>(n2), create(1));
  w.insert(w.end(), static_cast<std::size_t>(m2), annihilate(1));
  return w;
}

void NormalOrderedPolynomial::add(const WignerMonomial& m, cplx c) {
  if (c == cplx{}) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == cplx{}) terms_.erase(it);
  }
}

NormalOrderedPolynomial& NormalOrderedPolynomial::operator+=(const NormalOrderedPolynomial& other) {
  for (const auto& [m, c] : other.terms_) add(m, c);
  return *this;
}

NormalOrderedPolynomial& NormalOrderedPolynomial::operator*=(cplx s) {
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

int NormalOrderedPolynomial::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

namespace {

// Single mode: key (n, m) for (a^dag)^n a^m.
using SingleMode = std::map<std::pair<int, int>, double>;

SingleMode normal_order_single(std::span<const Ladder> word, int mode) {
  SingleMode acc{{{0, 0}, 1.0}};
  for (const Ladder& op : word) {
    if (op.mode != mode) continue;
    SingleMode next;
    for (const auto& [key, c] : acc) {
      const auto [n, m] = key;
      if (!op.dagger) {
        next[{n, m + 1}] += c;
      } else {
        // a^m a^dag = a^dag a^m + m a^{m-1}
        next[{n + 1, m}] += c;
        if (m > 0) next[{n, m - 1}] += c * m;
      }
    }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

NormalOrderedPolynomial normal_order(std::span<const Ladder> word) {
  for (const Ladder& op : word) {
    require(op.mode == 0 || op.mode == 1, ErrorCode::InvalidModeIndex, "normal ordering covers modes 0 and 1 only");
  }
  // Different modes commute, so each mode orders independently.
  const SingleMode first = normal_order_single(word, 0);
  const SingleMode second = normal_order_single(word, 1);
  NormalOrderedPolynomial out;
  for (const auto& [k1, c1] : first) {
    for (const auto& [k2, c2] : second) {
      out.add(WignerMonomial{k1.first, k1.second, k2.first, k2.second}, c1 * c2);
    }
  }
  return out;
}

NormalOrderedPolynomial normal_order(const OperatorPolynomial& poly) {
  NormalOrderedPolynomial out;
  for (const auto& term : poly.terms()) {
    NormalOrderedPolynomial part = normal_order(term.word);
    part *= term.coefficient;
    out += part;
  }
  return out;
}

NormalOrderedPolynomial number_difference_power(int p) {
  require(p >= 1 && p <= 4, ErrorCode::InvalidArgument, "number-difference power must be in 1..4");
  const OperatorPolynomial n1 = OperatorPolynomial::single(create(0)) * OperatorPolynomial::single(annihilate(0));
  const OperatorPolynomial n2 = OperatorPolynomial::single(create(1)) * OperatorPolynomial::single(annihilate(1));
  const OperatorPolynomial diff = n1 - n2;
  OperatorPolynomial acc = diff;
  for (int k = 1; k < p; ++k) acc = acc * diff;
  return normal_order(acc);
}

OperatorPolynomial quadrature_correlator() {
  const OperatorPolynomial x1 = OperatorPolynomial::single(create(0)) + OperatorPolynomial::single(annihilate(0));
  const OperatorPolynomial x2 = OperatorPolynomial::single(create(1)) + OperatorPolynomial::single(annihilate(1));
  return x1 * x2;
}

}  // namespace holosim
