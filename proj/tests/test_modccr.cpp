#include <doctest.h>

#include <array>
#include <cmath>

#include "holosim/modccr.hpp"
#include "holosim/ordering.hpp"
#include "holosim/pair_exponential.hpp"

using namespace holosim;

namespace {

double norm(const FockState& s) { return std::sqrt(s.norm_squared()); }

}  // namespace

TEST_CASE("deformation parameters") {
  CHECK_NOTHROW(DeformationParams(0.2, 1.0));
  CHECK_NOTHROW(DeformationParams(-0.05, 0.0));
  CHECK_THROWS_AS(DeformationParams(0.21, 1.0), Error);
  CHECK_THROWS_AS(DeformationParams(0.1, -0.1), Error);
}

TEST_CASE("auxiliary map coefficients") {
  const double eps = 0.1;
  const auto c = AuxiliaryModeMap(eps).coefficients();
  const double s = std::sqrt(1.1);
  CHECK(c(0, 0) == doctest::Approx(s));
  CHECK(c(0, 2) == doctest::Approx(eps / (2 * s)));
  CHECK(c(0, 3) == doctest::Approx(-eps / (2 * s)));
  CHECK(c(1, 1) == doctest::Approx(eps / (2 * s)));
  CHECK(c(1, 2) == doctest::Approx(s));
  CHECK(c(1, 3) == 0.0);
}

TEST_CASE("deformed commutators on the guarded subspace") {
  CHECK(deformed_commutator_check(AuxiliaryModeMap(0.0), FockCutoff(8)).max() < 1e-14);
  for (double eps : {0.01, 0.05, 0.1, -0.1}) {
    const auto report = deformed_commutator_check(AuxiliaryModeMap(eps), FockCutoff(20));
    CHECK(report.max() < 1e-10);
  }
  CHECK_THROWS_AS(deformed_commutator_check(AuxiliaryModeMap(0.1), FockCutoff(2)), Error);
}

TEST_CASE("commutator deviations appear at the truncation edge") {
  // the top level of a truncated space cannot hold [A, A^dag] = 1
  const FockCutoff cutoff(5);
  const AuxiliaryModeMap map(0.1);
  const OperatorPolynomial c = map.annihilator(0) * map.creator(0) - map.creator(0) * map.annihilator(0);
  const std::array<int, 2> top{5, 0};
  const FockState b = FockState::basis(cutoff, top);
  CHECK(max_abs_difference(c.apply(b), cplx(1.1) * b) > 1.0);
}

TEST_CASE("first-order generator matches the hand expansion") {
  const double r = 0.7;
  const auto exp = squeeze_generator_expansion(r);
  // r/2 [(A1^dag + A2^dag)^2 - (A1 + A2)^2] - r
  const auto up = OperatorPolynomial::single(create(0)) + OperatorPolynomial::single(create(1));
  const auto down = OperatorPolynomial::single(annihilate(0)) + OperatorPolynomial::single(annihilate(1));
  const OperatorPolynomial expected = cplx(r / 2) * (up * up - down * down) - OperatorPolynomial::identity(r);
  const auto lhs = normal_order(exp.first);
  const auto rhs = normal_order(expected);
  REQUIRE(lhs.terms().size() == rhs.terms().size());
  for (const auto& [m, c] : rhs.terms()) {
    REQUIRE(lhs.terms().count(m) == 1);
    CHECK(std::abs(lhs.terms().at(m) - c) < 1e-14);
  }
}

TEST_CASE("squeeze exponential reproduces the twin beam") {
  // the truncated exponential and the renormalized closed form differ by
  // the top amplitude, ~tanh(0.9)^n_max
  const FockCutoff cutoff(80);
  PairExponential sq(PairGenerator::Squeeze, cutoff);
  for (double r : {0.3, 0.9}) {
    const FockState s = sq.apply(FockState::vacuum(2, cutoff), 0, 1, r);
    CHECK(max_abs_difference(s, build_twb(SqueezeParams(r), cutoff)) < 1e-10);
  }
}

TEST_CASE("Duhamel with zero perturbation") {
  const FockState v = duhamel_first_order(0.5, OperatorPolynomial{}, FockCutoff(40));
  CHECK(v.norm_squared() == 0.0);
}

TEST_CASE("Duhamel with the generator itself differentiates the twin beam") {
  const double r = 0.6;
  const FockCutoff cutoff(90);
  const FockState v = duhamel_first_order(r, squeeze_generator_expansion(r).zeroth, cutoff);
  const double h = 1e-4;
  const FockState plus = build_twb(SqueezeParams(r + h), cutoff);
  const FockState minus = build_twb(SqueezeParams(r - h), cutoff);
  const FockState fd = cplx(r / (2 * h)) * (plus - minus);
  CHECK(max_abs_difference(v, fd) < 1e-6);
}

TEST_CASE("conjugation identity") {
  for (double u : {0.25, 0.5, 1.0}) {
    CHECK(conjugation_identity_deviation(0.8, u, FockCutoff(110), 4) < 1e-9);
  }
}

TEST_CASE("closed-form correction agrees with the Duhamel integral") {
  for (double r : {0.4, 0.8, 1.2}) {
    const FockCutoff cutoff(twin_beam_cutoff(r, 1e-20).n_max() + 4);
    const FockState duhamel = duhamel_first_order(r, squeeze_generator_expansion(r).first, cutoff);
    const FockState closed = twb_prime_correction(r, cutoff);
    CHECK(max_abs_difference(duhamel, closed) < 1e-8);
  }
}

TEST_CASE("perturbed twin beam") {
  const FockCutoff cutoff(30);
  const FockState twb = build_twb(SqueezeParams(0.8), cutoff);
  CHECK(max_abs_difference(build_twb_prime(DeformationParams(0.0, 0.8), cutoff), twb) == 0.0);

  const FockState at_zero = build_twb_prime(DeformationParams(0.1, 0.0), cutoff);
  CHECK(std::abs(at_zero.amplitude({0, 0})) == doctest::Approx(1.0));

  const FockState p = build_twb_prime(DeformationParams(0.05, 0.8), cutoff);
  CHECK(p.norm_squared() == doctest::Approx(1.0).epsilon(1e-13));
  const double overlap = std::norm(inner(twb, p));
  CHECK(1.0 - overlap < 4 * 0.05 * 0.05);
  CHECK(1.0 - overlap > 0.0);
}

TEST_CASE("correction lives on squeezed images of the low two-photon states") {
  const double r = 0.7;
  const FockCutoff cutoff(twin_beam_cutoff(r, 1e-22).n_max());
  PairExponential sq(PairGenerator::Squeeze, cutoff);
  const FockState unsqueezed = sq.apply(twb_prime_correction(r, cutoff), 0, 1, -r);
  double outside = 0.0;
  for (std::size_t i = 0; i < unsqueezed.size(); ++i) {
    const int n1 = unsqueezed.occupation(i, 0);
    const int n2 = unsqueezed.occupation(i, 1);
    const bool inside = (n1 + n2 == 2) || (n1 == 0 && n2 == 0);
    if (!inside) outside += std::norm(unsqueezed.amplitudes()[i]);
  }
  CHECK(std::sqrt(outside) < 1e-9);
  // r { (|2,0> + |0,2>)/sqrt(2) + |1,1> - |0,0> }
  CHECK(unsqueezed.amplitude({1, 1}).real() == doctest::Approx(r).epsilon(1e-9));
  CHECK(unsqueezed.amplitude({2, 0}).real() == doctest::Approx(r / std::sqrt(2.0)).epsilon(1e-9));
  CHECK(unsqueezed.amplitude({0, 0}).real() == doctest::Approx(-r).epsilon(1e-9));
}

TEST_CASE("perturbed twin beam is first order in epsilon") {
  const double r = 0.8;
  const FockCutoff cutoff(40);
  const FockState twb = build_twb(SqueezeParams(r), cutoff);
  const FockState c = twb_prime_correction(r, cutoff);
  // <TWB|c> = -r, so renormalization already acts at first order; the
  // slope of the normalized family is c projected off the twin beam
  CHECK(inner(twb, c).real() == doctest::Approx(-r).epsilon(1e-9));
  const FockState slope = c - inner(twb, c) * twb;
  auto residual = [&](double eps) {
    return norm(build_twb_prime(DeformationParams(eps, r), cutoff) - twb - cplx(eps) * slope);
  };
  const double r1 = residual(0.02);
  const double r2 = residual(0.04);
  const double r3 = residual(0.08);
  CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(0.1));
  CHECK(r3 / r2 == doctest::Approx(4.0).epsilon(0.1));
}
