#pragma once

#include <vector>

namespace holosim {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule for the standard normal density: sum w_i f(x_i)
/// approximates E[f(X)], X ~ N(0, 1). Exact for polynomials of degree < 2n.
QuadratureRule gauss_hermite_normal(int n);

/// Gauss-Legendre rule on [0, 1].
QuadratureRule gauss_legendre_unit(int n);

/// Generalized Laguerre polynomial L_n^{(k)}(x) for integer k >= 0.
double laguerre(int n, int k, double x);

}  // namespace holosim
