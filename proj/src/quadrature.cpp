#include "holosim/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "holosim/error.hpp"

namespace holosim {

namespace {

// Golub-Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
// mu0 times the squared first components of the eigenvectors.
QuadratureRule golub_welsch(const Eigen::VectorXd& off_diagonal, int n, double mu0) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    jacobi(i, i + 1) = off_diagonal(i);
    jacobi(i + 1, i) = off_diagonal(i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double v = eig.eigenvectors()(0, i);
    rule.nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    rule.weights[static_cast<std::size_t>(i)] = mu0 * v * v;
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_hermite_normal(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "Gauss-Hermite rule needs at least one node");
  // Probabilists' Hermite recurrence: x He_k = He_{k+1} + k He_{k-1}.
  Eigen::VectorXd b(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) b(i) = std::sqrt(static_cast<double>(i + 1));
  return golub_welsch(b, n, 1.0);
}

QuadratureRule gauss_legendre_unit(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "Gauss-Legendre rule needs at least one node");
  Eigen::VectorXd b(std::max(n - 1, 0));
  for (int i = 0; i + 1 < n; ++i) {
    const double k = i + 1;
    b(i) = k / std::sqrt(4.0 * k * k - 1.0);
  }
  QuadratureRule rule = golub_welsch(b, n, 2.0);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    rule.nodes[i] = 0.5 * (rule.nodes[i] + 1.0);
    rule.weights[i] *= 0.5;
  }
  return rule;
}

double laguerre(int n, int k, double x) {
  require(n >= 0 && k >= 0, ErrorCode::InvalidArgument, "Laguerre indices must be non-negative");
  return std::assoc_laguerre(static_cast<unsigned>(n), static_cast<unsigned>(k), x);
}

}  // namespace holosim
