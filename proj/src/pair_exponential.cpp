#include "holosim/pair_exponential.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace holosim {

PairExponential::PairExponential(PairGenerator kind, FockCutoff cutoff) : kind_(kind), cutoff_(cutoff) {}

PairExponential::Block& PairExponential::block(int label) {
  auto it = cache_.find(label);
  if (it != cache_.end()) return it->second;
  const int n = cutoff_.n_max();
  Block b;
  if (kind_ == PairGenerator::Exchange) {
    // label = n_a + n_b
    for (int k = std::max(0, label - n); k <= std::min(label, n); ++k) {
      b.first.push_back(k);
      b.second.push_back(label - k);
    }
  } else {
    // label = n_a - n_b
    for (int j = std::max(0, -label); j <= std::min(n, n - label); ++j) {
      b.first.push_back(j + label);
      b.second.push_back(j);
    }
  }
  return cache_.emplace(label, std::move(b)).first->second;
}

void PairExponential::decompose(Block& b) const {
  if (b.decomposed) return;
  const auto size = static_cast<Eigen::Index>(b.first.size());
  // H = i G, G real antisymmetric tridiagonal. Lower entry G(i+1, i):
  //   exchange: a^dag b |k, N-k>  = sqrt((k+1)(N-k))   |k+1, N-k-1>
  //   squeeze:  a^dag b^dag |j+d, j> = sqrt((j+d+1)(j+1)) |j+d+1, j+1>
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(size, size);
  for (Eigen::Index i = 0; i + 1 < size; ++i) {
    const double na = b.first[static_cast<std::size_t>(i)];
    const double nb = b.second[static_cast<std::size_t>(i)];
    const double g = kind_ == PairGenerator::Exchange ? std::sqrt((na + 1.0) * nb) : std::sqrt((na + 1.0) * (nb + 1.0));
    h(i + 1, i) = cplx(0.0, g);
    h(i, i + 1) = cplx(0.0, -g);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  b.vectors = eig.eigenvectors();
  b.values = eig.eigenvalues();
  b.decomposed = true;
}

FockState PairExponential::apply(const FockState& state, int mode_a, int mode_b, double s) {
  state.check_mode(mode_a);
  state.check_mode(mode_b);
  require(mode_a != mode_b, ErrorCode::InvalidModeIndex, "pair generator needs two distinct modes");
  require(state.cutoff() == cutoff_, ErrorCode::InvalidArgument, "pair exponential built for a different cutoff");

  const int n = cutoff_.n_max();
  const auto stride_a = state.stride(mode_a);
  const auto stride_b = state.stride(mode_b);
  std::vector<std::size_t> bases;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.occupation(i, mode_a) == 0 && state.occupation(i, mode_b) == 0) bases.push_back(i);
  }

  const int lo = kind_ == PairGenerator::Exchange ? 0 : -n;
  const int hi = kind_ == PairGenerator::Exchange ? 2 * n : n;
  FockState out(state.modes(), state.cutoff(), std::vector<cplx>(state.size()), state.tail_mass());
  auto src = state.amplitudes();
  auto dst = out.amplitudes();

  for (int label = lo; label <= hi; ++label) {
    std::optional<Eigen::MatrixXcd> unitary;
    Eigen::VectorXcd v;
    Block& blk_ref = block(label);
    const Block* blk = &blk_ref;
    for (std::size_t base : bases) {
      auto offset = [&](std::size_t k) {
        return base + static_cast<std::size_t>(blk->first[k]) * stride_a + static_cast<std::size_t>(blk->second[k]) * stride_b;
      };
      const auto size = static_cast<Eigen::Index>(blk->first.size());
      v.resize(size);
      bool any = false;
      for (Eigen::Index k = 0; k < size; ++k) {
        v(k) = src[offset(static_cast<std::size_t>(k))];
        any = any || v(k) != cplx{};
      }
      if (!any) continue;
      if (!unitary) {
        decompose(blk_ref);
        const Eigen::VectorXcd phases =
            blk->values.unaryExpr([s](double lam) { return std::polar(1.0, -s * lam); });
        unitary = blk->vectors * phases.asDiagonal() * blk->vectors.adjoint();
      }
      const Eigen::VectorXcd w = (*unitary) * v;
      for (Eigen::Index k = 0; k < size; ++k) dst[offset(static_cast<std::size_t>(k))] = w(k);
    }
  }
  return out;
}

}  // namespace holosim
