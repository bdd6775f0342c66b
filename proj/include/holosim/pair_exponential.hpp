#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "holosim/fock.hpp"

namespace holosim {

/// Quadratic two-mode generators that are tridiagonal within invariant
/// blocks: the exchange generator a^dag b - b^dag a conserves n_a + n_b, the
/// squeeze generator a^dag b^dag - a b conserves n_a - n_b.
enum class PairGenerator { Exchange, Squeeze };

/// exp(s G) on the truncated space. G is projected onto the truncated
/// space block by block, so the result is exactly unitary there and exact
/// for blocks that fit inside the cutoff. Block eigendecompositions are
/// computed on first use and cached in the instance.
class PairExponential {
 public:
  PairExponential(PairGenerator kind, FockCutoff cutoff);

  PairGenerator kind() const { return kind_; }
  const FockCutoff& cutoff() const { return cutoff_; }

  FockState apply(const FockState& state, int mode_a, int mode_b, double s);

 private:
  struct Block {
    std::vector<int> first;   // occupation of mode a per basis vector
    std::vector<int> second;  // occupation of mode b per basis vector
    bool decomposed = false;
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;   // eigenvalues of i G
  };

  Block& block(int label);
  void decompose(Block& b) const;

  PairGenerator kind_;
  FockCutoff cutoff_;
  std::map<int, Block> cache_;
};

}  // namespace holosim
