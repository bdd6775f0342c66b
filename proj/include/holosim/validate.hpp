#pragma once

// Invariant suite behind `holosim validate`. Each check reports instead of
// throwing; a library error inside a check marks it failed with the message
// in `detail`.

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "holosim/config.hpp"
#include "holosim/gaussian.hpp"
#include "holosim/sweep.hpp"

namespace holosim {

struct ValidationCheck {
  std::string name;
  double tolerance;
  double observed;  // NaN when the check threw
  bool passed;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

/// Negative controls for the suite itself.
enum class Fault { None, EvolveSign };
Fault parse_fault(std::string_view name);

/// (state, M, lambda t) -> evolved state
using EvolveFn = std::function<TwoModeGaussianState(const TwoModeGaussianState&, double, double)>;

/// The width evolution with the sign of the decay exponent on the initial
/// widths flipped. Agrees with evolve at t = 0 only.
TwoModeGaussianState evolve_wrong_sign(const TwoModeGaussianState& state, double M, double lambda_t);

ValidationReport run_validate(const RunConfig& config, Fault fault, int workers);

SweepResult to_sweep_result(const ValidationReport& report, Fault fault);

}  // namespace holosim
