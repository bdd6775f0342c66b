#include "holosim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "holosim/pair_exponential.hpp"

namespace holosim {

FockCutoff::FockCutoff(int n_max) : n_max_(n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "cutoff n_max must be >= 1, got " + std::to_string(n_max));
}

SqueezeParams::SqueezeParams(double r, double theta) : r_(r), theta_(theta) {
  require(std::isfinite(r) && r >= 0.0, ErrorCode::InvalidArgument, "squeezing r must be finite and >= 0");
  require(std::isfinite(theta) && theta >= 0.0 && theta < 2.0 * std::numbers::pi, ErrorCode::InvalidArgument,
          "squeezing phase must lie in [0, 2pi)");
}

PhaseConfig::PhaseConfig(double phi1, double phi2, double phi1_0, double phi2_0)
    : phi1_(phi1), phi2_(phi2), phi1_0_(phi1_0), phi2_0_(phi2_0) {
  require(std::isfinite(phi1) && std::isfinite(phi2) && std::isfinite(phi1_0) && std::isfinite(phi2_0),
          ErrorCode::InvalidArgument, "phases must be finite");
}

// --- FockState --------------------------------------------------------------

FockState::FockState(int modes, FockCutoff cutoff) : modes_(modes), cutoff_(cutoff) {
  require(modes >= 1 && modes <= kMaxModes, ErrorCode::InvalidArgument,
          "mode count must be in [1, " + std::to_string(kMaxModes) + "]");
  strides_.assign(static_cast<std::size_t>(modes), 1);
  const auto dim = static_cast<std::size_t>(cutoff.dim());
  for (int m = modes - 2; m >= 0; --m) strides_[m] = strides_[m + 1] * dim;
  amplitudes_.assign(strides_[0] * dim, cplx{});
}

FockState::FockState(int modes, FockCutoff cutoff, std::vector<cplx> amplitudes, double tail_mass)
    : FockState(modes, cutoff) {
  require(amplitudes.size() == amplitudes_.size(), ErrorCode::InvalidArgument,
          "amplitude tensor must have (n_max+1)^modes entries");
  amplitudes_ = std::move(amplitudes);
  tail_mass_ = tail_mass;
}

FockState FockState::basis(FockCutoff cutoff, std::span<const int> occupations) {
  FockState s(static_cast<int>(occupations.size()), cutoff);
  s.amplitudes_[s.index(occupations)] = 1.0;
  return s;
}

FockState FockState::vacuum(int modes, FockCutoff cutoff) {
  FockState s(modes, cutoff);
  s.amplitudes_[0] = 1.0;
  return s;
}

std::size_t FockState::index(std::span<const int> occupations) const {
  require(static_cast<int>(occupations.size()) == modes_, ErrorCode::InvalidModeIndex,
          "occupation tuple length does not match the mode count");
  std::size_t flat = 0;
  for (std::size_t m = 0; m < occupations.size(); ++m) {
    const int n = occupations[m];
    require(n >= 0 && n <= cutoff_.n_max(), ErrorCode::InvalidArgument, "occupation outside the cutoff");
    flat += static_cast<std::size_t>(n) * strides_[m];
  }
  return flat;
}

int FockState::occupation(std::size_t flat, int mode) const {
  return static_cast<int>((flat / strides_[static_cast<std::size_t>(mode)]) % static_cast<std::size_t>(cutoff_.dim()));
}

cplx FockState::amplitude(std::initializer_list<int> occupations) const {
  return amplitude(std::span<const int>(occupations.begin(), occupations.size()));
}

double FockState::norm_squared() const {
  double acc = 0.0;
  for (const cplx& a : amplitudes_) acc += std::norm(a);
  return acc;
}

FockState FockState::normalized() const {
  const double n2 = norm_squared();
  require(n2 > 0.0, ErrorCode::InvalidArgument, "cannot normalize the zero vector");
  FockState out = *this;
  const double scale = 1.0 / std::sqrt(n2);
  for (cplx& a : out.amplitudes_) a *= scale;
  return out;
}

void FockState::check_mode(int mode) const {
  require(mode >= 0 && mode < modes_, ErrorCode::InvalidModeIndex,
          "mode " + std::to_string(mode) + " outside a " + std::to_string(modes_) + "-mode state");
}

namespace {

void require_compatible(const FockState& a, const FockState& b) {
  require(a.modes() == b.modes() && a.cutoff() == b.cutoff(), ErrorCode::InvalidArgument,
          "states live on different truncated spaces");
}

}  // namespace

FockState operator+(const FockState& a, const FockState& b) {
  require_compatible(a, b);
  FockState out = a;
  auto dst = out.amplitudes();
  auto src = b.amplitudes();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

FockState operator-(const FockState& a, const FockState& b) { return a + (-1.0) * b; }

FockState operator*(cplx scale, const FockState& s) {
  FockState out = s;
  for (cplx& a : out.amplitudes()) a *= scale;
  return out;
}

cplx inner(const FockState& a, const FockState& b) {
  require_compatible(a, b);
  cplx acc{};
  auto x = a.amplitudes();
  auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) acc += std::conj(x[i]) * y[i];
  return acc;
}

double max_abs_difference(const FockState& a, const FockState& b) {
  require_compatible(a, b);
  double worst = 0.0;
  auto x = a.amplitudes();
  auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

// --- ladder operators -------------------------------------------------------

FockState apply_ladder(const FockState& state, Ladder op) {
  state.check_mode(op.mode);
  FockState out(state.modes(), state.cutoff());
  const auto stride = state.stride(op.mode);
  const int n_max = state.cutoff().n_max();
  auto src = state.amplitudes();
  auto dst = out.amplitudes();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i] == cplx{}) continue;
    const int n = state.occupation(i, op.mode);
    if (op.dagger) {
      if (n < n_max) dst[i + stride] += std::sqrt(static_cast<double>(n + 1)) * src[i];
    } else if (n > 0) {
      dst[i - stride] += std::sqrt(static_cast<double>(n)) * src[i];
    }
  }
  return out;
}

FockState apply_monomial(const FockState& state, std::span<const Ladder> word) {
  FockState out = state;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = apply_ladder(out, *it);
  return out;
}

cplx expectation(const FockState& state, std::span<const Ladder> word) {
  require(static_cast<int>(word.size()) <= kMaxMonomialDegree, ErrorCode::DegreeTooHigh,
          "monomial degree " + std::to_string(word.size()) + " exceeds " + std::to_string(kMaxMonomialDegree));
  for (const Ladder& op : word) state.check_mode(op.mode);
  return inner(state, apply_monomial(state, word));
}

// --- OperatorPolynomial -----------------------------------------------------

OperatorPolynomial OperatorPolynomial::identity(cplx scale) {
  OperatorPolynomial p;
  p.add(scale, {});
  return p;
}

OperatorPolynomial OperatorPolynomial::single(Ladder op, cplx scale) {
  OperatorPolynomial p;
  p.add(scale, {op});
  return p;
}

void OperatorPolynomial::add(cplx coefficient, Monomial word) {
  if (coefficient == cplx{}) return;
  for (Term& t : terms_) {
    if (t.word == word) {
      t.coefficient += coefficient;
      return;
    }
  }
  terms_.push_back({coefficient, std::move(word)});
}

OperatorPolynomial& OperatorPolynomial::operator+=(const OperatorPolynomial& other) {
  for (const Term& t : other.terms_) add(t.coefficient, t.word);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator-=(const OperatorPolynomial& other) {
  for (const Term& t : other.terms_) add(-t.coefficient, t.word);
  return *this;
}

OperatorPolynomial& OperatorPolynomial::operator*=(cplx scale) {
  for (Term& t : terms_) t.coefficient *= scale;
  return *this;
}

OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
  OperatorPolynomial out;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      Monomial word = x.word;
      word.insert(word.end(), y.word.begin(), y.word.end());
      out.add(x.coefficient * y.coefficient, std::move(word));
    }
  }
  return out;
}

OperatorPolynomial OperatorPolynomial::adjoint() const {
  OperatorPolynomial out;
  for (const Term& t : terms_) {
    Monomial word(t.word.rbegin(), t.word.rend());
    for (Ladder& op : word) op.dagger = !op.dagger;
    out.add(std::conj(t.coefficient), std::move(word));
  }
  return out;
}

FockState OperatorPolynomial::apply(const FockState& state) const {
  FockState out(state.modes(), state.cutoff());
  for (const Term& t : terms_) out = out + t.coefficient * apply_monomial(state, t.word);
  return out;
}

cplx OperatorPolynomial::expectation(const FockState& state) const {
  return inner(state, apply(state));
}

// --- construction -----------------------------------------------------------

FockCutoff twin_beam_cutoff(double r, double tail_tol) {
  require(tail_tol > 0.0 && tail_tol < 1.0, ErrorCode::InvalidArgument, "tail tolerance must lie in (0, 1)");
  const double t2 = std::tanh(r) * std::tanh(r);
  if (t2 == 0.0) return FockCutoff(1);
  // Tail mass beyond n_max is t2^(n_max + 1).
  const int n = static_cast<int>(std::ceil(std::log(tail_tol) / std::log(t2))) - 1;
  return FockCutoff(std::max(1, n));
}

FockState build_twb(const SqueezeParams& params, FockCutoff cutoff, double tail_tol) {
  const double t = std::tanh(params.r());
  const double sech = 1.0 / std::cosh(params.r());
  const int n_max = cutoff.n_max();
  FockState s(2, cutoff);
  double tn = 1.0;
  for (int n = 0; n <= n_max; ++n) {
    const cplx a = sech * tn * std::polar(1.0, n * params.theta());
    const int occ[2] = {n, n};
    s.amplitudes()[s.index(occ)] = a;
    tn *= t;
  }
  // Closed-form tail: sum_{n > n_max} tanh^{2n} / cosh^2 = tanh^{2(n_max+1)}.
  const double tail = std::pow(t * t, n_max + 1);
  if (tail > tail_tol) {
    fail(ErrorCode::CutoffTooSmall, "twin-beam tail mass " + format_number(tail) + " exceeds tolerance for r=" +
                                        format_number(params.r()) + ", n_max=" + std::to_string(n_max));
  }
  FockState out = s.normalized();
  return FockState(2, cutoff, std::vector<cplx>(out.amplitudes().begin(), out.amplitudes().end()), tail);
}

FockState build_coherent(const CoherentInput& input, FockCutoff cutoff) {
  const double mu2 = std::norm(input.mu);
  require(mu2 <= cutoff.n_max() / 4.0, ErrorCode::AmplitudeTooLarge,
          "|mu|^2 = " + format_number(mu2) + " exceeds n_max/4 for n_max=" + std::to_string(cutoff.n_max()));
  std::vector<cplx> amps(static_cast<std::size_t>(cutoff.dim()));
  cplx term = std::exp(-mu2 / 2.0);
  double kept = 0.0;
  for (int n = 0; n <= cutoff.n_max(); ++n) {
    if (n > 0) term *= input.mu / std::sqrt(static_cast<double>(n));
    amps[static_cast<std::size_t>(n)] = term;
    kept += std::norm(term);
  }
  FockState raw(1, cutoff, std::move(amps));
  FockState out = raw.normalized();
  return FockState(1, cutoff, std::vector<cplx>(out.amplitudes().begin(), out.amplitudes().end()),
                   std::max(0.0, 1.0 - kept));
}

FockState tensor_product(const FockState& a, const FockState& b) {
  require(a.cutoff() == b.cutoff(), ErrorCode::InvalidArgument, "tensor factors must share the cutoff");
  const int modes = a.modes() + b.modes();
  require(modes <= kMaxModes, ErrorCode::InvalidArgument, "tensor product exceeds the maximum mode count");
  std::vector<cplx> amps;
  amps.reserve(a.size() * b.size());
  for (const cplx& x : a.amplitudes())
    for (const cplx& y : b.amplitudes()) amps.push_back(x * y);
  // Discarded mass of a product of normalized factors.
  const double tail = 1.0 - (1.0 - a.tail_mass()) * (1.0 - b.tail_mass());
  return FockState(modes, a.cutoff(), std::move(amps), tail);
}

FockState permute_modes(const FockState& state, std::span<const int> order) {
  const int modes = state.modes();
  require(static_cast<int>(order.size()) == modes, ErrorCode::InvalidModeIndex, "permutation length mismatch");
  std::vector<int> seen(static_cast<std::size_t>(modes), 0);
  for (int m : order) {
    state.check_mode(m);
    require(seen[static_cast<std::size_t>(m)]++ == 0, ErrorCode::InvalidModeIndex, "permutation repeats a mode");
  }
  FockState out(modes, state.cutoff(), std::vector<cplx>(state.size()), state.tail_mass());
  std::vector<int> occ(static_cast<std::size_t>(modes));
  auto src = state.amplitudes();
  auto dst = out.amplitudes();
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (int k = 0; k < modes; ++k) occ[static_cast<std::size_t>(k)] = state.occupation(i, order[static_cast<std::size_t>(k)]);
    dst[out.index(occ)] = src[i];
  }
  return out;
}

FockState build_interferometer_input(const FockState& a_ports, const FockState& b1, const FockState& b2) {
  require(a_ports.modes() == 2 && b1.modes() == 1 && b2.modes() == 1, ErrorCode::InvalidArgument,
          "interferometer input needs a two-mode a-port state and single-mode b-port states");
  // (a1, a2, b1, b2) -> (a1, b1, a2, b2)
  const FockState joint = tensor_product(tensor_product(a_ports, b1), b2);
  const int order[4] = {0, 2, 1, 3};
  return permute_modes(joint, order);
}

// --- beam splitter ----------------------------------------------------------

struct BeamSplitter::Impl {
  explicit Impl(FockCutoff cutoff) : exchange(PairGenerator::Exchange, cutoff) {}
  PairExponential exchange;
};

BeamSplitter::BeamSplitter(FockCutoff cutoff) : impl_(std::make_unique<Impl>(cutoff)) {}
BeamSplitter::~BeamSplitter() = default;
BeamSplitter::BeamSplitter(BeamSplitter&&) noexcept = default;
BeamSplitter& BeamSplitter::operator=(BeamSplitter&&) noexcept = default;

FockState BeamSplitter::apply(const FockState& state, int mode_a, int mode_b, double phi) {
  require(state.modes() >= 2, ErrorCode::InvalidModeIndex, "beam splitter needs at least two modes");
  state.check_mode(mode_a);
  state.check_mode(mode_b);
  require(mode_a != mode_b, ErrorCode::InvalidModeIndex, "beam splitter modes must differ");
  require(state.cutoff() == impl_->exchange.cutoff(), ErrorCode::InvalidArgument,
          "beam splitter built for a different cutoff");
  // U = exp((phi/2)(a^dag b - b^dag a)) gives U^dag a U = a cos(phi/2) + b sin(phi/2).
  return impl_->exchange.apply(state, mode_a, mode_b, phi / 2.0);
}

FockState apply_beam_splitter(const FockState& state, int mode_a, int mode_b, double phi) {
  BeamSplitter bs(state.cutoff());
  return bs.apply(state, mode_a, mode_b, phi);
}

double number_difference_moment(const FockState& state, int p, int mode_a, int mode_b) {
  require(p >= 1 && p <= 4, ErrorCode::InvalidArgument, "number-difference moment order must be in 1..4");
  state.check_mode(mode_a);
  state.check_mode(mode_b);
  auto amps = state.amplitudes();
  double acc = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double w = std::norm(amps[i]);
    if (w == 0.0) continue;
    const double d = state.occupation(i, mode_a) - state.occupation(i, mode_b);
    acc += w * std::pow(d, p);
  }
  return acc;
}

}  // namespace holosim
