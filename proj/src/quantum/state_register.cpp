#include "mqdc/quantum/state_register.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>

namespace mqdc::quantum {

namespace {

std::atomic<std::uint64_t> g_next_register_id{1};

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Two-qubit amplitudes of each Bell state, basis order |00>,|01>,|10>,|11>.
constexpr std::array<std::array<double, 4>, 4> kBellVectors = {{
    {kInvSqrt2, 0.0, 0.0, kInvSqrt2},
    {kInvSqrt2, 0.0, 0.0, -kInvSqrt2},
    {0.0, kInvSqrt2, kInvSqrt2, 0.0},
    {0.0, kInvSqrt2, -kInvSqrt2, 0.0},
}};

// Overlap <kind|a> of a two-qubit sub-vector a with a Bell state.
Amplitude bell_component(BellKind kind, const Amplitude& a00, const Amplitude& a01,
                         const Amplitude& a10, const Amplitude& a11) {
  switch (kind) {
    case BellKind::PhiPlus: return (a00 + a11) * kInvSqrt2;
    case BellKind::PhiMinus: return (a00 - a11) * kInvSqrt2;
    case BellKind::PsiPlus: return (a01 + a10) * kInvSqrt2;
    case BellKind::PsiMinus: return (a01 - a10) * kInvSqrt2;
  }
  return {};
}

}  // namespace

StateRegister::StateRegister(std::uint64_t seed)
    : id_(g_next_register_id.fetch_add(1, std::memory_order_relaxed)),
      amplitudes_{Amplitude{1.0, 0.0}},
      rng_(seed) {}

StateRegister StateRegister::with_amplitudes(std::uint64_t seed,
                                             std::vector<Amplitude> amplitudes) {
  const auto size = amplitudes.size();
  if (size < 2 || (size & (size - 1)) != 0)
    throw QuantumError("with_amplitudes: size must be a power of two >= 2");
  const auto qubits = static_cast<std::size_t>(std::countr_zero(size));
  if (qubits > kMaxQubits) throw QuantumError("with_amplitudes: capacity exceeded");
  StateRegister reg(seed);
  reg.append_qubits(qubits, amplitudes);
  if (std::abs(reg.norm_squared() - 1.0) > kNormTolerance)
    throw QuantumError("with_amplitudes: state is not normalized");
  return reg;
}

bool StateRegister::is_live(QubitRef q) const noexcept {
  return q.register_id == id_ && std::find(live_.begin(), live_.end(), q) != live_.end();
}

double StateRegister::norm_squared() const noexcept {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

std::size_t StateRegister::position_of(QubitRef q) const {
  if (q.register_id != id_) throw QuantumError("qubit belongs to another register");
  const auto it = std::find(live_.begin(), live_.end(), q);
  if (it == live_.end()) throw QuantumError("qubit is not live");
  return static_cast<std::size_t>(it - live_.begin());
}

std::size_t StateRegister::bit_of(QubitRef q) const {
  return live_.size() - 1 - position_of(q);
}

QubitRef StateRegister::append_qubits(std::size_t count, std::span<const Amplitude> local) {
  if (live_.size() + count > kMaxQubits)
    throw QuantumError("register capacity of " + std::to_string(kMaxQubits) +
                       " qubits exceeded");
  // New qubits become the least significant bits: |old> (x) |local>.
  std::vector<Amplitude> next(amplitudes_.size() * local.size());
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (amplitudes_[i] == Amplitude{}) continue;
    for (std::size_t j = 0; j < local.size(); ++j)
      next[i * local.size() + j] = amplitudes_[i] * local[j];
  }
  amplitudes_ = std::move(next);
  QubitRef first{id_, next_index_};
  for (std::size_t k = 0; k < count; ++k) live_.push_back(QubitRef{id_, next_index_++});
  return first;
}

QubitRef StateRegister::alloc_zero() {
  const std::array<Amplitude, 2> zero = {1.0, 0.0};
  return append_qubits(1, zero);
}

std::pair<QubitRef, QubitRef> StateRegister::alloc_bell_pair(BellKind kind) {
  const auto& v = kBellVectors[index_of(kind)];
  const std::array<Amplitude, 4> local = {v[0], v[1], v[2], v[3]};
  const QubitRef first = append_qubits(2, local);
  return {first, QubitRef{id_, first.index + 1}};
}

void StateRegister::apply_hadamard(QubitRef q) {
  const std::size_t mask = std::size_t{1} << bit_of(q);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & mask) continue;
    const Amplitude a0 = amplitudes_[i];
    const Amplitude a1 = amplitudes_[i | mask];
    amplitudes_[i] = (a0 + a1) * kInvSqrt2;
    amplitudes_[i | mask] = (a0 - a1) * kInvSqrt2;
  }
}

void StateRegister::apply_x(QubitRef q) {
  const std::size_t mask = std::size_t{1} << bit_of(q);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    if (!(i & mask)) std::swap(amplitudes_[i], amplitudes_[i | mask]);
}

double StateRegister::probability_one(QubitRef q) const {
  const std::size_t mask = std::size_t{1} << bit_of(q);
  double p1 = 0.0;
  for (std::size_t i = 0; i < amplitudes_.size(); ++i)
    if (i & mask) p1 += std::norm(amplitudes_[i]);
  return p1;
}

void StateRegister::collapse_z(std::size_t bit, int outcome, double probability) {
  const std::size_t mask = std::size_t{1} << bit;
  const double scale = 1.0 / std::sqrt(probability);
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    const bool set = (i & mask) != 0;
    if (set == (outcome == 1))
      amplitudes_[i] *= scale;
    else
      amplitudes_[i] = Amplitude{};
  }
}

int StateRegister::measure_z(QubitRef q) {
  const std::size_t bit = bit_of(q);
  const double p1 = probability_one(q);
  const double p0 = 1.0 - p1;
  // Cumulative order: outcome 0 first.
  const int outcome = rng_.uniform() < p0 ? 0 : 1;
  collapse_z(bit, outcome, outcome == 0 ? p0 : p1);
  return outcome;
}

void StateRegister::force_z(QubitRef q, int bit) {
  if (bit != 0 && bit != 1) throw QuantumError("force_z: bit must be 0 or 1");
  const std::size_t shift = bit_of(q);
  const double p1 = probability_one(q);
  const double p = bit == 1 ? p1 : 1.0 - p1;
  if (p <= kNormTolerance) throw QuantumError("force_z: outcome has zero probability");
  collapse_z(shift, bit, p);
}

void StateRegister::check_pair(QubitRef q1, QubitRef q2) const {
  if (q1 == q2) throw QuantumError("Bell measurement needs two distinct qubits");
  (void)position_of(q1);
  (void)position_of(q2);
}

std::array<double, 4> StateRegister::bell_projection_probabilities(QubitRef q1,
                                                                   QubitRef q2) const {
  check_pair(q1, q2);
  const std::size_t m1 = std::size_t{1} << bit_of(q1);
  const std::size_t m2 = std::size_t{1} << bit_of(q2);
  std::array<double, 4> probs{};
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & (m1 | m2)) continue;
    const Amplitude a00 = amplitudes_[i];
    const Amplitude a01 = amplitudes_[i | m2];
    const Amplitude a10 = amplitudes_[i | m1];
    const Amplitude a11 = amplitudes_[i | m1 | m2];
    for (BellKind kind : kAllBellKinds)
      probs[index_of(kind)] += std::norm(bell_component(kind, a00, a01, a10, a11));
  }
  return probs;
}

void StateRegister::collapse_bell(std::size_t b1, std::size_t b2, BellKind kind,
                                  double probability) {
  const std::size_t m1 = std::size_t{1} << b1;
  const std::size_t m2 = std::size_t{1} << b2;
  const double scale = 1.0 / std::sqrt(probability);
  const auto& v = kBellVectors[index_of(kind)];
  for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
    if (i & (m1 | m2)) continue;
    Amplitude& a00 = amplitudes_[i];
    Amplitude& a01 = amplitudes_[i | m2];
    Amplitude& a10 = amplitudes_[i | m1];
    Amplitude& a11 = amplitudes_[i | m1 | m2];
    const Amplitude c = bell_component(kind, a00, a01, a10, a11) * scale;
    a00 = c * v[0];
    a01 = c * v[1];
    a10 = c * v[2];
    a11 = c * v[3];
  }
}

BellKind StateRegister::measure_bell(QubitRef q1, QubitRef q2) {
  const auto probs = bell_projection_probabilities(q1, q2);
  const double u = rng_.uniform();
  double cumulative = 0.0;
  // Fixed projection order Phi+, Phi-, Psi+, Psi-; the last nonzero outcome
  // absorbs rounding slack.
  BellKind chosen = BellKind::PhiPlus;
  for (BellKind kind : kAllBellKinds) {
    if (probs[index_of(kind)] <= 0.0) continue;
    chosen = kind;
    cumulative += probs[index_of(kind)];
    if (u < cumulative) break;
  }
  collapse_bell(bit_of(q1), bit_of(q2), chosen, probs[index_of(chosen)]);
  return chosen;
}

void StateRegister::force_bell(QubitRef q1, QubitRef q2, BellKind kind) {
  const auto probs = bell_projection_probabilities(q1, q2);
  const double p = probs[index_of(kind)];
  if (p <= kNormTolerance)
    throw QuantumError("force_bell: outcome " + std::string(to_string(kind)) +
                       " has zero probability");
  collapse_bell(bit_of(q1), bit_of(q2), kind, p);
}

void StateRegister::release(QubitRef q) {
  const std::size_t pos = position_of(q);
  const std::size_t bit = live_.size() - 1 - pos;
  const std::size_t mask = std::size_t{1} << bit;
  const std::size_t low = mask - 1;
  const std::size_t half = amplitudes_.size() / 2;

  // Split into the rows where q reads 0 and 1; q factors out iff the rows
  // are parallel (Cauchy-Schwarz equality).
  std::vector<Amplitude> row0(half), row1(half);
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t i = ((r & ~low) << 1) | (r & low);
    row0[r] = amplitudes_[i];
    row1[r] = amplitudes_[i | mask];
  }
  double n0 = 0.0, n1 = 0.0;
  Amplitude overlap{};
  for (std::size_t r = 0; r < half; ++r) {
    n0 += std::norm(row0[r]);
    n1 += std::norm(row1[r]);
    overlap += std::conj(row0[r]) * row1[r];
  }
  if (std::abs(n0 * n1 - std::norm(overlap)) > kNormTolerance)
    throw QuantumError("cannot release a qubit entangled with the register");

  std::vector<Amplitude>& rest = n0 >= n1 ? row0 : row1;
  const double scale = 1.0 / std::sqrt(std::max(n0, n1));
  for (auto& a : rest) a *= scale;
  amplitudes_ = std::move(rest);
  live_.erase(live_.begin() + static_cast<std::ptrdiff_t>(pos));
}

}  // namespace mqdc::quantum
