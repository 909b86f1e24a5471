#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mqdc/quantum/bell.hpp"
#include "mqdc/rng.hpp"

namespace mqdc::quantum {

using Amplitude = std::complex<double>;

/// Misuse of a register: dead or foreign qubit, capacity overflow, releasing
/// an entangled qubit, or forcing an outcome of probability zero.
class QuantumError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Handle to one qubit slot. Slot indices are assigned at allocation and are
/// never reused within a register, so a released handle stays dead.
struct QubitRef {
  std::uint64_t register_id = 0;
  std::uint32_t index = 0;

  friend bool operator==(const QubitRef&, const QubitRef&) = default;
};

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kIdentityTolerance = 1e-12;

/// Exact pure-state simulator over the live qubits of one session factor.
///
/// Basis ordering: live qubits are kept in allocation order; the qubit at
/// position 0 is the most significant bit of the basis index. Releasing a
/// qubit removes its position and shifts later qubits up.
class StateRegister {
 public:
  static constexpr std::size_t kMaxQubits = 24;

  explicit StateRegister(std::uint64_t seed);

  /// Register holding an arbitrary normalized state over log2(size) fresh qubits.
  static StateRegister with_amplitudes(std::uint64_t seed, std::vector<Amplitude> amplitudes);

  StateRegister(StateRegister&&) noexcept = default;
  StateRegister& operator=(StateRegister&&) noexcept = default;
  StateRegister(const StateRegister&) = delete;
  StateRegister& operator=(const StateRegister&) = delete;

  std::uint64_t id() const noexcept { return id_; }
  std::size_t live_count() const noexcept { return live_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }
  /// Live handles in basis order (position 0 = most significant bit).
  std::span<const QubitRef> live_qubits() const noexcept { return live_; }
  bool is_live(QubitRef q) const noexcept;
  double norm_squared() const noexcept;

  QubitRef alloc_zero();
  std::pair<QubitRef, QubitRef> alloc_bell_pair(BellKind kind);

  void apply_hadamard(QubitRef q);
  void apply_x(QubitRef q);

  int measure_z(QubitRef q);
  /// Projects q onto |bit>. Throws if that outcome has zero probability.
  void force_z(QubitRef q, int bit);
  /// Born probability of reading 1 on q, without collapsing.
  double probability_one(QubitRef q) const;

  BellKind measure_bell(QubitRef q1, QubitRef q2);
  /// Projects (q1, q2) onto `kind`. Throws if that outcome has zero probability.
  void force_bell(QubitRef q1, QubitRef q2, BellKind kind);
  /// Indexed by index_of(BellKind).
  std::array<double, 4> bell_projection_probabilities(QubitRef q1, QubitRef q2) const;

  /// Removes a qubit that is unentangled with the rest of the register.
  void release(QubitRef q);

 private:
  std::size_t position_of(QubitRef q) const;
  std::size_t bit_of(QubitRef q) const;  // bit shift from the least significant end
  QubitRef append_qubits(std::size_t count, std::span<const Amplitude> local);
  void collapse_z(std::size_t bit, int outcome, double probability);
  void collapse_bell(std::size_t b1, std::size_t b2, BellKind kind, double probability);
  void check_pair(QubitRef q1, QubitRef q2) const;

  std::uint64_t id_;
  std::uint32_t next_index_ = 0;
  std::vector<QubitRef> live_;
  std::vector<Amplitude> amplitudes_;
  DeterministicRng rng_;
};

}  // namespace mqdc::quantum
