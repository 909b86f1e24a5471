#pragma once

#include <deque>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mqdc/bits.hpp"
#include "mqdc/protocol/channel.hpp"
#include "mqdc/protocol/identity.hpp"
#include "mqdc/quantum/bell.hpp"
#include "mqdc/quantum/state_register.hpp"
#include "mqdc/rng.hpp"

namespace mqdc::protocol {

/// A party was driven out of protocol order or given inconsistent input.
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Owns every register of one session. Qubits that never interact live in
/// separate registers: one per authentication pair and one per communication
/// slot. Seeds are derived from the session seed and the creation ordinal.
class RegisterPool {
 public:
  explicit RegisterPool(std::uint64_t seed) : seed_(seed) {}

  quantum::StateRegister& create();
  std::size_t size() const noexcept { return registers_.size(); }

 private:
  std::uint64_t seed_;
  std::deque<quantum::StateRegister> registers_;
};

enum class SlotStatus { Intact, ConsumedByChannelCheck, ConsumedBySwapCheck, MessageCarrier };

std::string_view to_string(SlotStatus status) noexcept;

/// Trusted center. Holds the registry and every qubit it has received.
class Trent {
 public:
  explicit Trent(const UserRegistry& registry) : registry_(registry) {}

  const UserRegistry& registry() const noexcept { return registry_; }

  /// A.1-A.3: N Phi+ pairs, checking halves kept, authentication halves
  /// Hadamard-encoded where the user's ID bit is 1. Returns the sequence to send.
  std::vector<LocatedQubit> prepare_authentication(const UserId& user, RegisterPool& pool);

  /// A.6: per-position mismatch between the checking sequence and the
  /// user's announced outcomes.
  std::vector<bool> verify_authentication(const UserId& user, const Bits& announced);

  /// C.2 receipt of a user's A- or B-sequence.
  void receive_sequence(const UserId& user, std::vector<LocatedQubit> qubits);

  /// C.3: sigma_z outcomes of the received qubits at `positions`.
  Bits measure_check_positions(const UserId& user, std::span<const std::size_t> positions);

  /// C.4: Bell measurement of (first[i], second[i]) for every surviving slot.
  /// `forced`, when given, is indexed by slot and fixes the outcome.
  std::vector<quantum::BellKind> swap(const UserId& first, const UserId& second,
                                      std::span<const std::size_t> surviving,
                                      const std::optional<std::vector<quantum::BellKind>>& forced);

 private:
  const UserRegistry& registry_;
  std::map<UserId, std::vector<LocatedQubit>> checking_;
  std::map<UserId, std::vector<LocatedQubit>> received_;
  std::map<UserId, std::vector<bool>> measured_;
};

enum class Role { Initiator, Responder };

/// A communicating user. The decoding ID is normally the user's own; an
/// impostor is a User built with a guessed ID.
class User {
 public:
  struct Slot {
    LocatedQubit retained;
    quantum::BellKind init = quantum::BellKind::PhiPlus;
    SlotStatus status = SlotStatus::Intact;
    std::optional<quantum::BellClass> trent_class;
    std::optional<int> bit;
  };

  enum class Phase {
    Registered,
    AuthSequenceHeld,
    AuthAnnounced,
    PairsPrepared,
    ChannelChecked,
    Swapped,
    SwapChecked,
    Finished,
  };

  User(UserId id, IdSequence decoding_id, Role role, std::uint64_t seed);

  const UserId& id() const noexcept { return id_; }
  Role role() const noexcept { return role_; }
  Phase phase() const noexcept { return phase_; }
  const std::vector<Slot>& slots() const noexcept { return slots_; }

  // Authentication.
  void receive_authentication(std::vector<LocatedQubit> sequence);
  /// A.5: undo the Hadamard encoding with the decoding ID, measure sigma_z.
  Bits decode_and_measure();

  // Communication.
  /// C.1/C.2: one pair per slot register; returns the halves to send to Trent.
  /// The initiator draws each pair from {Phi+, Psi+}; the responder always uses Phi+.
  std::vector<LocatedQubit> prepare_pairs(std::span<quantum::StateRegister* const> slot_registers,
                                          const std::optional<std::vector<quantum::BellKind>>& forced);
  std::vector<std::size_t> choose_check_positions(std::size_t n);
  /// C.3: per-position disagreement with the correlation expected from
  /// this user's own prepared state. Marks the positions consumed.
  std::vector<bool> check_channel(std::span<const std::size_t> positions, const Bits& trent_bits);
  /// Drops slots consumed by another party's channel check.
  void mark_channel_checked(std::span<const std::size_t> positions);
  /// C.4/C.5: learn the announced classes. The initiator measures every
  /// surviving retained qubit here; `forced_bits` is indexed by slot.
  void receive_swap_announcement(std::span<const quantum::BellClass> classes,
                                 const std::optional<Bits>& forced_bits);
  std::vector<std::size_t> choose_swap_check_positions(std::size_t q);
  /// C.5, responder side.
  Bits measure_swap_check(std::span<const std::size_t> positions);
  /// C.5, initiator side: per-position mismatch with the inferred partner bit.
  std::vector<bool> compare_swap_check(std::span<const std::size_t> positions,
                                       const Bits& announced);
  /// Marks the swap-checked positions consumed (responder bookkeeping for the
  /// initiator's choice, or the initiator's own).
  void mark_swap_checked(std::span<const std::size_t> positions);
  /// C.6, initiator side: flip string = inferred partner bits XOR message.
  Bits flip_string(const Bits& message);
  /// C.6, responder side: measure the message slots and apply the flips.
  Bits decode(const Bits& flips);

  std::vector<std::size_t> surviving_positions() const;
  std::vector<std::size_t> message_positions() const;

 private:
  void expect(Phase phase, const char* operation) const;
  void expect_role(Role role, const char* operation) const;
  int measure_retained(Slot& slot);

  UserId id_;
  IdSequence decoding_id_;
  Role role_;
  DeterministicRng rng_;
  Phase phase_ = Phase::Registered;
  std::vector<LocatedQubit> auth_sequence_;
  std::vector<Slot> slots_;
};

/// Partner outcome after swapping: own bit, flipped once if the initiator
/// prepared Psi+ and once more if Trent announced the Psi class.
int infer_partner_bit(quantum::BellKind initiator_init, quantum::BellClass trent_class, int own_bit);

}  // namespace mqdc::protocol
