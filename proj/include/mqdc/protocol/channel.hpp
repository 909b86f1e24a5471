#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "mqdc/protocol/identity.hpp"
#include "mqdc/quantum/state_register.hpp"

namespace mqdc::protocol {

struct RunReport;

/// The three kinds of quantum link in the star topology.
enum class ChannelLeg {
  Auth,       // Trent -> user, authentication sequence
  ASequence,  // initiator -> Trent
  BSequence,  // responder -> Trent
};

std::string_view to_string(ChannelLeg leg) noexcept;

/// One qubit in flight: which leg, whose link, and its index within the
/// transmitted sequence.
struct Transit {
  ChannelLeg leg = ChannelLeg::Auth;
  UserId user;
  std::size_t position = 0;
};

/// A qubit together with the register that holds it.
struct LocatedQubit {
  quantum::StateRegister* reg = nullptr;
  quantum::QubitRef ref;
};

/// Hooks through which an attack acts on a running session. Every hook has a
/// no-op default; a session with no adversary behaves the same as one whose
/// adversary overrides nothing.
class SessionAdversary {
 public:
  virtual ~SessionAdversary() = default;

  /// Called for every qubit crossing a quantum channel, before delivery.
  virtual void on_transit(const Transit& transit, quantum::StateRegister& reg,
                          quantum::QubitRef q) {
    (void)transit, (void)reg, (void)q;
  }

  /// Lets an impersonator stand in for `user`. The returned sequence is the one
  /// the impostor decodes with; nullopt means the real user takes part.
  virtual std::optional<IdSequence> impersonated_id(const UserId& user, std::size_t id_length) {
    (void)user, (void)id_length;
    return std::nullopt;
  }

  /// Called once with the finished report; may fill the attack fields.
  virtual void on_session_end(RunReport& report) { (void)report; }
};

}  // namespace mqdc::protocol
