#pragma once

#include "mqdc/bits.hpp"
#include "mqdc/protocol/identity.hpp"
#include "mqdc/protocol/session.hpp"

namespace mqdc::harness {

/// The three-slot walk-through: initiator prepares Phi+, Phi+, Psi+; Trent
/// obtains Phi+, Psi+, Psi+; the initiator reads 0, 0, 1 and sends 101.
struct WorkedExample {
  protocol::SessionConfig config;
  protocol::UserRegistry registry;
  protocol::RunReport report;
  /// Responder outcomes as the initiator infers them.
  Bits inferred_responder_bits;
};

protocol::SessionConfig worked_example_config();
protocol::UserRegistry worked_example_registry();
WorkedExample run_worked_example();

}  // namespace mqdc::harness
