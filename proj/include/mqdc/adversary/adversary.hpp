#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "mqdc/adversary/attack_model.hpp"
#include "mqdc/protocol/channel.hpp"
#include "mqdc/protocol/messages.hpp"
#include "mqdc/rng.hpp"

namespace mqdc::protocol {
struct RunReport;
struct CheckRecord;
class UserRegistry;
}  // namespace mqdc::protocol

namespace mqdc::adversary {

/// Builds the session hooks for an attack descriptor. NoAttack yields an
/// adversary that never acts.
std::unique_ptr<protocol::SessionAdversary> make_adversary(const AttackModel& attack,
                                                           std::uint64_t seed);

/// Measures q in `basis` and leaves the collapsed qubit in place, which is
/// the same as resending the observed eigenstate. Appends to `book`.
int tap_intercept_resend(quantum::StateRegister& reg, quantum::QubitRef q, TapBasis basis,
                         const protocol::Transit& transit, std::vector<InterceptRecord>& book);

/// Slot bookkeeping an eavesdropper can derive from the public transcript of
/// a completed session.
struct PublicView {
  std::size_t slot_count = 0;
  std::vector<std::size_t> check_positions;
  std::vector<std::size_t> surviving;
  std::vector<quantum::BellClass> classes;  // aligned with `surviving`
  std::vector<std::size_t> message_positions;
  Bits flips;  // aligned with `message_positions`
};

/// nullopt unless the transcript reaches the flip announcement.
std::optional<PublicView> public_view(const protocol::Transcript& transcript);

/// Reads the message from sigma_z records on the A-sequence plus the public
/// announcements: responder bit = tapped bit XOR (class is Psi), message bit =
/// responder bit XOR flip. nullopt if any message slot lacks an A-leg Z record
/// or the session did not complete.
std::optional<Bits> reconstruct_message(const std::vector<InterceptRecord>& book,
                                        const protocol::Transcript& transcript);

/// Trent's best attempt: he knows every Bell outcome but neither the
/// initiator's prepared states nor her outcomes, so the unknown term
/// (own bit XOR prepared-as-Psi) is taken as 0.
std::optional<Bits> reconstruct_as_trent(
    const std::vector<std::optional<quantum::BellKind>>& trent_kinds,
    const protocol::Transcript& transcript);

/// Detection tallies over tapped qubits that a legitimate check compared.
AttackReport tally_detection(const std::vector<InterceptRecord>& book,
                             const std::vector<protocol::CheckRecord>& checks);

/// Runs one authentication in which an impostor answers for `target` using
/// `guessed_id`. Trent consults `trent_registry`; the impostor never does.
bool impersonation_attempt(const protocol::UserRegistry& trent_registry,
                           const protocol::UserId& target, const protocol::IdSequence& guessed_id,
                           std::uint64_t seed);

}  // namespace mqdc::adversary
