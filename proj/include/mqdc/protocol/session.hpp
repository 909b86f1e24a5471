#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqdc/adversary/attack_model.hpp"
#include "mqdc/bits.hpp"
#include "mqdc/protocol/channel.hpp"
#include "mqdc/protocol/identity.hpp"
#include "mqdc/protocol/messages.hpp"
#include "mqdc/protocol/parties.hpp"
#include "mqdc/quantum/bell.hpp"

namespace mqdc::protocol {

/// Fixed outcomes for replaying a known run. Every vector is indexed by
/// communication slot and must have M+n+q entries.
struct ForcedChoices {
  std::optional<std::vector<quantum::BellKind>> initiator_inits;
  std::optional<std::vector<quantum::BellKind>> trent_kinds;
  std::optional<Bits> initiator_bits;
};

struct SessionConfig {
  std::size_t n_users = 2;
  std::size_t id_length = 8;       // N
  std::size_t message_length = 16; // M
  std::size_t channel_checks = 4;  // n
  std::size_t swap_checks = 4;     // q
  std::uint64_t seed = 0;
  adversary::AttackModel attack = adversary::NoAttack{};
  UserId initiator = "user0";
  UserId responder = "user1";
  /// Message to send; drawn from the session seed when absent.
  std::optional<Bits> message;
  ForcedChoices forced;

  std::size_t slot_count() const noexcept { return message_length + channel_checks + swap_checks; }

  /// Invariant violations as "field: problem" strings; empty when valid.
  std::vector<std::string> validate() const;
};

/// Per-slot bookkeeping assembled after a run. Holds secrets; never published.
struct PairSlot {
  std::size_t index = 0;
  quantum::BellKind initiator_init = quantum::BellKind::PhiPlus;
  SlotStatus status = SlotStatus::Intact;
  std::optional<quantum::BellClass> trent_class;
  std::optional<int> initiator_bit;
  std::optional<int> responder_bit;
};

enum class CheckPhase { Authentication, ChannelCheck, SwapCheck };

/// One legitimate comparison of a single qubit, for detection statistics.
struct CheckRecord {
  CheckPhase phase = CheckPhase::Authentication;
  UserId user;           // whose link or authentication was compared
  std::size_t position = 0;
  std::optional<int> id_bit;  // authentication only
  bool error = false;
};

struct ErrorCount {
  std::size_t errors = 0;
  std::size_t total = 0;
};

struct RunReport {
  std::vector<std::pair<UserId, bool>> auth_passed;
  ErrorCount channel_check;
  ErrorCount swap_check;
  Bits sent_message;
  std::optional<Bits> delivered_message;
  std::optional<std::string> aborted_at;  // "A.6", "C.3" or "C.5"
  std::string abort_reason;
  Transcript transcript;
  std::optional<Bits> eve_recovered_message;

  // Simulator-side ground truth for oracles and statistics.
  std::vector<PairSlot> slots;
  std::vector<std::optional<quantum::BellKind>> trent_kinds;  // per slot
  std::vector<CheckRecord> checks;
  std::optional<adversary::AttackReport> attack;

  bool all_authenticated() const;
};

/// Mutable state shared by the phase functions of one session.
class SessionContext {
 public:
  SessionContext(std::uint64_t seed, SessionAdversary* adversary, ForcedChoices forced = {});

  Transcript& transcript() noexcept { return transcript_; }
  RegisterPool& pool() noexcept { return pool_; }
  std::vector<CheckRecord>& checks() noexcept { return checks_; }
  const ForcedChoices& forced() const noexcept { return forced_; }

  /// Hands a qubit to the quantum channel; the adversary, if any, sees it first.
  void transmit(const Transit& transit, const LocatedQubit& qubit);
  std::optional<IdSequence> impersonated_id(const UserId& user, std::size_t id_length);

  /// Slot registers created by prepare_pairs.
  std::vector<quantum::StateRegister*>& slot_registers() noexcept { return slot_registers_; }

 private:
  Transcript transcript_;
  RegisterPool pool_;
  SessionAdversary* adversary_;
  ForcedChoices forced_;
  std::vector<CheckRecord> checks_;
  std::vector<quantum::StateRegister*> slot_registers_;
};

/// A.1-A.6 for one user. Posts AuthOutcomes and AuthVerdict.
bool authenticate(SessionContext& ctx, Trent& trent, User& user);

/// C.1-C.2: both users prepare `count` pairs and send one half of each to Trent.
std::vector<PairSlot> prepare_pairs(SessionContext& ctx, Trent& trent, User& initiator,
                                    User& responder, std::size_t count);

/// C.3 for one checker against Trent. Returns the number of disagreements.
std::size_t channel_check(SessionContext& ctx, User& checker, Trent& trent,
                          std::span<const std::size_t> positions);

/// C.4: Bell measurement of every surviving slot, announced by class only.
/// Returns the announcement together with the full kinds (kept off the wire).
std::pair<SwapAnnouncement, std::vector<quantum::BellKind>> swap_and_announce(
    SessionContext& ctx, Trent& trent, User& initiator, User& responder);

/// C.5: responder announces its outcomes at `positions`; the initiator compares.
std::size_t swap_check(SessionContext& ctx, User& initiator, User& responder,
                       std::span<const std::size_t> positions);

/// C.6: flip announcement and responder-side decoding.
Bits encode_and_deliver(SessionContext& ctx, User& initiator, User& responder, const Bits& message);

/// Runs A.0-C.6 for config.initiator -> config.responder. Aborts are recorded
/// in the report, never thrown. The adversary is built from config.attack.
RunReport run_session(const SessionConfig& config, const UserRegistry& registry);

/// Same, with an explicit adversary (nullptr: nobody on the channels).
/// config.attack is ignored.
RunReport run_session(const SessionConfig& config, const UserRegistry& registry,
                      SessionAdversary* adversary);

}  // namespace mqdc::protocol
