#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mqdc/bits.hpp"
#include "mqdc/protocol/channel.hpp"

namespace mqdc::adversary {

enum class TapBasis { Z, X };

struct NoAttack {
  friend bool operator==(const NoAttack&, const NoAttack&) = default;
};

/// Measure transiting qubits of one leg and forward the collapsed qubit.
struct InterceptResend {
  protocol::ChannelLeg leg = protocol::ChannelLeg::ASequence;
  TapBasis basis = TapBasis::Z;
  /// Share of transiting qubits tapped, in (0, 1].
  double fraction = 1.0;
  friend bool operator==(const InterceptResend&, const InterceptResend&) = default;
};

/// An impostor takes the place of `target` during authentication and decodes
/// with `guessed_id`; nullopt draws a uniformly random guess per session.
struct ImpersonateUser {
  protocol::UserId target;
  std::optional<Bits> guessed_id;
  friend bool operator==(const ImpersonateUser&, const ImpersonateUser&) = default;
};

/// Trent runs the protocol honestly, then tries to read the message from his
/// Bell outcomes and the public flip string.
struct TrentReads {
  friend bool operator==(const TrentReads&, const TrentReads&) = default;
};

using AttackModel = std::variant<NoAttack, InterceptResend, ImpersonateUser, TrentReads>;

std::string attack_name(const AttackModel& attack);

struct InterceptRecord {
  protocol::ChannelLeg leg = protocol::ChannelLeg::Auth;
  protocol::UserId user;
  std::size_t position = 0;
  int outcome = 0;
};

struct DetectionTally {
  std::size_t checked = 0;
  std::size_t errors = 0;

  double rate() const noexcept {
    return checked == 0 ? 0.0 : static_cast<double>(errors) / static_cast<double>(checked);
  }
  DetectionTally& operator+=(const DetectionTally& other) noexcept {
    checked += other.checked;
    errors += other.errors;
    return *this;
  }
};

/// Simulator-side measurements of an attack. Detection tallies count only
/// qubits that were tapped and later compared by a legitimate check.
struct AttackReport {
  std::size_t intercepted_count = 0;
  DetectionTally auth_id0;  // authentication qubits whose ID bit is 0
  DetectionTally auth_id1;  // ... whose ID bit is 1 (Hadamard-encoded)
  DetectionTally channel_check;
  DetectionTally swap_check;
  std::optional<Bits> recovered_message;
  std::string recovery_method;
};

}  // namespace mqdc::adversary
