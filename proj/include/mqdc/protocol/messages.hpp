#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "mqdc/bits.hpp"
#include "mqdc/protocol/identity.hpp"
#include "mqdc/quantum/bell.hpp"

namespace mqdc::protocol {

// Every message is public: anything placed here is visible to an
// eavesdropper. Position sets index the M+n+q communication slots.

struct AuthRequest {
  UserId initiator;
  UserId responder;
  friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};

/// A.5: a user's sigma_z outcomes on its decoded authentication sequence.
struct AuthOutcomes {
  UserId user;
  Bits bits;
  friend bool operator==(const AuthOutcomes&, const AuthOutcomes&) = default;
};

struct AuthVerdict {
  UserId user;
  bool pass = false;
  friend bool operator==(const AuthVerdict&, const AuthVerdict&) = default;
};

/// C.3: channel-check positions announced by `chooser`.
struct CheckPositions {
  UserId chooser;
  std::vector<std::size_t> positions;
  friend bool operator==(const CheckPositions&, const CheckPositions&) = default;
};

/// C.3: Trent's sigma_z outcomes on the sequence received from `user`,
/// aligned with the preceding CheckPositions.
struct CheckOutcomes {
  UserId user;
  std::vector<std::size_t> positions;
  Bits bits;
  friend bool operator==(const CheckOutcomes&, const CheckOutcomes&) = default;
};

/// C.4: one class per surviving slot, in slot order.
struct SwapAnnouncement {
  std::vector<quantum::BellClass> classes;
  friend bool operator==(const SwapAnnouncement&, const SwapAnnouncement&) = default;
};

struct SwapCheckPositions {
  std::vector<std::size_t> positions;
  friend bool operator==(const SwapCheckPositions&, const SwapCheckPositions&) = default;
};

/// C.5: the responder's outcomes at the swap-check positions.
struct SwapCheckOutcomes {
  std::vector<std::size_t> positions;
  Bits bits;
  friend bool operator==(const SwapCheckOutcomes&, const SwapCheckOutcomes&) = default;
};

/// C.6: responder flips bit i of its message-slot outcomes iff bits[i] = 1.
struct FlipAnnouncement {
  Bits bits;
  friend bool operator==(const FlipAnnouncement&, const FlipAnnouncement&) = default;
};

struct Abort {
  std::string step;
  std::string reason;
  friend bool operator==(const Abort&, const Abort&) = default;
};

using ClassicalMessage =
    std::variant<AuthRequest, AuthOutcomes, AuthVerdict, CheckPositions, CheckOutcomes,
                 SwapAnnouncement, SwapCheckPositions, SwapCheckOutcomes, FlipAnnouncement, Abort>;

/// Ordered public record of a session's classical traffic.
class Transcript {
 public:
  void post(ClassicalMessage message);

  const std::vector<ClassicalMessage>& messages() const noexcept { return messages_; }
  std::size_t size() const noexcept { return messages_.size(); }

  template <typename T>
  const T* last_of() const {
    for (auto it = messages_.rbegin(); it != messages_.rend(); ++it)
      if (const auto* m = std::get_if<T>(&*it)) return m;
    return nullptr;
  }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::vector<ClassicalMessage> messages_;
};

std::string message_type_name(const ClassicalMessage& message);

}  // namespace mqdc::protocol
