#include "mqdc/protocol/messages.hpp"

#include <algorithm>
#include <stdexcept>

namespace mqdc::protocol {

namespace {

void require_increasing(const std::vector<std::size_t>& positions, const char* what) {
  if (!std::is_sorted(positions.begin(), positions.end()) ||
      std::adjacent_find(positions.begin(), positions.end()) != positions.end())
    throw std::invalid_argument(std::string(what) + ": positions must be strictly increasing");
}

struct Validator {
  void operator()(const CheckPositions& m) const { require_increasing(m.positions, "CheckPositions"); }
  void operator()(const CheckOutcomes& m) const {
    require_increasing(m.positions, "CheckOutcomes");
    if (m.positions.size() != m.bits.size())
      throw std::invalid_argument("CheckOutcomes: positions and bits differ in length");
  }
  void operator()(const SwapCheckPositions& m) const {
    require_increasing(m.positions, "SwapCheckPositions");
  }
  void operator()(const SwapCheckOutcomes& m) const {
    require_increasing(m.positions, "SwapCheckOutcomes");
    if (m.positions.size() != m.bits.size())
      throw std::invalid_argument("SwapCheckOutcomes: positions and bits differ in length");
  }
  template <typename T>
  void operator()(const T&) const {}
};

}  // namespace

void Transcript::post(ClassicalMessage message) {
  std::visit(Validator{}, message);
  messages_.push_back(std::move(message));
}

std::string message_type_name(const ClassicalMessage& message) {
  static constexpr const char* kNames[] = {
      "AuthRequest",        "AuthOutcomes",     "AuthVerdict",       "CheckPositions",
      "CheckOutcomes",      "SwapAnnouncement", "SwapCheckPositions", "SwapCheckOutcomes",
      "FlipAnnouncement",   "Abort"};
  return kNames[message.index()];
}

}  // namespace mqdc::protocol
