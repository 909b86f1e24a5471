#include "mqdc/protocol/channel.hpp"

namespace mqdc::protocol {

std::string_view to_string(ChannelLeg leg) noexcept {
  switch (leg) {
    case ChannelLeg::Auth: return "auth";
    case ChannelLeg::ASequence: return "a-sequence";
    case ChannelLeg::BSequence: return "b-sequence";
  }
  return "?";
}

}  // namespace mqdc::protocol
