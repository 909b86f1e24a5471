#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mqdc {

/// Bit string, one element per bit, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// "0110" <-> {0,1,1,0}. Throws std::invalid_argument on characters other than 0/1.
Bits parse_bits(std::string_view text);
std::string to_string(const Bits& bits);

/// Elementwise XOR; sizes must match.
Bits xor_bits(const Bits& a, const Bits& b);

}  // namespace mqdc
