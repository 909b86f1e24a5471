#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

namespace mqdc::quantum {

// Phi± = (|00> ± |11>)/sqrt2, Psi± = (|01> ± |10>)/sqrt2.
// Enumerator order is the fixed projection order used by measure_bell.
enum class BellKind : std::uint8_t { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

// The coarse result Trent announces: {Phi+, Phi-} vs {Psi+, Psi-}.
enum class BellClass : std::uint8_t { Phi = 0, Psi = 1 };

// Outcome classes of the double Bell measurement on b12 (x) b34, measured on
// pairs (1,3) and (2,4).
enum class SwapOutcomeClass : std::uint8_t {
  IDPlusPlus = 0,
  IDPlusMinus = 1,
  RevPlusPlus = 2,
  RevPlusMinus = 3,
};

inline constexpr std::array<BellKind, 4> kAllBellKinds = {
    BellKind::PhiPlus, BellKind::PhiMinus, BellKind::PsiPlus, BellKind::PsiMinus};

inline constexpr std::array<SwapOutcomeClass, 4> kAllSwapOutcomeClasses = {
    SwapOutcomeClass::IDPlusPlus, SwapOutcomeClass::IDPlusMinus,
    SwapOutcomeClass::RevPlusPlus, SwapOutcomeClass::RevPlusMinus};

constexpr BellClass bell_class(BellKind kind) noexcept {
  return (kind == BellKind::PhiPlus || kind == BellKind::PhiMinus) ? BellClass::Phi
                                                                   : BellClass::Psi;
}

constexpr std::size_t index_of(BellKind kind) noexcept {
  return static_cast<std::size_t>(kind);
}

/// Lookup of the 4x4 entanglement-swapping outcome table. Rows are the state
/// of pair (1,2), columns the state of pair (3,4).
SwapOutcomeClass swap_table(BellKind first, BellKind second) noexcept;

using BellPair = std::pair<BellKind, BellKind>;

/// The four ordered (outcome on (1,3), outcome on (2,4)) pairs a class stands for.
std::array<BellPair, 4> swap_expansion(SwapOutcomeClass cls) noexcept;

std::string_view to_string(BellKind kind) noexcept;
std::string_view to_string(BellClass cls) noexcept;
std::string_view to_string(SwapOutcomeClass cls) noexcept;

}  // namespace mqdc::quantum
