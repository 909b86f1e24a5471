#include "mqdc/quantum/bell.hpp"

namespace mqdc::quantum {

namespace {

using enum BellKind;
using enum SwapOutcomeClass;

constexpr SwapOutcomeClass kSwapTable[4][4] = {
    //            Phi+34        Phi-34        Psi+34        Psi-34
    /* Phi+12 */ {IDPlusPlus, IDPlusMinus, RevPlusPlus, RevPlusMinus},
    /* Phi-12 */ {IDPlusMinus, IDPlusPlus, RevPlusMinus, RevPlusPlus},
    /* Psi+12 */ {RevPlusPlus, RevPlusMinus, IDPlusPlus, IDPlusMinus},
    /* Psi-12 */ {RevPlusMinus, RevPlusPlus, IDPlusMinus, IDPlusPlus},
};

}  // namespace

SwapOutcomeClass swap_table(BellKind first, BellKind second) noexcept {
  return kSwapTable[index_of(first)][index_of(second)];
}

std::array<BellPair, 4> swap_expansion(SwapOutcomeClass cls) noexcept {
  switch (cls) {
    case IDPlusPlus:
      return {{{PhiPlus, PhiPlus}, {PhiMinus, PhiMinus}, {PsiPlus, PsiPlus}, {PsiMinus, PsiMinus}}};
    case IDPlusMinus:
      return {{{PsiPlus, PsiMinus}, {PhiMinus, PhiPlus}, {PhiPlus, PhiMinus}, {PsiMinus, PsiPlus}}};
    case RevPlusPlus:
      return {{{PhiPlus, PsiPlus}, {PhiMinus, PsiMinus}, {PsiPlus, PhiPlus}, {PsiMinus, PhiMinus}}};
    case RevPlusMinus:
      return {{{PhiPlus, PsiMinus}, {PhiMinus, PsiPlus}, {PsiPlus, PhiMinus}, {PsiMinus, PhiPlus}}};
  }
  return {};
}

std::string_view to_string(BellKind kind) noexcept {
  switch (kind) {
    case PhiPlus: return "PhiPlus";
    case PhiMinus: return "PhiMinus";
    case PsiPlus: return "PsiPlus";
    case PsiMinus: return "PsiMinus";
  }
  return "?";
}

std::string_view to_string(BellClass cls) noexcept {
  return cls == BellClass::Phi ? "Phi" : "Psi";
}

std::string_view to_string(SwapOutcomeClass cls) noexcept {
  switch (cls) {
    case IDPlusPlus: return "ID++";
    case IDPlusMinus: return "ID+-";
    case RevPlusPlus: return "Rev++";
    case RevPlusMinus: return "Rev+-";
  }
  return "?";
}

}  // namespace mqdc::quantum
