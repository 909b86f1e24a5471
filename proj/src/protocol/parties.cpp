#include "mqdc/protocol/parties.hpp"

#include <algorithm>
#include <string>

namespace mqdc::protocol {

using quantum::BellClass;
using quantum::BellKind;

namespace {

constexpr std::uint64_t kRegisterStream = 0x5245'4749'5354'4552ULL;  // "REGISTER"

void require_in_range(std::span<const std::size_t> positions, std::size_t size, const char* what) {
  for (auto p : positions)
    if (p >= size)
      throw ProtocolError(std::string(what) + ": position " + std::to_string(p) +
                          " out of range (" + std::to_string(size) + " slots)");
}

}  // namespace

quantum::StateRegister& RegisterPool::create() {
  const auto ordinal = static_cast<std::uint64_t>(registers_.size());
  return registers_.emplace_back(derive_seed(seed_, kRegisterStream, ordinal));
}

std::string_view to_string(SlotStatus status) noexcept {
  switch (status) {
    case SlotStatus::Intact: return "intact";
    case SlotStatus::ConsumedByChannelCheck: return "consumed_by_channel_check";
    case SlotStatus::ConsumedBySwapCheck: return "consumed_by_swap_check";
    case SlotStatus::MessageCarrier: return "message_carrier";
  }
  return "?";
}

int infer_partner_bit(BellKind initiator_init, BellClass trent_class, int own_bit) {
  if (initiator_init != BellKind::PhiPlus && initiator_init != BellKind::PsiPlus)
    throw ProtocolError("initiator pairs are prepared as Phi+ or Psi+ only");
  const int init_flip = initiator_init == BellKind::PsiPlus ? 1 : 0;
  const int class_flip = trent_class == BellClass::Psi ? 1 : 0;
  return (own_bit & 1) ^ init_flip ^ class_flip;
}

// ---------------------------------------------------------------------------
// Trent

std::vector<LocatedQubit> Trent::prepare_authentication(const UserId& user, RegisterPool& pool) {
  const IdSequence& id = registry_.id_of(user);
  std::vector<LocatedQubit> checking, authentication;
  checking.reserve(id.size());
  authentication.reserve(id.size());
  for (std::size_t i = 0; i < id.size(); ++i) {
    auto& reg = pool.create();
    auto [keep, send] = reg.alloc_bell_pair(BellKind::PhiPlus);
    if (id[i] == 1) reg.apply_hadamard(send);
    checking.push_back({&reg, keep});
    authentication.push_back({&reg, send});
  }
  checking_[user] = std::move(checking);
  return authentication;
}

std::vector<bool> Trent::verify_authentication(const UserId& user, const Bits& announced) {
  const auto it = checking_.find(user);
  if (it == checking_.end()) throw ProtocolError("no authentication pending for '" + user + "'");
  auto& checking = it->second;
  if (announced.size() != checking.size())
    throw ProtocolError("announced " + std::to_string(announced.size()) + " outcomes, expected " +
                        std::to_string(checking.size()));
  std::vector<bool> mismatch(checking.size());
  for (std::size_t i = 0; i < checking.size(); ++i) {
    const int bit = checking[i].reg->measure_z(checking[i].ref);
    mismatch[i] = bit != announced[i];
  }
  checking_.erase(it);
  return mismatch;
}

void Trent::receive_sequence(const UserId& user, std::vector<LocatedQubit> qubits) {
  measured_[user].assign(qubits.size(), false);
  received_[user] = std::move(qubits);
}

Bits Trent::measure_check_positions(const UserId& user, std::span<const std::size_t> positions) {
  const auto it = received_.find(user);
  if (it == received_.end()) throw ProtocolError("no sequence received from '" + user + "'");
  auto& seq = it->second;
  auto& measured = measured_[user];
  require_in_range(positions, seq.size(), "channel check");
  Bits out;
  out.reserve(positions.size());
  for (auto p : positions) {
    if (measured[p]) throw ProtocolError("position " + std::to_string(p) + " already checked");
    measured[p] = true;
    out.push_back(static_cast<std::uint8_t>(seq[p].reg->measure_z(seq[p].ref)));
  }
  return out;
}

std::vector<BellKind> Trent::swap(const UserId& first, const UserId& second,
                                  std::span<const std::size_t> surviving,
                                  const std::optional<std::vector<BellKind>>& forced) {
  const auto a = received_.find(first);
  const auto b = received_.find(second);
  if (a == received_.end() || b == received_.end())
    throw ProtocolError("swap needs both users' sequences");
  if (a->second.size() != b->second.size())
    throw ProtocolError("A- and B-sequences differ in length");
  require_in_range(surviving, a->second.size(), "swap");
  if (forced && forced->size() != a->second.size())
    throw ProtocolError("forced Trent outcomes must cover every slot");

  std::vector<BellKind> kinds;
  kinds.reserve(surviving.size());
  for (auto p : surviving) {
    const LocatedQubit& qa = a->second[p];
    const LocatedQubit& qb = b->second[p];
    if (qa.reg != qb.reg) throw ProtocolError("slot qubits live in different registers");
    if (measured_[first][p] || measured_[second][p])
      throw ProtocolError("slot " + std::to_string(p) + " was consumed by a channel check");
    if (forced) {
      qa.reg->force_bell(qa.ref, qb.ref, (*forced)[p]);
      kinds.push_back((*forced)[p]);
    } else {
      kinds.push_back(qa.reg->measure_bell(qa.ref, qb.ref));
    }
  }
  return kinds;
}

// ---------------------------------------------------------------------------
// User

User::User(UserId id, IdSequence decoding_id, Role role, std::uint64_t seed)
    : id_(std::move(id)), decoding_id_(std::move(decoding_id)), role_(role), rng_(seed) {}

void User::expect(Phase phase, const char* operation) const {
  if (phase_ != phase) throw ProtocolError(std::string(operation) + " called out of order by '" + id_ + "'");
}

void User::expect_role(Role role, const char* operation) const {
  if (role_ != role)
    throw ProtocolError(std::string(operation) + " is not a " +
                        (role_ == Role::Initiator ? "initiator" : "responder") + " step");
}

void User::receive_authentication(std::vector<LocatedQubit> sequence) {
  expect(Phase::Registered, "receive_authentication");
  if (sequence.size() != decoding_id_.size())
    throw ProtocolError("authentication sequence length differs from ID length");
  auth_sequence_ = std::move(sequence);
  phase_ = Phase::AuthSequenceHeld;
}

Bits User::decode_and_measure() {
  expect(Phase::AuthSequenceHeld, "decode_and_measure");
  Bits out;
  out.reserve(auth_sequence_.size());
  for (std::size_t i = 0; i < auth_sequence_.size(); ++i) {
    auto& q = auth_sequence_[i];
    if (decoding_id_[i] == 1) q.reg->apply_hadamard(q.ref);
    out.push_back(static_cast<std::uint8_t>(q.reg->measure_z(q.ref)));
  }
  auth_sequence_.clear();
  phase_ = Phase::AuthAnnounced;
  return out;
}

std::vector<LocatedQubit> User::prepare_pairs(
    std::span<quantum::StateRegister* const> slot_registers,
    const std::optional<std::vector<BellKind>>& forced) {
  expect(Phase::AuthAnnounced, "prepare_pairs");
  if (slot_registers.empty()) throw ProtocolError("need at least one slot");
  if (forced && forced->size() != slot_registers.size())
    throw ProtocolError("forced initial states must cover every slot");

  std::vector<LocatedQubit> outgoing;
  outgoing.reserve(slot_registers.size());
  slots_.clear();
  slots_.reserve(slot_registers.size());
  for (std::size_t i = 0; i < slot_registers.size(); ++i) {
    BellKind init = BellKind::PhiPlus;
    if (role_ == Role::Initiator) {
      init = forced ? (*forced)[i] : (rng_.bit() ? BellKind::PsiPlus : BellKind::PhiPlus);
      if (init != BellKind::PhiPlus && init != BellKind::PsiPlus)
        throw ProtocolError("initiator pairs must be Phi+ or Psi+");
    }
    auto* reg = slot_registers[i];
    auto [send, keep] = reg->alloc_bell_pair(init);
    outgoing.push_back({reg, send});
    slots_.push_back(Slot{{reg, keep}, init, SlotStatus::Intact, std::nullopt, std::nullopt});
  }
  phase_ = Phase::PairsPrepared;
  return outgoing;
}

std::vector<std::size_t> User::choose_check_positions(std::size_t n) {
  expect(Phase::PairsPrepared, "choose_check_positions");
  return rng_.sample_without_replacement(slots_.size(), n);
}

int User::measure_retained(Slot& slot) {
  if (!slot.bit) slot.bit = slot.retained.reg->measure_z(slot.retained.ref);
  return *slot.bit;
}

std::vector<bool> User::check_channel(std::span<const std::size_t> positions,
                                      const Bits& trent_bits) {
  expect(Phase::PairsPrepared, "check_channel");
  if (positions.size() != trent_bits.size())
    throw ProtocolError("channel check: positions and outcomes differ in length");
  require_in_range(positions, slots_.size(), "channel check");
  std::vector<bool> errors(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    Slot& slot = slots_[positions[k]];
    if (slot.status != SlotStatus::Intact)
      throw ProtocolError("channel check reuses position " + std::to_string(positions[k]));
    const int own = measure_retained(slot);
    // Phi+ halves agree in sigma_z, Psi+ halves disagree.
    const int expected = own ^ (slot.init == BellKind::PsiPlus ? 1 : 0);
    errors[k] = expected != trent_bits[k];
    slot.status = SlotStatus::ConsumedByChannelCheck;
  }
  return errors;
}

void User::mark_channel_checked(std::span<const std::size_t> positions) {
  if (phase_ != Phase::PairsPrepared && phase_ != Phase::ChannelChecked)
    throw ProtocolError("mark_channel_checked called out of order by '" + id_ + "'");
  require_in_range(positions, slots_.size(), "channel check");
  for (auto p : positions) slots_[p].status = SlotStatus::ConsumedByChannelCheck;
  phase_ = Phase::ChannelChecked;
}

std::vector<std::size_t> User::surviving_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].status != SlotStatus::ConsumedByChannelCheck) out.push_back(i);
  return out;
}

std::vector<std::size_t> User::message_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots_.size(); ++i)
    if (slots_[i].status == SlotStatus::Intact || slots_[i].status == SlotStatus::MessageCarrier)
      out.push_back(i);
  return out;
}

void User::receive_swap_announcement(std::span<const BellClass> classes,
                                     const std::optional<Bits>& forced_bits) {
  expect(Phase::ChannelChecked, "receive_swap_announcement");
  const auto surviving = surviving_positions();
  if (classes.size() != surviving.size())
    throw ProtocolError("announcement covers " + std::to_string(classes.size()) +
                        " slots, expected " + std::to_string(surviving.size()));
  if (forced_bits && forced_bits->size() != slots_.size())
    throw ProtocolError("forced outcomes must cover every slot");
  for (std::size_t k = 0; k < surviving.size(); ++k) {
    Slot& slot = slots_[surviving[k]];
    slot.trent_class = classes[k];
    if (role_ == Role::Initiator) {
      if (forced_bits) {
        const int bit = (*forced_bits)[surviving[k]];
        slot.retained.reg->force_z(slot.retained.ref, bit);
        slot.bit = bit;
      } else {
        measure_retained(slot);
      }
    }
  }
  phase_ = Phase::Swapped;
}

std::vector<std::size_t> User::choose_swap_check_positions(std::size_t q) {
  expect(Phase::Swapped, "choose_swap_check_positions");
  expect_role(Role::Initiator, "choose_swap_check_positions");
  const auto surviving = surviving_positions();
  const auto picks = rng_.sample_without_replacement(surviving.size(), q);
  std::vector<std::size_t> out;
  out.reserve(picks.size());
  for (auto k : picks) out.push_back(surviving[k]);
  return out;
}

Bits User::measure_swap_check(std::span<const std::size_t> positions) {
  expect(Phase::Swapped, "measure_swap_check");
  expect_role(Role::Responder, "measure_swap_check");
  require_in_range(positions, slots_.size(), "swap check");
  Bits out;
  out.reserve(positions.size());
  for (auto p : positions) {
    Slot& slot = slots_[p];
    if (slot.status != SlotStatus::Intact)
      throw ProtocolError("swap check on unavailable position " + std::to_string(p));
    out.push_back(static_cast<std::uint8_t>(measure_retained(slot)));
  }
  return out;
}

std::vector<bool> User::compare_swap_check(std::span<const std::size_t> positions,
                                           const Bits& announced) {
  expect(Phase::Swapped, "compare_swap_check");
  expect_role(Role::Initiator, "compare_swap_check");
  if (positions.size() != announced.size())
    throw ProtocolError("swap check: positions and outcomes differ in length");
  require_in_range(positions, slots_.size(), "swap check");
  std::vector<bool> errors(positions.size());
  for (std::size_t k = 0; k < positions.size(); ++k) {
    const Slot& slot = slots_[positions[k]];
    if (slot.status != SlotStatus::Intact || !slot.trent_class || !slot.bit)
      throw ProtocolError("swap check on unavailable position " + std::to_string(positions[k]));
    errors[k] = infer_partner_bit(slot.init, *slot.trent_class, *slot.bit) != announced[k];
  }
  return errors;
}

void User::mark_swap_checked(std::span<const std::size_t> positions) {
  expect(Phase::Swapped, "mark_swap_checked");
  require_in_range(positions, slots_.size(), "swap check");
  for (auto p : positions) {
    if (slots_[p].status != SlotStatus::Intact)
      throw ProtocolError("swap check on unavailable position " + std::to_string(p));
    slots_[p].status = SlotStatus::ConsumedBySwapCheck;
  }
  for (auto& slot : slots_)
    if (slot.status == SlotStatus::Intact) slot.status = SlotStatus::MessageCarrier;
  phase_ = Phase::SwapChecked;
}

Bits User::flip_string(const Bits& message) {
  expect(Phase::SwapChecked, "flip_string");
  expect_role(Role::Initiator, "flip_string");
  const auto carriers = message_positions();
  if (carriers.size() != message.size())
    throw ProtocolError(std::to_string(carriers.size()) + " message slots for a " +
                        std::to_string(message.size()) + "-bit message");
  Bits flips(message.size());
  for (std::size_t k = 0; k < carriers.size(); ++k) {
    const Slot& slot = slots_[carriers[k]];
    flips[k] = static_cast<std::uint8_t>(
        infer_partner_bit(slot.init, *slot.trent_class, *slot.bit) ^ message[k]);
  }
  phase_ = Phase::Finished;
  return flips;
}

Bits User::decode(const Bits& flips) {
  expect(Phase::SwapChecked, "decode");
  expect_role(Role::Responder, "decode");
  const auto carriers = message_positions();
  if (carriers.size() != flips.size())
    throw ProtocolError(std::to_string(carriers.size()) + " message slots for " +
                        std::to_string(flips.size()) + " flip bits");
  Bits decoded(flips.size());
  for (std::size_t k = 0; k < carriers.size(); ++k)
    decoded[k] = static_cast<std::uint8_t>(measure_retained(slots_[carriers[k]]) ^ flips[k]);
  phase_ = Phase::Finished;
  return decoded;
}

}  // namespace mqdc::protocol
