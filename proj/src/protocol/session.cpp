#include "mqdc/protocol/session.hpp"

#include <algorithm>
#include <stdexcept>

#include "mqdc/adversary/adversary.hpp"

namespace mqdc::protocol {

using quantum::BellClass;
using quantum::BellKind;

namespace {

// Substream tags for derive_seed.
enum Stream : std::uint64_t {
  kRegisters = 1,
  kInitiator = 2,
  kResponder = 3,
  kMessage = 4,
  kAdversary = 5,
};

std::size_t count_errors(const std::vector<bool>& errors) {
  return static_cast<std::size_t>(std::count(errors.begin(), errors.end(), true));
}

void abort_session(RunReport& report, SessionContext& ctx, std::string step, std::string reason) {
  ctx.transcript().post(Abort{step, reason});
  report.aborted_at = std::move(step);
  report.abort_reason = std::move(reason);
}

}  // namespace

std::vector<std::string> SessionConfig::validate() const {
  std::vector<std::string> issues;
  if (id_length < 1) issues.emplace_back("N: must be >= 1");
  if (slot_count() < 1) issues.emplace_back("M + n + q: violates M + n + q ≥ 1");
  if (n_users < 2) issues.emplace_back("n_users: need at least 2 users");
  if (initiator == responder) issues.emplace_back("responder: must differ from initiator");
  if (message && message->size() != message_length)
    issues.emplace_back("message: length " + std::to_string(message->size()) +
                        " differs from M = " + std::to_string(message_length));
  const auto check_forced = [&](const char* field, std::size_t size) {
    if (size != slot_count())
      issues.emplace_back(std::string("forced.") + field + ": needs " +
                          std::to_string(slot_count()) + " entries");
  };
  if (forced.initiator_inits) {
    check_forced("initiator_inits", forced.initiator_inits->size());
    for (auto k : *forced.initiator_inits)
      if (k != BellKind::PhiPlus && k != BellKind::PsiPlus) {
        issues.emplace_back("forced.initiator_inits: only PhiPlus or PsiPlus allowed");
        break;
      }
  }
  if (forced.trent_kinds) check_forced("trent_kinds", forced.trent_kinds->size());
  if (forced.initiator_bits) check_forced("initiator_bits", forced.initiator_bits->size());
  if (const auto* ir = std::get_if<adversary::InterceptResend>(&attack))
    if (!(ir->fraction > 0.0 && ir->fraction <= 1.0))
      issues.emplace_back("attack.fraction: must lie in (0, 1]");
  if (const auto* imp = std::get_if<adversary::ImpersonateUser>(&attack)) {
    if (imp->target != initiator && imp->target != responder)
      issues.emplace_back("attack.target: must be the initiator or the responder");
    if (imp->guessed_id && imp->guessed_id->size() != id_length)
      issues.emplace_back("attack.guessed_id: length must equal N");
  }
  return issues;
}

bool RunReport::all_authenticated() const {
  return auth_passed.size() == 2 &&
         std::all_of(auth_passed.begin(), auth_passed.end(), [](const auto& e) { return e.second; });
}

SessionContext::SessionContext(std::uint64_t seed, SessionAdversary* adversary, ForcedChoices forced)
    : pool_(derive_seed(seed, kRegisters)), adversary_(adversary), forced_(std::move(forced)) {}

void SessionContext::transmit(const Transit& transit, const LocatedQubit& qubit) {
  if (adversary_) adversary_->on_transit(transit, *qubit.reg, qubit.ref);
}

std::optional<IdSequence> SessionContext::impersonated_id(const UserId& user, std::size_t id_length) {
  return adversary_ ? adversary_->impersonated_id(user, id_length) : std::nullopt;
}

bool authenticate(SessionContext& ctx, Trent& trent, User& user) {
  auto sequence = trent.prepare_authentication(user.id(), ctx.pool());
  for (std::size_t i = 0; i < sequence.size(); ++i)
    ctx.transmit(Transit{ChannelLeg::Auth, user.id(), i}, sequence[i]);
  user.receive_authentication(std::move(sequence));

  Bits outcomes = user.decode_and_measure();
  ctx.transcript().post(AuthOutcomes{user.id(), outcomes});

  const auto mismatch = trent.verify_authentication(user.id(), outcomes);
  // Ground truth for statistics is always the registered ID.
  const IdSequence& id = trent.registry().id_of(user.id());
  for (std::size_t i = 0; i < mismatch.size(); ++i)
    ctx.checks().push_back(
        CheckRecord{CheckPhase::Authentication, user.id(), i, id[i], mismatch[i]});
  const bool pass = count_errors(mismatch) == 0;
  ctx.transcript().post(AuthVerdict{user.id(), pass});
  return pass;
}

std::vector<PairSlot> prepare_pairs(SessionContext& ctx, Trent& trent, User& initiator,
                                    User& responder, std::size_t count) {
  if (count == 0) throw ProtocolError("prepare_pairs: need at least one slot");
  auto& registers = ctx.slot_registers();
  registers.clear();
  for (std::size_t i = 0; i < count; ++i) registers.push_back(&ctx.pool().create());

  // Register layout per slot: (T_A, A, T_B, B).
  auto a_sequence = initiator.prepare_pairs(registers, ctx.forced().initiator_inits);
  auto b_sequence = responder.prepare_pairs(registers, std::nullopt);
  for (std::size_t i = 0; i < count; ++i)
    ctx.transmit(Transit{ChannelLeg::ASequence, initiator.id(), i}, a_sequence[i]);
  for (std::size_t i = 0; i < count; ++i)
    ctx.transmit(Transit{ChannelLeg::BSequence, responder.id(), i}, b_sequence[i]);
  trent.receive_sequence(initiator.id(), std::move(a_sequence));
  trent.receive_sequence(responder.id(), std::move(b_sequence));

  std::vector<PairSlot> slots;
  slots.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    slots.push_back(PairSlot{i, initiator.slots()[i].init, SlotStatus::Intact, {}, {}, {}});
  return slots;
}

std::size_t channel_check(SessionContext& ctx, User& checker, Trent& trent,
                          std::span<const std::size_t> positions) {
  const Bits trent_bits = trent.measure_check_positions(checker.id(), positions);
  ctx.transcript().post(
      CheckOutcomes{checker.id(), std::vector<std::size_t>(positions.begin(), positions.end()), trent_bits});
  const auto errors = checker.check_channel(positions, trent_bits);
  for (std::size_t k = 0; k < positions.size(); ++k)
    ctx.checks().push_back(
        CheckRecord{CheckPhase::ChannelCheck, checker.id(), positions[k], std::nullopt, errors[k]});
  return count_errors(errors);
}

std::pair<SwapAnnouncement, std::vector<BellKind>> swap_and_announce(SessionContext& ctx, Trent& trent,
                                                                     User& initiator, User& responder) {
  const auto surviving = initiator.surviving_positions();
  if (surviving != responder.surviving_positions())
    throw ProtocolError("initiator and responder disagree on surviving slots");
  auto kinds = trent.swap(initiator.id(), responder.id(), surviving, ctx.forced().trent_kinds);
  SwapAnnouncement announcement;
  announcement.classes.reserve(kinds.size());
  for (auto k : kinds) announcement.classes.push_back(quantum::bell_class(k));
  ctx.transcript().post(announcement);
  return {announcement, std::move(kinds)};
}

std::size_t swap_check(SessionContext& ctx, User& initiator, User& responder,
                       std::span<const std::size_t> positions) {
  const Bits announced = responder.measure_swap_check(positions);
  ctx.transcript().post(
      SwapCheckOutcomes{std::vector<std::size_t>(positions.begin(), positions.end()), announced});
  const auto errors = initiator.compare_swap_check(positions, announced);
  for (std::size_t k = 0; k < positions.size(); ++k)
    ctx.checks().push_back(
        CheckRecord{CheckPhase::SwapCheck, responder.id(), positions[k], std::nullopt, errors[k]});
  initiator.mark_swap_checked(positions);
  responder.mark_swap_checked(positions);
  return count_errors(errors);
}

Bits encode_and_deliver(SessionContext& ctx, User& initiator, User& responder, const Bits& message) {
  const Bits flips = initiator.flip_string(message);
  ctx.transcript().post(FlipAnnouncement{flips});
  return responder.decode(flips);
}

RunReport run_session(const SessionConfig& config, const UserRegistry& registry) {
  auto adversary = adversary::make_adversary(config.attack, derive_seed(config.seed, kAdversary));
  return run_session(config, registry, adversary.get());
}

RunReport run_session(const SessionConfig& config, const UserRegistry& registry,
                      SessionAdversary* adversary) {
  if (auto issues = config.validate(); !issues.empty())
    throw std::invalid_argument("invalid session config: " + issues.front());
  for (const auto* user : {&config.initiator, &config.responder})
    if (!registry.contains(*user)) throw std::invalid_argument("unknown user '" + *user + "'");
  if (registry.id_length() != config.id_length)
    throw std::invalid_argument("registry ID length differs from N");

  RunReport report;
  SessionContext ctx(config.seed, adversary, config.forced);

  if (config.message) {
    report.sent_message = *config.message;
  } else {
    DeterministicRng message_rng(derive_seed(config.seed, kMessage));
    report.sent_message.resize(config.message_length);
    for (auto& b : report.sent_message) b = static_cast<std::uint8_t>(message_rng.bit());
  }

  const auto make_user = [&](const UserId& id, Role role, std::uint64_t stream) {
    auto decoding = ctx.impersonated_id(id, config.id_length).value_or(registry.id_of(id));
    return User(id, std::move(decoding), role, derive_seed(config.seed, stream));
  };
  User initiator = make_user(config.initiator, Role::Initiator, kInitiator);
  User responder = make_user(config.responder, Role::Responder, kResponder);
  Trent trent(registry);

  const auto finish = [&]() -> RunReport {
    report.transcript = std::move(ctx.transcript());
    report.checks = std::move(ctx.checks());
    if (adversary) adversary->on_session_end(report);
    return std::move(report);
  };

  // A.0-A.6, initiator first.
  ctx.transcript().post(AuthRequest{config.initiator, config.responder});
  for (User* user : {&initiator, &responder}) {
    const bool pass = authenticate(ctx, trent, *user);
    report.auth_passed.emplace_back(user->id(), pass);
    if (!pass) {
      abort_session(report, ctx, "A.6", "authentication failed for '" + user->id() + "'");
      return finish();
    }
  }

  // C.1-C.2.
  report.slots = prepare_pairs(ctx, trent, initiator, responder, config.slot_count());
  report.trent_kinds.assign(config.slot_count(), std::nullopt);

  const auto sync_slots = [&] {
    for (std::size_t i = 0; i < report.slots.size(); ++i) {
      const auto& a = initiator.slots()[i];
      const auto& b = responder.slots()[i];
      auto& slot = report.slots[i];
      slot.status = a.status;
      slot.trent_class = a.trent_class;
      slot.initiator_bit = a.bit;
      slot.responder_bit = b.bit;
    }
  };

  // C.3: the initiator's positions are announced once and checked on both links.
  const auto positions = initiator.choose_check_positions(config.channel_checks);
  ctx.transcript().post(CheckPositions{initiator.id(), positions});
  std::size_t c3_errors = channel_check(ctx, initiator, trent, positions);
  c3_errors += channel_check(ctx, responder, trent, positions);
  initiator.mark_channel_checked(positions);
  responder.mark_channel_checked(positions);
  report.channel_check = ErrorCount{c3_errors, 2 * positions.size()};
  if (c3_errors > 0) {
    sync_slots();
    abort_session(report, ctx, "C.3",
                  std::to_string(c3_errors) + " channel-check disagreements");
    return finish();
  }

  // C.4.
  const auto surviving = initiator.surviving_positions();
  auto [announcement, kinds] = swap_and_announce(ctx, trent, initiator, responder);
  for (std::size_t k = 0; k < surviving.size(); ++k) report.trent_kinds[surviving[k]] = kinds[k];
  initiator.receive_swap_announcement(announcement.classes, config.forced.initiator_bits);
  responder.receive_swap_announcement(announcement.classes, std::nullopt);

  // C.5.
  const auto swap_positions = initiator.choose_swap_check_positions(config.swap_checks);
  ctx.transcript().post(SwapCheckPositions{swap_positions});
  const std::size_t c5_errors = swap_check(ctx, initiator, responder, swap_positions);
  report.swap_check = ErrorCount{c5_errors, swap_positions.size()};
  if (c5_errors > 0) {
    sync_slots();
    abort_session(report, ctx, "C.5", std::to_string(c5_errors) + " swap-check disagreements");
    return finish();
  }

  // C.6.
  report.delivered_message = encode_and_deliver(ctx, initiator, responder, report.sent_message);
  sync_slots();
  return finish();
}

}  // namespace mqdc::protocol
