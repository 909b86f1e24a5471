#include "mqdc/adversary/adversary.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "mqdc/protocol/session.hpp"

namespace mqdc::adversary {

using protocol::ChannelLeg;
using protocol::CheckPhase;
using protocol::RunReport;
using protocol::Transit;
using quantum::BellClass;

namespace {

class PassiveAdversary final : public protocol::SessionAdversary {};

class InterceptResendAdversary final : public protocol::SessionAdversary {
 public:
  InterceptResendAdversary(InterceptResend model, std::uint64_t seed) : model_(model), rng_(seed) {}

  void on_transit(const Transit& transit, quantum::StateRegister& reg, quantum::QubitRef q) override {
    if (transit.leg != model_.leg) return;
    if (model_.fraction < 1.0 && !(rng_.uniform() < model_.fraction)) return;
    tap_intercept_resend(reg, q, model_.basis, transit, book_);
  }

  void on_session_end(RunReport& report) override {
    AttackReport attack = tally_detection(book_, report.checks);
    if (model_.leg == ChannelLeg::ASequence && model_.basis == TapBasis::Z) {
      attack.recovered_message = reconstruct_message(book_, report.transcript);
      attack.recovery_method = "sigma_z records on the A-sequence + Bell classes + flip string";
    }
    report.eve_recovered_message = attack.recovered_message;
    report.attack = std::move(attack);
  }

 private:
  InterceptResend model_;
  DeterministicRng rng_;
  std::vector<InterceptRecord> book_;
};

class Impersonator final : public protocol::SessionAdversary {
 public:
  Impersonator(ImpersonateUser model, std::uint64_t seed) : model_(std::move(model)), rng_(seed) {}

  std::optional<protocol::IdSequence> impersonated_id(const protocol::UserId& user,
                                                      std::size_t id_length) override {
    if (user != model_.target) return std::nullopt;
    if (model_.guessed_id) return protocol::IdSequence(*model_.guessed_id);
    return protocol::IdSequence::random(id_length, rng_);
  }

  void on_session_end(RunReport& report) override { report.attack = AttackReport{}; }

 private:
  ImpersonateUser model_;
  DeterministicRng rng_;
};

class TrentReader final : public protocol::SessionAdversary {
 public:
  void on_session_end(RunReport& report) override {
    AttackReport attack;
    attack.recovered_message = reconstruct_as_trent(report.trent_kinds, report.transcript);
    attack.recovery_method = "Bell classes + flip string, initiator state unknown";
    report.eve_recovered_message = attack.recovered_message;
    report.attack = std::move(attack);
  }
};

}  // namespace

std::unique_ptr<protocol::SessionAdversary> make_adversary(const AttackModel& attack,
                                                           std::uint64_t seed) {
  struct Factory {
    std::uint64_t seed;
    std::unique_ptr<protocol::SessionAdversary> operator()(const NoAttack&) const {
      return std::make_unique<PassiveAdversary>();
    }
    std::unique_ptr<protocol::SessionAdversary> operator()(const InterceptResend& a) const {
      return std::make_unique<InterceptResendAdversary>(a, seed);
    }
    std::unique_ptr<protocol::SessionAdversary> operator()(const ImpersonateUser& a) const {
      return std::make_unique<Impersonator>(a, seed);
    }
    std::unique_ptr<protocol::SessionAdversary> operator()(const TrentReads&) const {
      return std::make_unique<TrentReader>();
    }
  };
  return std::visit(Factory{seed}, attack);
}

int tap_intercept_resend(quantum::StateRegister& reg, quantum::QubitRef q, TapBasis basis,
                         const Transit& transit, std::vector<InterceptRecord>& book) {
  int outcome = 0;
  if (basis == TapBasis::X) {
    reg.apply_hadamard(q);
    outcome = reg.measure_z(q);
    reg.apply_hadamard(q);
  } else {
    outcome = reg.measure_z(q);
  }
  book.push_back(InterceptRecord{transit.leg, transit.user, transit.position, outcome});
  return outcome;
}

std::optional<PublicView> public_view(const protocol::Transcript& transcript) {
  PublicView view;
  const protocol::SwapCheckPositions* swap_positions = nullptr;
  const protocol::FlipAnnouncement* flips = nullptr;
  const protocol::SwapAnnouncement* announcement = nullptr;
  for (const auto& message : transcript.messages()) {
    if (const auto* m = std::get_if<protocol::CheckPositions>(&message))
      view.check_positions.insert(view.check_positions.end(), m->positions.begin(), m->positions.end());
    else if (const auto* a = std::get_if<protocol::SwapAnnouncement>(&message))
      announcement = a;
    else if (const auto* s = std::get_if<protocol::SwapCheckPositions>(&message))
      swap_positions = s;
    else if (const auto* f = std::get_if<protocol::FlipAnnouncement>(&message))
      flips = f;
  }
  if (!announcement || !swap_positions || !flips) return std::nullopt;

  std::sort(view.check_positions.begin(), view.check_positions.end());
  view.check_positions.erase(std::unique(view.check_positions.begin(), view.check_positions.end()),
                             view.check_positions.end());
  view.slot_count = announcement->classes.size() + view.check_positions.size();
  view.classes = announcement->classes;
  for (std::size_t i = 0; i < view.slot_count; ++i)
    if (!std::binary_search(view.check_positions.begin(), view.check_positions.end(), i))
      view.surviving.push_back(i);
  for (auto p : view.surviving)
    if (!std::binary_search(swap_positions->positions.begin(), swap_positions->positions.end(), p))
      view.message_positions.push_back(p);
  view.flips = flips->bits;
  if (view.flips.size() != view.message_positions.size()) return std::nullopt;
  return view;
}

namespace {

BellClass class_at(const PublicView& view, std::size_t slot) {
  const auto it = std::lower_bound(view.surviving.begin(), view.surviving.end(), slot);
  return view.classes[static_cast<std::size_t>(it - view.surviving.begin())];
}

}  // namespace

std::optional<Bits> reconstruct_message(const std::vector<InterceptRecord>& book,
                                        const protocol::Transcript& transcript) {
  const auto view = public_view(transcript);
  if (!view) return std::nullopt;
  std::vector<std::optional<int>> tapped(view->slot_count);
  for (const auto& r : book)
    if (r.leg == ChannelLeg::ASequence && r.position < tapped.size()) tapped[r.position] = r.outcome;

  Bits message(view->message_positions.size());
  for (std::size_t k = 0; k < view->message_positions.size(); ++k) {
    const auto slot = view->message_positions[k];
    if (!tapped[slot]) return std::nullopt;
    const int responder_bit = *tapped[slot] ^ (class_at(*view, slot) == BellClass::Psi ? 1 : 0);
    message[k] = static_cast<std::uint8_t>(responder_bit ^ view->flips[k]);
  }
  return message;
}

std::optional<Bits> reconstruct_as_trent(
    const std::vector<std::optional<quantum::BellKind>>& trent_kinds,
    const protocol::Transcript& transcript) {
  const auto view = public_view(transcript);
  if (!view || trent_kinds.size() != view->slot_count) return std::nullopt;
  Bits message(view->message_positions.size());
  for (std::size_t k = 0; k < view->message_positions.size(); ++k) {
    const auto& kind = trent_kinds[view->message_positions[k]];
    if (!kind) return std::nullopt;
    const int responder_guess = quantum::bell_class(*kind) == BellClass::Psi ? 1 : 0;
    message[k] = static_cast<std::uint8_t>(responder_guess ^ view->flips[k]);
  }
  return message;
}

AttackReport tally_detection(const std::vector<InterceptRecord>& book,
                             const std::vector<protocol::CheckRecord>& checks) {
  AttackReport report;
  report.intercepted_count = book.size();
  std::set<std::tuple<ChannelLeg, std::string, std::size_t>> tapped;
  std::set<std::size_t> tapped_slots;
  for (const auto& r : book) {
    tapped.emplace(r.leg, r.user, r.position);
    if (r.leg != ChannelLeg::Auth) tapped_slots.insert(r.position);
  }
  const auto count = [](DetectionTally& t, bool error) {
    ++t.checked;
    if (error) ++t.errors;
  };
  for (const auto& c : checks) {
    switch (c.phase) {
      case CheckPhase::Authentication:
        if (tapped.contains({ChannelLeg::Auth, c.user, c.position}))
          count(c.id_bit.value_or(0) == 1 ? report.auth_id1 : report.auth_id0, c.error);
        break;
      case CheckPhase::ChannelCheck:
        if (tapped.contains({ChannelLeg::ASequence, c.user, c.position}) ||
            tapped.contains({ChannelLeg::BSequence, c.user, c.position}))
          count(report.channel_check, c.error);
        break;
      case CheckPhase::SwapCheck:
        if (tapped_slots.contains(c.position)) count(report.swap_check, c.error);
        break;
    }
  }
  return report;
}

bool impersonation_attempt(const protocol::UserRegistry& trent_registry,
                           const protocol::UserId& target, const protocol::IdSequence& guessed_id,
                           std::uint64_t seed) {
  protocol::SessionContext ctx(seed, nullptr);
  protocol::Trent trent(trent_registry);
  protocol::User impostor(target, guessed_id, protocol::Role::Initiator, derive_seed(seed, 1));
  return protocol::authenticate(ctx, trent, impostor);
}

}  // namespace mqdc::adversary
