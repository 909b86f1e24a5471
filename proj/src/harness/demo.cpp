#include "mqdc/harness/demo.hpp"

namespace mqdc::harness {

using quantum::BellKind;

protocol::SessionConfig worked_example_config() {
  protocol::SessionConfig config;
  config.n_users = 2;
  config.id_length = 4;
  config.message_length = 3;
  config.channel_checks = 0;
  config.swap_checks = 0;
  config.seed = 0;
  config.initiator = "alice";
  config.responder = "bob";
  config.message = parse_bits("101");
  config.forced.initiator_inits =
      std::vector<BellKind>{BellKind::PhiPlus, BellKind::PhiPlus, BellKind::PsiPlus};
  config.forced.trent_kinds =
      std::vector<BellKind>{BellKind::PhiPlus, BellKind::PsiPlus, BellKind::PsiPlus};
  config.forced.initiator_bits = parse_bits("001");
  return config;
}

protocol::UserRegistry worked_example_registry() {
  protocol::UserRegistry registry;
  registry.add("alice", protocol::IdSequence(parse_bits("1011")));
  registry.add("bob", protocol::IdSequence(parse_bits("0110")));
  return registry;
}

WorkedExample run_worked_example() {
  WorkedExample ex{worked_example_config(), worked_example_registry(), {}, {}};
  ex.report = protocol::run_session(ex.config, ex.registry);
  for (const auto& slot : ex.report.slots) {
    if (slot.status != protocol::SlotStatus::MessageCarrier) continue;
    ex.inferred_responder_bits.push_back(static_cast<std::uint8_t>(
        protocol::infer_partner_bit(slot.initiator_init, *slot.trent_class, *slot.initiator_bit)));
  }
  return ex;
}

}  // namespace mqdc::harness
