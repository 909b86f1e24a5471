// mqdc: batch runner for the authenticated multiuser QDC simulator.
//
//   mqdc run <config> [--seed S] [--trials T] [--out PATH] [--debug-unsafe]
//   mqdc validate <config>
//   mqdc demo [--debug-unsafe]
//
// Exit codes: 0 success, 2 config or usage error, 3 I/O error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mqdc/harness/config.hpp"
#include "mqdc/harness/demo.hpp"
#include "mqdc/harness/experiment.hpp"
#include "mqdc/harness/report.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

using namespace mqdc;

void print_config_error(const harness::ConfigError& e) {
  std::cerr << "config error:\n";
  for (const auto& issue : e.issues()) std::cerr << "  " << issue << "\n";
}

std::string describe(const protocol::ClassicalMessage& message) {
  const auto json = harness::transcript_to_json([&] {
    protocol::Transcript t;
    t.post(message);
    return t;
  }());
  return json[0].dump();
}

void print_secrets(const protocol::UserRegistry& registry, const protocol::SessionConfig& config) {
  std::cout << "[debug-unsafe] ID(" << config.initiator << ") = "
            << to_string(registry.id_of(config.initiator).bits()) << "\n";
  std::cout << "[debug-unsafe] ID(" << config.responder << ") = "
            << to_string(registry.id_of(config.responder).bits()) << "\n";
}

int cmd_demo(bool debug_unsafe) {
  const auto ex = harness::run_worked_example();
  const auto& report = ex.report;
  std::cout << "worked example: " << ex.config.initiator << " -> " << ex.config.responder
            << ", M=" << ex.config.message_length << ", n=0, q=0\n\n";
  if (debug_unsafe) {
    print_secrets(ex.registry, ex.config);
    std::cout << "[debug-unsafe] initiator states:";
    for (const auto& slot : report.slots) std::cout << ' ' << quantum::to_string(slot.initiator_init);
    std::cout << "\n[debug-unsafe] Trent Bell outcomes:";
    for (const auto& kind : report.trent_kinds)
      std::cout << ' ' << (kind ? quantum::to_string(*kind) : "-");
    std::cout << "\n[debug-unsafe] initiator outcomes: ";
    for (const auto& slot : report.slots) std::cout << (slot.initiator_bit ? char('0' + *slot.initiator_bit) : '-');
    std::cout << "\n[debug-unsafe] inferred responder outcomes: " << to_string(ex.inferred_responder_bits)
              << "\n[debug-unsafe] message: " << to_string(report.sent_message) << "\n\n";
  }
  std::cout << "public transcript:\n";
  std::size_t step = 1;
  for (const auto& m : report.transcript.messages())
    std::cout << "  " << step++ << ". " << describe(m) << "\n";
  std::cout << "\n";
  if (report.aborted_at) {
    std::cout << "aborted at " << *report.aborted_at << ": " << report.abort_reason << "\n";
    return 1;
  }
  if (const auto* flips = report.transcript.last_of<protocol::FlipAnnouncement>())
    std::cout << "flip announcement: " << to_string(flips->bits) << "\n";
  std::cout << "responder decoded: " << to_string(*report.delivered_message) << "\n";
  return 0;
}

void print_summary(const harness::ExperimentResult& result) {
  for (const auto& s : result.scenarios) {
    std::printf("%-24s trials=%zu auth_pass=%.6f c3_err=%.6f c5_err=%.6f fidelity=%.6f eve_recovery=%.6f (%.2fs)\n",
                s.label.c_str(), s.trials, s.auth_pass_rate, s.channel_check_error_rate,
                s.swap_check_error_rate, s.message_fidelity, s.eve_recovery_rate, s.duration_seconds);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Authenticated multiuser quantum direct communication simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::size_t> trials_override;
  std::optional<std::string> out_override;
  bool debug_unsafe = false;

  auto* run = app.add_subcommand("run", "Run an experiment config and write the report");
  run->add_option("config", config_path, "Experiment config (JSON)")->required();
  run->add_option("--seed", seed_override, "Override the base seed");
  run->add_option("--trials", trials_override, "Override the trial count");
  run->add_option("--out", out_override, "Report path");
  run->add_flag("--debug-unsafe", debug_unsafe, "Print secret material (IDs)");

  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config_path, "Experiment config (JSON)")->required();

  auto* demo = app.add_subcommand("demo", "Replay the three-bit worked example");
  demo->add_flag("--debug-unsafe", debug_unsafe, "Print initiator states and inferred bits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*demo) return cmd_demo(debug_unsafe);

  harness::ExperimentSpec spec;
  try {
    spec = harness::load_config(config_path);
    if (seed_override) spec.base.seed = *seed_override;
    if (trials_override) {
      if (*trials_override < 1) throw harness::ConfigError({"--trials: must be >= 1"});
      spec.trials = *trials_override;
    }
    if (out_override) spec.output_path = *out_override;
  } catch (const harness::ConfigError& e) {
    print_config_error(e);
    return kExitConfig;
  }

  if (*validate) {
    std::cout << "config OK: " << spec.scenarios.size() << " scenario(s), " << spec.trials
              << " trial(s) each\n";
    return 0;
  }

  const auto path = harness::resolve_output_path(spec.output_path);
  if (debug_unsafe) print_secrets(harness::build_registry(spec), spec.base);
  const auto result = harness::run_experiment(spec);
  try {
    harness::emit_report(result, spec, path);
  } catch (const harness::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  print_summary(result);
  std::cout << "report written to " << path.string() << "\n";
  return 0;
}
