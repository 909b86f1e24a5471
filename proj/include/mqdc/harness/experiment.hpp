#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mqdc/adversary/attack_model.hpp"
#include "mqdc/harness/config.hpp"
#include "mqdc/protocol/messages.hpp"

namespace mqdc::harness {

/// trial seed = derive_seed(base seed, scenario ordinal + 1, trial ordinal)
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t scenario, std::size_t trial) noexcept;

/// Abort steps reported separately, in this order.
inline constexpr std::array<const char*, 3> kAbortSteps = {"A.6", "C.3", "C.5"};

/// What one trial contributes to the aggregates.
struct TrialSummary {
  std::uint64_t seed = 0;
  bool authenticated = false;
  std::size_t auth_checked = 0;
  std::size_t auth_mismatches = 0;
  std::size_t channel_errors = 0;
  std::size_t channel_total = 0;
  std::size_t swap_errors = 0;
  std::size_t swap_total = 0;
  std::optional<std::string> aborted_at;
  bool delivered_exact = false;
  bool eve_attempted = false;
  bool eve_exact = false;
  std::size_t eve_bits_correct = 0;
  std::size_t eve_bits_total = 0;
  adversary::AttackReport attack;
  std::optional<protocol::Transcript> transcript;
};

struct ScenarioStats {
  std::string label;
  adversary::AttackModel attack;
  std::size_t trials = 0;
  double auth_pass_rate = 0.0;
  double auth_qubit_mismatch_rate = 0.0;
  double channel_check_error_rate = 0.0;
  double swap_check_error_rate = 0.0;
  std::array<double, kAbortSteps.size()> abort_rate{};
  double message_fidelity = 0.0;
  std::size_t eve_reconstructions = 0;
  /// Trials in which the eavesdropper's reconstruction equals the message.
  double eve_recovery_rate = 0.0;
  /// Correct bits over all reconstructed bits.
  double eve_bit_accuracy = 0.0;
  std::size_t intercepted_qubits = 0;
  adversary::DetectionTally tapped_auth_id0;
  adversary::DetectionTally tapped_auth_id1;
  adversary::DetectionTally tapped_channel_check;
  adversary::DetectionTally tapped_swap_check;
  /// Wall clock; printed, never written to the report.
  double duration_seconds = 0.0;
  /// Per-trial transcripts, when the spec asks for them.
  std::vector<std::pair<std::uint64_t, protocol::Transcript>> transcripts;
};

struct ExperimentResult {
  std::vector<ScenarioStats> scenarios;
};

struct RunOptions {
  /// Worker threads; 0 picks hardware concurrency.
  unsigned jobs = 0;
};

/// trials x scenarios sessions. Protocol aborts are data, not failures.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

/// Aggregation, exposed for tests. Order-independent except for transcripts.
ScenarioStats aggregate(const Scenario& scenario, const std::vector<TrialSummary>& trials);

}  // namespace mqdc::harness
