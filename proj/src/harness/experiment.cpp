#include "mqdc/harness/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "mqdc/protocol/session.hpp"

namespace mqdc::harness {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

TrialSummary summarize(const protocol::RunReport& report, std::uint64_t seed, bool keep_transcript) {
  TrialSummary t;
  t.seed = seed;
  t.authenticated = report.all_authenticated();
  for (const auto& c : report.checks) {
    if (c.phase != protocol::CheckPhase::Authentication) continue;
    ++t.auth_checked;
    if (c.error) ++t.auth_mismatches;
  }
  t.channel_errors = report.channel_check.errors;
  t.channel_total = report.channel_check.total;
  t.swap_errors = report.swap_check.errors;
  t.swap_total = report.swap_check.total;
  t.aborted_at = report.aborted_at;
  t.delivered_exact = report.delivered_message && *report.delivered_message == report.sent_message;
  if (report.eve_recovered_message) {
    const auto& guess = *report.eve_recovered_message;
    t.eve_attempted = true;
    t.eve_exact = guess == report.sent_message;
    t.eve_bits_total = guess.size();
    for (std::size_t i = 0; i < guess.size() && i < report.sent_message.size(); ++i)
      if (guess[i] == report.sent_message[i]) ++t.eve_bits_correct;
  }
  if (report.attack) t.attack = *report.attack;
  if (keep_transcript) t.transcript = report.transcript;
  return t;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t scenario, std::size_t trial) noexcept {
  return derive_seed(base_seed, static_cast<std::uint64_t>(scenario) + 1,
                     static_cast<std::uint64_t>(trial));
}

ScenarioStats aggregate(const Scenario& scenario, const std::vector<TrialSummary>& trials) {
  ScenarioStats s;
  s.label = scenario.label;
  s.attack = scenario.attack;
  s.trials = trials.size();
  std::size_t authenticated = 0, delivered = 0, eve_exact = 0;
  std::size_t auth_checked = 0, auth_mismatches = 0;
  std::size_t c3_err = 0, c3_tot = 0, c5_err = 0, c5_tot = 0;
  std::size_t eve_correct = 0, eve_total = 0;
  std::array<std::size_t, kAbortSteps.size()> aborts{};
  for (const auto& t : trials) {
    if (t.authenticated) ++authenticated;
    if (t.delivered_exact) ++delivered;
    auth_checked += t.auth_checked;
    auth_mismatches += t.auth_mismatches;
    c3_err += t.channel_errors;
    c3_tot += t.channel_total;
    c5_err += t.swap_errors;
    c5_tot += t.swap_total;
    if (t.aborted_at)
      for (std::size_t k = 0; k < kAbortSteps.size(); ++k)
        if (*t.aborted_at == kAbortSteps[k]) ++aborts[k];
    if (t.eve_attempted) {
      ++s.eve_reconstructions;
      if (t.eve_exact) ++eve_exact;
      eve_correct += t.eve_bits_correct;
      eve_total += t.eve_bits_total;
    }
    s.intercepted_qubits += t.attack.intercepted_count;
    s.tapped_auth_id0 += t.attack.auth_id0;
    s.tapped_auth_id1 += t.attack.auth_id1;
    s.tapped_channel_check += t.attack.channel_check;
    s.tapped_swap_check += t.attack.swap_check;
    if (t.transcript) s.transcripts.emplace_back(t.seed, *t.transcript);
  }
  s.auth_pass_rate = ratio(authenticated, s.trials);
  s.auth_qubit_mismatch_rate = ratio(auth_mismatches, auth_checked);
  s.channel_check_error_rate = ratio(c3_err, c3_tot);
  s.swap_check_error_rate = ratio(c5_err, c5_tot);
  for (std::size_t k = 0; k < kAbortSteps.size(); ++k) s.abort_rate[k] = ratio(aborts[k], s.trials);
  s.message_fidelity = ratio(delivered, s.trials);
  s.eve_recovery_rate = ratio(eve_exact, s.trials);
  s.eve_bit_accuracy = ratio(eve_correct, eve_total);
  return s;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  const auto registry = build_registry(spec);
  unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, spec.trials));

  ExperimentResult result;
  for (std::size_t si = 0; si < spec.scenarios.size(); ++si) {
    const auto& scenario = spec.scenarios[si];
    const auto start = std::chrono::steady_clock::now();
    std::vector<TrialSummary> summaries(spec.trials);

    const auto work = [&](unsigned worker) {
      for (std::size_t t = worker; t < spec.trials; t += jobs) {
        protocol::SessionConfig config = spec.base;
        config.seed = trial_seed(spec.base.seed, si, t);
        config.attack = scenario.attack;
        const auto report = protocol::run_session(config, registry);
        summaries[t] = summarize(report, config.seed, spec.emit_transcripts);
      }
    };
    if (jobs <= 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(jobs);
      for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    }

    auto stats = aggregate(scenario, summaries);
    stats.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.scenarios.push_back(std::move(stats));
  }
  return result;
}

}  // namespace mqdc::harness
