#include "mqdc/harness/report.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

namespace mqdc::harness {

using nlohmann::json;
using nlohmann::ordered_json;
using quantum::BellClass;

namespace {

ordered_json positions_json(const std::vector<std::size_t>& positions) {
  ordered_json out = ordered_json::array();
  for (auto p : positions) out.push_back(p);
  return out;
}

struct ToJson {
  ordered_json operator()(const protocol::AuthRequest& m) const {
    return {{"type", "AuthRequest"}, {"initiator", m.initiator}, {"responder", m.responder}};
  }
  ordered_json operator()(const protocol::AuthOutcomes& m) const {
    return {{"type", "AuthOutcomes"}, {"user", m.user}, {"bits", to_string(m.bits)}};
  }
  ordered_json operator()(const protocol::AuthVerdict& m) const {
    return {{"type", "AuthVerdict"}, {"user", m.user}, {"pass", m.pass}};
  }
  ordered_json operator()(const protocol::CheckPositions& m) const {
    return {{"type", "CheckPositions"}, {"chooser", m.chooser}, {"positions", positions_json(m.positions)}};
  }
  ordered_json operator()(const protocol::CheckOutcomes& m) const {
    return {{"type", "CheckOutcomes"},
            {"user", m.user},
            {"positions", positions_json(m.positions)},
            {"bits", to_string(m.bits)}};
  }
  ordered_json operator()(const protocol::SwapAnnouncement& m) const {
    ordered_json classes = ordered_json::array();
    for (auto c : m.classes) classes.push_back(std::string(quantum::to_string(c)));
    return {{"type", "SwapAnnouncement"}, {"classes", classes}};
  }
  ordered_json operator()(const protocol::SwapCheckPositions& m) const {
    return {{"type", "SwapCheckPositions"}, {"positions", positions_json(m.positions)}};
  }
  ordered_json operator()(const protocol::SwapCheckOutcomes& m) const {
    return {{"type", "SwapCheckOutcomes"},
            {"positions", positions_json(m.positions)},
            {"bits", to_string(m.bits)}};
  }
  ordered_json operator()(const protocol::FlipAnnouncement& m) const {
    return {{"type", "FlipAnnouncement"}, {"bits", to_string(m.bits)}};
  }
  ordered_json operator()(const protocol::Abort& m) const {
    return {{"type", "Abort"}, {"step", m.step}, {"reason", m.reason}};
  }
};

std::vector<std::size_t> read_positions(const json& m) {
  return m.at("positions").get<std::vector<std::size_t>>();
}

Bits read_bits(const json& m) { return parse_bits(m.at("bits").get<std::string>()); }

ordered_json attack_json(const adversary::AttackModel& attack) {
  ordered_json out;
  out["name"] = adversary::attack_name(attack);
  if (const auto* ir = std::get_if<adversary::InterceptResend>(&attack)) {
    out["leg"] = std::string(protocol::to_string(ir->leg));
    out["basis"] = ir->basis == adversary::TapBasis::Z ? "Z" : "X";
    out["fraction"] = format_rate(ir->fraction);
  } else if (const auto* imp = std::get_if<adversary::ImpersonateUser>(&attack)) {
    out["target"] = imp->target;
    if (imp->guessed_id) out["guessed_id"] = to_string(*imp->guessed_id);
  }
  return out;
}

ordered_json tally_json(const adversary::DetectionTally& t) {
  return {{"checked", t.checked}, {"errors", t.errors}, {"rate", format_rate(t.rate())}};
}

}  // namespace

std::string format_rate(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("format_rate: conversion failed");
  return std::string(buf, end);
}

ordered_json transcript_to_json(const protocol::Transcript& transcript) {
  ordered_json out = ordered_json::array();
  for (const auto& m : transcript.messages()) out.push_back(std::visit(ToJson{}, m));
  return out;
}

protocol::Transcript transcript_from_json(const json& messages) {
  if (!messages.is_array()) throw std::invalid_argument("transcript must be an array");
  protocol::Transcript t;
  try {
    for (const auto& m : messages) {
      const auto type = m.at("type").get<std::string>();
      if (type == "AuthRequest")
        t.post(protocol::AuthRequest{m.at("initiator").get<std::string>(), m.at("responder").get<std::string>()});
      else if (type == "AuthOutcomes")
        t.post(protocol::AuthOutcomes{m.at("user").get<std::string>(), read_bits(m)});
      else if (type == "AuthVerdict")
        t.post(protocol::AuthVerdict{m.at("user").get<std::string>(), m.at("pass").get<bool>()});
      else if (type == "CheckPositions")
        t.post(protocol::CheckPositions{m.at("chooser").get<std::string>(), read_positions(m)});
      else if (type == "CheckOutcomes")
        t.post(protocol::CheckOutcomes{m.at("user").get<std::string>(), read_positions(m), read_bits(m)});
      else if (type == "SwapAnnouncement") {
        protocol::SwapAnnouncement a;
        for (const auto& c : m.at("classes")) {
          const auto name = c.get<std::string>();
          if (name == "Phi") a.classes.push_back(BellClass::Phi);
          else if (name == "Psi") a.classes.push_back(BellClass::Psi);
          else throw std::invalid_argument("unknown Bell class '" + name + "'");
        }
        t.post(std::move(a));
      } else if (type == "SwapCheckPositions")
        t.post(protocol::SwapCheckPositions{read_positions(m)});
      else if (type == "SwapCheckOutcomes")
        t.post(protocol::SwapCheckOutcomes{read_positions(m), read_bits(m)});
      else if (type == "FlipAnnouncement")
        t.post(protocol::FlipAnnouncement{read_bits(m)});
      else if (type == "Abort")
        t.post(protocol::Abort{m.at("step").get<std::string>(), m.at("reason").get<std::string>()});
      else
        throw std::invalid_argument("unknown message type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed transcript: ") + e.what());
  }
  return t;
}

ordered_json report_to_json(const ExperimentResult& result, const ExperimentSpec& spec) {
  const auto& base = spec.base;
  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"] = {{"name", "mqdc"}, {"version", kToolVersion}};
  doc["config"] = {
      {"n_users", base.n_users},
      {"N", base.id_length},
      {"M", base.message_length},
      {"n", base.channel_checks},
      {"q", base.swap_checks},
      {"seed", std::to_string(base.seed)},
      {"initiator", base.initiator},
      {"responder", base.responder},
      {"trials", spec.trials},
      {"seed_derivation", "trial_seed = derive_seed(seed, scenario_ordinal + 1, trial_ordinal)"},
  };
  ordered_json scenarios = ordered_json::array();
  for (const auto& s : result.scenarios) {
    ordered_json entry;
    entry["label"] = s.label;
    entry["attack"] = attack_json(s.attack);
    entry["trials"] = s.trials;
    entry["auth_pass_rate"] = format_rate(s.auth_pass_rate);
    entry["auth_qubit_mismatch_rate"] = format_rate(s.auth_qubit_mismatch_rate);
    entry["channel_check_error_rate"] = format_rate(s.channel_check_error_rate);
    entry["swap_check_error_rate"] = format_rate(s.swap_check_error_rate);
    ordered_json aborts;
    for (std::size_t k = 0; k < kAbortSteps.size(); ++k) aborts[kAbortSteps[k]] = format_rate(s.abort_rate[k]);
    entry["abort_rate"] = aborts;
    entry["message_fidelity"] = format_rate(s.message_fidelity);
    entry["eve_reconstructions"] = s.eve_reconstructions;
    entry["eve_recovery_rate"] = format_rate(s.eve_recovery_rate);
    entry["eve_bit_accuracy"] = format_rate(s.eve_bit_accuracy);
    entry["intercepted_qubits"] = s.intercepted_qubits;
    entry["tapped_detection"] = {
        {"auth_id0", tally_json(s.tapped_auth_id0)},
        {"auth_id1", tally_json(s.tapped_auth_id1)},
        {"channel_check", tally_json(s.tapped_channel_check)},
        {"swap_check", tally_json(s.tapped_swap_check)},
    };
    if (spec.emit_transcripts) {
      ordered_json dumps = ordered_json::array();
      for (std::size_t t = 0; t < s.transcripts.size(); ++t)
        dumps.push_back({{"trial", t},
                         {"seed", std::to_string(s.transcripts[t].first)},
                         {"messages", transcript_to_json(s.transcripts[t].second)}});
      entry["transcripts"] = std::move(dumps);
    }
    scenarios.push_back(std::move(entry));
  }
  doc["scenarios"] = std::move(scenarios);
  return doc;
}

std::filesystem::path resolve_output_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative())
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) return std::filesystem::path(dir) / p;
  return p;
}

void emit_report(const ExperimentResult& result, const ExperimentSpec& spec,
                 const std::filesystem::path& path) {
  const std::string text = report_to_json(result, spec).dump(2) + "\n";
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace mqdc::harness
