#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mqdc/adversary/attack_model.hpp"
#include "mqdc/protocol/identity.hpp"
#include "mqdc/protocol/session.hpp"

namespace mqdc::harness {

/// Config rejected. Each issue is "field.path: problem".
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const noexcept { return issues_; }

 private:
  std::vector<std::string> issues_;
};

struct Scenario {
  std::string label;
  adversary::AttackModel attack;
};

struct ExperimentSpec {
  protocol::SessionConfig base;
  std::size_t trials = 1;
  std::vector<Scenario> scenarios;
  std::string output_path = "mqdc_report.json";
  bool emit_transcripts = false;
  /// Registered user names, in order. Defaults to user0..user{n_users-1}.
  std::vector<protocol::UserId> users;
  /// Explicit ID sequences; users not listed get random IDs.
  std::map<protocol::UserId, Bits> ids;
};

/// Parses and validates a JSON config document.
ExperimentSpec parse_config(std::string_view text);
/// Reads `path`; a missing or unreadable file is a ConfigError.
ExperimentSpec load_config(const std::filesystem::path& path);

/// Trent's registry for a spec: explicit IDs plus IDs drawn from
/// derive_seed(base seed, registry tag).
protocol::UserRegistry build_registry(const ExperimentSpec& spec);

}  // namespace mqdc::harness
