#include "mqdc/harness/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mqdc::harness {

using nlohmann::json;

namespace {

constexpr std::uint64_t kRegistryStream = 0x5245'4749'5354'5259ULL;  // "REGISTRY"

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid config";
  for (const auto& issue : issues) out += "\n  " + issue;
  return out;
}

class Reader {
 public:
  std::vector<std::string> issues;

  template <typename T>
  bool unsigned_field(const json& obj, const std::string& key, const std::string& path, T& out) {
    if (!obj.contains(key)) return false;
    const auto& v = obj.at(key);
    if (!v.is_number_unsigned()) {
      issues.push_back(path + ": must be a nonnegative integer");
      return false;
    }
    out = v.get<T>();
    return true;
  }

  bool string_field(const json& obj, const std::string& key, const std::string& path, std::string& out) {
    if (!obj.contains(key)) return false;
    const auto& v = obj.at(key);
    if (!v.is_string()) {
      issues.push_back(path + ": must be a string");
      return false;
    }
    out = v.get<std::string>();
    return true;
  }

  bool bits_field(const json& obj, const std::string& key, const std::string& path, Bits& out) {
    std::string text;
    if (!string_field(obj, key, path, text)) return false;
    try {
      out = parse_bits(text);
    } catch (const std::invalid_argument&) {
      issues.push_back(path + ": must be a string of 0/1 characters");
      return false;
    }
    return true;
  }

  void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& prefix) {
    for (const auto& [key, _] : obj.items())
      if (!known.contains(key)) issues.push_back(prefix + key + ": unknown field");
  }

  adversary::AttackModel scenario(const json& entry, const std::string& path, std::string& label) {
    json obj = entry;
    if (entry.is_string()) obj = json{{"name", entry}};
    if (!obj.is_object()) {
      issues.push_back(path + ": must be a scenario name or object");
      return adversary::NoAttack{};
    }
    std::string name;
    if (!string_field(obj, "name", path + ".name", name)) {
      if (!obj.contains("name")) issues.push_back(path + ".name: required");
      return adversary::NoAttack{};
    }
    label = name;
    string_field(obj, "label", path + ".label", label);

    if (name == "no-attack") {
      reject_unknown(obj, {"name", "label"}, path + ".");
      return adversary::NoAttack{};
    }
    if (name == "trent-reads") {
      reject_unknown(obj, {"name", "label"}, path + ".");
      return adversary::TrentReads{};
    }
    if (name == "intercept-resend") {
      reject_unknown(obj, {"name", "label", "leg", "basis", "fraction"}, path + ".");
      adversary::InterceptResend attack;
      std::string leg = "a-sequence", basis = "Z";
      string_field(obj, "leg", path + ".leg", leg);
      string_field(obj, "basis", path + ".basis", basis);
      if (leg == "auth") attack.leg = protocol::ChannelLeg::Auth;
      else if (leg == "a-sequence") attack.leg = protocol::ChannelLeg::ASequence;
      else if (leg == "b-sequence") attack.leg = protocol::ChannelLeg::BSequence;
      else issues.push_back(path + ".leg: unknown leg '" + leg + "' (auth, a-sequence, b-sequence)");
      if (basis == "Z") attack.basis = adversary::TapBasis::Z;
      else if (basis == "X") attack.basis = adversary::TapBasis::X;
      else issues.push_back(path + ".basis: unknown basis '" + basis + "' (Z, X)");
      if (obj.contains("fraction")) {
        if (obj["fraction"].is_number()) attack.fraction = obj["fraction"].get<double>();
        else issues.push_back(path + ".fraction: must be a number");
      }
      return attack;
    }
    if (name == "impersonate" || name == "impersonate-random-id") {
      reject_unknown(obj, {"name", "label", "target", "guessed_id"}, path + ".");
      adversary::ImpersonateUser attack;
      string_field(obj, "target", path + ".target", attack.target);
      if (name == "impersonate") {
        Bits guess;
        if (bits_field(obj, "guessed_id", path + ".guessed_id", guess))
          attack.guessed_id = std::move(guess);
        else if (!obj.contains("guessed_id"))
          issues.push_back(path + ".guessed_id: required for 'impersonate'");
      } else if (obj.contains("guessed_id")) {
        issues.push_back(path + ".guessed_id: not allowed for 'impersonate-random-id'");
      }
      return attack;
    }
    issues.push_back(path + ".name: unknown attack '" + name + "'");
    return adversary::NoAttack{};
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ExperimentSpec parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("<document>: parse error: ") + e.what()});
  }
  if (!doc.is_object()) throw ConfigError({"<document>: top level must be an object"});

  Reader r;
  r.reject_unknown(doc,
                   {"n_users", "users", "ids", "N", "M", "n", "q", "seed", "initiator", "responder",
                    "message", "trials", "scenarios", "output_path", "emit_transcripts"},
                   "");

  ExperimentSpec spec;
  auto& base = spec.base;
  r.unsigned_field(doc, "N", "N", base.id_length);
  r.unsigned_field(doc, "M", "M", base.message_length);
  r.unsigned_field(doc, "n", "n", base.channel_checks);
  r.unsigned_field(doc, "q", "q", base.swap_checks);
  r.unsigned_field(doc, "seed", "seed", base.seed);
  r.unsigned_field(doc, "trials", "trials", spec.trials);
  r.string_field(doc, "output_path", "output_path", spec.output_path);
  if (doc.contains("emit_transcripts")) {
    if (doc["emit_transcripts"].is_boolean()) spec.emit_transcripts = doc["emit_transcripts"].get<bool>();
    else r.issues.emplace_back("emit_transcripts: must be true or false");
  }
  Bits message;
  if (r.bits_field(doc, "message", "message", message)) base.message = std::move(message);

  const bool has_n_users = r.unsigned_field(doc, "n_users", "n_users", base.n_users);
  if (doc.contains("users")) {
    if (!doc["users"].is_array()) {
      r.issues.emplace_back("users: must be an array of names");
    } else {
      for (std::size_t i = 0; i < doc["users"].size(); ++i) {
        const auto& u = doc["users"][i];
        if (u.is_string()) spec.users.push_back(u.get<std::string>());
        else r.issues.push_back("users[" + std::to_string(i) + "]: must be a string");
      }
      std::set<std::string> unique(spec.users.begin(), spec.users.end());
      if (unique.size() != spec.users.size()) r.issues.emplace_back("users: names must be unique");
      if (has_n_users && base.n_users != spec.users.size())
        r.issues.emplace_back("n_users: differs from the length of users");
      base.n_users = spec.users.size();
    }
  } else {
    for (std::size_t u = 0; u < base.n_users; ++u) spec.users.push_back("user" + std::to_string(u));
  }
  if (!spec.users.empty()) {
    base.initiator = spec.users[0];
    if (spec.users.size() > 1) base.responder = spec.users[1];
  }
  r.string_field(doc, "initiator", "initiator", base.initiator);
  r.string_field(doc, "responder", "responder", base.responder);
  const std::set<std::string> known_users(spec.users.begin(), spec.users.end());
  for (const auto* field : {"initiator", "responder"}) {
    const auto& who = std::string(field) == "initiator" ? base.initiator : base.responder;
    if (!known_users.contains(who))
      r.issues.push_back(std::string(field) + ": '" + who + "' is not a registered user");
  }

  if (doc.contains("ids")) {
    if (!doc["ids"].is_object()) {
      r.issues.emplace_back("ids: must map user names to bit strings");
    } else {
      for (const auto& [user, _] : doc["ids"].items()) {
        Bits bits;
        const std::string path = "ids." + user;
        if (!r.bits_field(doc["ids"], user, path, bits)) continue;
        if (!known_users.contains(user)) r.issues.push_back(path + ": not a registered user");
        else if (bits.size() != base.id_length) r.issues.push_back(path + ": length must equal N");
        else spec.ids[user] = std::move(bits);
      }
    }
  }

  if (spec.trials < 1) r.issues.emplace_back("trials: must be >= 1");
  if (spec.output_path.empty()) r.issues.emplace_back("output_path: must not be empty");

  if (!doc.contains("scenarios")) {
    spec.scenarios.push_back({"no-attack", adversary::NoAttack{}});
  } else if (!doc["scenarios"].is_array() || doc["scenarios"].empty()) {
    r.issues.emplace_back("scenarios: must be a non-empty array");
  } else {
    for (std::size_t i = 0; i < doc["scenarios"].size(); ++i) {
      const std::string path = "scenarios[" + std::to_string(i) + "]";
      Scenario s;
      s.attack = r.scenario(doc["scenarios"][i], path, s.label);
      if (auto* imp = std::get_if<adversary::ImpersonateUser>(&s.attack); imp && imp->target.empty())
        imp->target = base.initiator;
      // Session-level invariants that depend on the attack.
      protocol::SessionConfig probe = base;
      probe.attack = s.attack;
      for (const auto& issue : probe.validate())
        if (issue.rfind("attack.", 0) == 0) r.issues.push_back(path + "." + issue.substr(7));
      spec.scenarios.push_back(std::move(s));
    }
  }

  for (const auto& issue : base.validate())
    if (issue.rfind("attack.", 0) != 0) r.issues.push_back(issue);

  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return spec;
}

ExperimentSpec load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({path.string() + ": cannot open config file"});
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

protocol::UserRegistry build_registry(const ExperimentSpec& spec) {
  protocol::UserRegistry registry;
  DeterministicRng rng(derive_seed(spec.base.seed, kRegistryStream));
  for (const auto& user : spec.users) {
    // Always draw, so explicit IDs do not shift the other users' IDs.
    auto random_id = protocol::IdSequence::random(spec.base.id_length, rng);
    const auto it = spec.ids.find(user);
    registry.add(user, it != spec.ids.end() ? protocol::IdSequence(it->second) : std::move(random_id));
  }
  return registry;
}

}  // namespace mqdc::harness
