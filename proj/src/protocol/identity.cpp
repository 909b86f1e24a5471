#include "mqdc/protocol/identity.hpp"

#include <stdexcept>

namespace mqdc::protocol {

IdSequence::IdSequence(Bits bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw std::invalid_argument("ID sequence must have at least one bit");
  for (auto b : bits_)
    if (b > 1) throw std::invalid_argument("ID sequence bits must be 0 or 1");
}

IdSequence IdSequence::random(std::size_t length, DeterministicRng& rng) {
  Bits bits(length);
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng.bit());
  return IdSequence(std::move(bits));
}

void UserRegistry::add(const UserId& user, IdSequence id) {
  if (entries_.contains(user)) throw std::invalid_argument("user '" + user + "' already registered");
  if (id_length_ != 0 && id.size() != id_length_)
    throw std::invalid_argument("ID length " + std::to_string(id.size()) + " for '" + user +
                                "' differs from registry length " + std::to_string(id_length_));
  id_length_ = id.size();
  entries_.emplace(user, std::move(id));
}

const IdSequence& UserRegistry::id_of(const UserId& user) const {
  const auto it = entries_.find(user);
  if (it == entries_.end()) throw std::out_of_range("unknown user '" + user + "'");
  return it->second;
}

std::vector<UserId> UserRegistry::users() const {
  std::vector<UserId> out;
  out.reserve(entries_.size());
  for (const auto& [user, _] : entries_) out.push_back(user);
  return out;
}

UserRegistry UserRegistry::generate(std::size_t users, std::size_t id_length, std::uint64_t seed) {
  UserRegistry registry;
  DeterministicRng rng(seed);
  for (std::size_t u = 0; u < users; ++u)
    registry.add("user" + std::to_string(u), IdSequence::random(id_length, rng));
  return registry;
}

}  // namespace mqdc::protocol
