#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqdc/bits.hpp"
#include "mqdc/rng.hpp"

namespace mqdc::protocol {

using UserId = std::string;

/// The N-bit secret shared between one user and Trent. Bit i selects whether
/// the i-th authentication qubit is Hadamard-encoded.
class IdSequence {
 public:
  explicit IdSequence(Bits bits);

  static IdSequence random(std::size_t length, DeterministicRng& rng);

  std::size_t size() const noexcept { return bits_.size(); }
  int operator[](std::size_t i) const { return bits_.at(i); }
  const Bits& bits() const noexcept { return bits_; }

  friend bool operator==(const IdSequence&, const IdSequence&) = default;

 private:
  Bits bits_;
};

/// Trent's table of registered users. All IDs share one length N.
class UserRegistry {
 public:
  void add(const UserId& user, IdSequence id);

  bool contains(const UserId& user) const { return entries_.contains(user); }
  const IdSequence& id_of(const UserId& user) const;
  std::size_t size() const noexcept { return entries_.size(); }
  /// N; zero while the registry is empty.
  std::size_t id_length() const noexcept { return id_length_; }
  std::vector<UserId> users() const;

  /// n users named user0..user{n-1} with random IDs drawn from `seed`.
  static UserRegistry generate(std::size_t users, std::size_t id_length, std::uint64_t seed);

 private:
  std::map<UserId, IdSequence> entries_;
  std::size_t id_length_ = 0;
};

}  // namespace mqdc::protocol
