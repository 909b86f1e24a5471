#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "mqdc/quantum/bell.hpp"
#include "mqdc/quantum/state_register.hpp"
#include "oracle/dense_oracle.hpp"
#include "oracle/frozen.hpp"
#include "stats.hpp"

using namespace mqdc;
using namespace mqdc::quantum;

namespace {

std::vector<Amplitude> random_state(DeterministicRng& rng, std::size_t qubits) {
  std::vector<Amplitude> amps(std::size_t{1} << qubits);
  double norm = 0;
  for (auto& a : amps) {
    a = {rng.uniform() - 0.5, rng.uniform() - 0.5};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return amps;
}

// Four qubits: (1,2) in b12, (3,4) in b34.
struct FourQubits {
  StateRegister reg;
  QubitRef q1, q2, q3, q4;
};

FourQubits prepare(BellKind b12, BellKind b34, std::uint64_t seed = 1) {
  StateRegister reg(seed);
  auto [q1, q2] = reg.alloc_bell_pair(b12);
  auto [q3, q4] = reg.alloc_bell_pair(b34);
  return {std::move(reg), q1, q2, q3, q4};
}

}  // namespace

TEST_CASE("new_register") {
  StateRegister empty(0);
  CHECK(empty.live_count() == 0);
  CHECK(empty.amplitudes().size() == 1);

  SUBCASE("same seed gives the same measurement sequence") {
    StateRegister a(42), b(42);
    for (int i = 0; i < 64; ++i) {
      auto qa = a.alloc_zero();
      auto qb = b.alloc_zero();
      a.apply_hadamard(qa);
      b.apply_hadamard(qb);
      CHECK(a.measure_z(qa) == b.measure_z(qb));
      a.release(qa);
      b.release(qb);
    }
  }
  SUBCASE("different seeds give usable, distinct streams") {
    StateRegister a(1), b(2);
    int differ = 0;
    for (int i = 0; i < 64; ++i) {
      auto qa = a.alloc_zero();
      auto qb = b.alloc_zero();
      a.apply_hadamard(qa);
      b.apply_hadamard(qb);
      differ += a.measure_z(qa) != b.measure_z(qb);
      a.release(qa);
      b.release(qb);
    }
    CHECK(differ > 0);
  }
  CHECK(StateRegister(5).id() != StateRegister(5).id());
}

TEST_CASE("alloc_bell_pair") {
  SUBCASE("Phi+ is a Bell eigenstate") {
    StateRegister reg(3);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
    CHECK(reg.measure_bell(a, b) == BellKind::PhiPlus);
  }
  SUBCASE("Phi+ gives equal sigma_z outcomes, Psi+ opposite") {
    std::size_t ones = 0;
    const std::size_t trials = 2000;
    for (std::size_t s = 0; s < trials; ++s) {
      StateRegister reg(s);
      auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
      auto [c, d] = reg.alloc_bell_pair(BellKind::PsiPlus);
      const int x = reg.measure_z(a);
      CHECK(x == reg.measure_z(b));
      CHECK(reg.measure_z(c) != reg.measure_z(d));
      ones += static_cast<std::size_t>(x);
    }
    CHECK(testing_stats::within_3sigma(ones, trials, 0.5));
  }
  SUBCASE("tensor extension leaves existing amplitudes intact") {
    DeterministicRng rng(9);
    auto reg = StateRegister::with_amplitudes(1, random_state(rng, 2));
    const std::vector<Amplitude> before(reg.amplitudes().begin(), reg.amplitudes().end());
    auto [a, b] = reg.alloc_bell_pair(BellKind::PsiMinus);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(std::abs(reg.amplitudes()[4 * i + 1] - before[i] * r) < kIdentityTolerance);
      CHECK(std::abs(reg.amplitudes()[4 * i + 2] + before[i] * r) < kIdentityTolerance);
    }
    CHECK(reg.bell_projection_probabilities(a, b)[index_of(BellKind::PsiMinus)] ==
          doctest::Approx(1.0));
  }
  SUBCASE("capacity is 24 qubits") {
    StateRegister reg(0);
    for (int i = 0; i < 12; ++i) reg.alloc_bell_pair(BellKind::PhiPlus);
    CHECK(reg.live_count() == 24);
    CHECK_THROWS_AS(reg.alloc_bell_pair(BellKind::PhiPlus), QuantumError);
    CHECK_THROWS_AS(reg.alloc_zero(), QuantumError);
  }
}

TEST_CASE("apply_hadamard") {
  SUBCASE("|0> -> (|0> + |1>)/sqrt2") {
    StateRegister reg(0);
    auto q = reg.alloc_zero();
    reg.apply_hadamard(q);
    CHECK(std::abs(reg.amplitudes()[0] - 1.0 / std::sqrt(2.0)) < kIdentityTolerance);
    CHECK(std::abs(reg.amplitudes()[1] - 1.0 / std::sqrt(2.0)) < kIdentityTolerance);
  }
  SUBCASE("self-inverse on 100 random states") {
    DeterministicRng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t qubits = 1 + rng.below(5);
      auto reg = StateRegister::with_amplitudes(trial, random_state(rng, qubits));
      const std::vector<Amplitude> before(reg.amplitudes().begin(), reg.amplitudes().end());
      const auto q = reg.live_qubits()[rng.below(qubits)];
      reg.apply_hadamard(q);
      reg.apply_hadamard(q);
      for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(std::abs(reg.amplitudes()[i] - before[i]) < kIdentityTolerance);
    }
  }
  SUBCASE("H on one half of Phi+ leaves independent uniform marginals") {
    StateRegister reg(0);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
    reg.apply_hadamard(b);
    // Oracle: the same circuit built from full matrices.
    const auto expected = oracle::mat_apply(oracle::embed(2, {1}, oracle::hadamard()), oracle::bell(0));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::norm(reg.amplitudes()[i]) == doctest::Approx(std::norm(expected[i])));
      CHECK(std::norm(reg.amplitudes()[i]) == doctest::Approx(0.25));
    }
  }
  SUBCASE("dead or foreign qubit") {
    StateRegister reg(0), other(0);
    auto q = reg.alloc_zero();
    CHECK_THROWS_AS(other.apply_hadamard(q), QuantumError);
    reg.measure_z(q);
    reg.release(q);
    CHECK_THROWS_AS(reg.apply_hadamard(q), QuantumError);
    CHECK_THROWS_AS(reg.measure_z(q), QuantumError);
  }
}

TEST_CASE("measure_z") {
  SUBCASE("|0> reads 0") {
    StateRegister reg(7);
    auto q = reg.alloc_zero();
    for (int i = 0; i < 10; ++i) CHECK(reg.measure_z(q) == 0);
  }
  SUBCASE("Born rule on |+>, 1e5 fresh states") {
    StateRegister reg(11);
    std::size_t ones = 0;
    const std::size_t trials = 100000;
    for (std::size_t i = 0; i < trials; ++i) {
      auto q = reg.alloc_zero();
      reg.apply_hadamard(q);
      ones += static_cast<std::size_t>(reg.measure_z(q));
      reg.release(q);
    }
    CHECK(testing_stats::within_3sigma(ones, trials, 0.5));
  }
  SUBCASE("Born rule on an uneven state") {
    const double p1 = 0.2;
    std::size_t ones = 0;
    const std::size_t trials = 100000;
    StateRegister reg(12);
    for (std::size_t i = 0; i < trials; ++i) {
      auto tmp = StateRegister::with_amplitudes(i, {std::sqrt(1 - p1), std::sqrt(p1)});
      ones += static_cast<std::size_t>(tmp.measure_z(tmp.live_qubits()[0]));
    }
    CHECK(testing_stats::within_3sigma(ones, trials, p1));
  }
  SUBCASE("collapse propagates through Phi+") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      StateRegister reg(seed);
      auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
      const int x = reg.measure_z(a);
      CHECK(reg.probability_one(b) == doctest::Approx(static_cast<double>(x)));
      CHECK(reg.measure_z(a) == x);  // repeatable
    }
  }
  SUBCASE("force_z rejects impossible outcomes") {
    StateRegister reg(0);
    auto q = reg.alloc_zero();
    CHECK_THROWS_AS(reg.force_z(q, 1), QuantumError);
    reg.force_z(q, 0);
  }
}

TEST_CASE("bell_projection_probabilities") {
  SUBCASE("Psi- pair") {
    StateRegister reg(0);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PsiMinus);
    const auto p = reg.bell_projection_probabilities(a, b);
    CHECK(p[index_of(BellKind::PsiMinus)] == doctest::Approx(1.0));
    CHECK(p[index_of(BellKind::PhiPlus)] == doctest::Approx(0.0));
  }
  SUBCASE("Phi+12 (x) Phi+34 on (1,3): 1/4 each") {
    auto s = prepare(BellKind::PhiPlus, BellKind::PhiPlus);
    for (double p : s.reg.bell_projection_probabilities(s.q1, s.q3))
      CHECK(std::abs(p - 0.25) < kNormTolerance);
  }
  SUBCASE("|00> product pair") {
    StateRegister reg(0);
    auto a = reg.alloc_zero();
    auto b = reg.alloc_zero();
    const auto p = reg.bell_projection_probabilities(a, b);
    for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(p[k] - frozen::kZeroZeroBell[k]) < kNormTolerance);
  }
  SUBCASE("sums to one and does not collapse") {
    DeterministicRng rng(5);
    for (int t = 0; t < 20; ++t) {
      auto reg = StateRegister::with_amplitudes(t, random_state(rng, 3));
      const std::vector<Amplitude> before(reg.amplitudes().begin(), reg.amplitudes().end());
      const auto p = reg.bell_projection_probabilities(reg.live_qubits()[0], reg.live_qubits()[2]);
      CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < kNormTolerance);
      for (std::size_t i = 0; i < before.size(); ++i) CHECK(reg.amplitudes()[i] == before[i]);
    }
  }
  SUBCASE("errors") {
    StateRegister reg(0);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
    CHECK_THROWS_AS(reg.bell_projection_probabilities(a, a), QuantumError);
    CHECK_THROWS_AS(reg.measure_bell(b, b), QuantumError);
    StateRegister other(0);
    auto c = other.alloc_zero();
    CHECK_THROWS_AS(reg.measure_bell(a, c), QuantumError);
  }
}

TEST_CASE("measure_bell: swapping Phi+ (x) Phi+") {
  std::array<std::size_t, 4> counts{};
  const std::size_t trials = 4000;
  for (std::size_t seed = 0; seed < trials; ++seed) {
    auto s = prepare(BellKind::PhiPlus, BellKind::PhiPlus, seed);
    const BellKind first = s.reg.measure_bell(s.q1, s.q3);
    const BellKind second = s.reg.measure_bell(s.q2, s.q4);
    ++counts[index_of(first)];
    const auto id = swap_expansion(SwapOutcomeClass::IDPlusPlus);
    CHECK(std::find(id.begin(), id.end(), BellPair{first, second}) != id.end());
    CHECK(std::abs(s.reg.norm_squared() - 1.0) < kNormTolerance);
  }
  for (auto c : counts) CHECK(testing_stats::within_3sigma(c, trials, 0.25));
}

TEST_CASE("swap_table") {
  CHECK(swap_table(BellKind::PhiPlus, BellKind::PhiPlus) == SwapOutcomeClass::IDPlusPlus);
  CHECK(swap_table(BellKind::PsiMinus, BellKind::PsiMinus) == SwapOutcomeClass::IDPlusPlus);
  CHECK(swap_table(BellKind::PhiPlus, BellKind::PsiPlus) == SwapOutcomeClass::RevPlusPlus);
  CHECK(swap_table(BellKind::PhiMinus, BellKind::PsiMinus) == SwapOutcomeClass::RevPlusPlus);
  CHECK(swap_table(BellKind::PsiMinus, BellKind::PhiPlus) == SwapOutcomeClass::RevPlusMinus);

  SUBCASE("expansions are disjoint and cover all 16 pairs") {
    std::set<BellPair> seen;
    for (auto cls : kAllSwapOutcomeClasses)
      for (const auto& pair : swap_expansion(cls)) CHECK(seen.insert(pair).second);
    CHECK(seen.size() == 16);
  }

  SUBCASE("table agrees with amplitude simulation and with the dense oracle") {
    for (auto b12 : kAllBellKinds)
      for (auto b34 : kAllBellKinds) {
        const auto expansion = swap_expansion(swap_table(b12, b34));
        auto s = prepare(b12, b34);
        const auto first = s.reg.bell_projection_probabilities(s.q1, s.q3);
        for (const auto& [x, y] : expansion) CHECK(std::abs(first[index_of(x)] - 0.25) < kNormTolerance);

        const auto state = oracle::kron(oracle::bell(static_cast<int>(b12)), oracle::bell(static_cast<int>(b34)));
        for (const auto& [x, y] : expansion) {
          auto forced = prepare(b12, b34);
          forced.reg.force_bell(forced.q1, forced.q3, x);
          const auto second = forced.reg.bell_projection_probabilities(forced.q2, forced.q4);
          CHECK(std::abs(second[index_of(y)] - 1.0) < kNormTolerance);

          const auto joint = oracle::mat_apply(
              oracle::embed(4, {1, 3}, oracle::proj_bell(static_cast<int>(y))),
              oracle::mat_apply(oracle::embed(4, {0, 2}, oracle::proj_bell(static_cast<int>(x))), state));
          CHECK(oracle::norm2(joint) == doctest::Approx(0.25));
        }
      }
  }
}

TEST_CASE("release") {
  SUBCASE("measured qubit halves the dimension") {
    StateRegister reg(1);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PhiPlus);
    CHECK(reg.amplitudes().size() == 4);
    reg.measure_z(a);
    reg.release(a);
    CHECK(reg.amplitudes().size() == 2);
    CHECK(reg.live_count() == 1);
    CHECK(std::abs(reg.norm_squared() - 1.0) < kNormTolerance);
    CHECK_FALSE(reg.is_live(a));
    CHECK(reg.is_live(b));
  }
  SUBCASE("entangled qubit cannot be released") {
    StateRegister reg(1);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PsiPlus);
    CHECK_THROWS_AS(reg.release(a), QuantumError);
    CHECK(reg.live_count() == 2);
  }
  SUBCASE("pair round trip restores live_count") {
    StateRegister reg(1);
    auto keep = reg.alloc_zero();
    reg.apply_hadamard(keep);
    auto [a, b] = reg.alloc_bell_pair(BellKind::PhiMinus);
    reg.measure_z(a);
    reg.measure_z(b);
    reg.release(a);
    reg.release(b);
    CHECK(reg.live_count() == 1);
    CHECK(std::abs(std::norm(reg.amplitudes()[0]) - 0.5) < kNormTolerance);
  }
  SUBCASE("unentangled superposition may be released") {
    StateRegister reg(1);
    auto a = reg.alloc_zero();
    auto b = reg.alloc_zero();
    reg.apply_hadamard(a);
    reg.release(a);
    CHECK(reg.live_count() == 1);
    CHECK(reg.probability_one(b) == doctest::Approx(0.0));
  }
}

TEST_CASE("norm is preserved by random operation sequences") {
  DeterministicRng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    StateRegister reg(trial);
    std::vector<QubitRef> live;
    for (int step = 0; step < 30; ++step) {
      switch (rng.below(live.size() >= 2 ? 5 : 2)) {
        case 0: {
          if (live.size() + 2 > 8) break;
          auto [a, b] = reg.alloc_bell_pair(kAllBellKinds[rng.below(4)]);
          live.push_back(a);
          live.push_back(b);
          break;
        }
        case 1:
          if (!live.empty()) reg.apply_hadamard(live[rng.below(live.size())]);
          break;
        case 2:
          reg.measure_z(live[rng.below(live.size())]);
          break;
        case 3: {
          const auto i = rng.below(live.size());
          auto j = rng.below(live.size() - 1);
          if (j >= i) ++j;
          reg.measure_bell(live[i], live[j]);
          break;
        }
        case 4: {
          const auto i = rng.below(live.size());
          reg.measure_z(live[i]);
          reg.release(live[i]);
          live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
          break;
        }
      }
      REQUIRE(std::abs(reg.norm_squared() - 1.0) <= kNormTolerance);
      REQUIRE(reg.amplitudes().size() == (std::size_t{1} << reg.live_count()));
    }
  }
}

TEST_CASE("determinism: same seed and operations give identical outcomes") {
  const auto run = [](std::uint64_t seed) {
    std::vector<int> outcomes;
    StateRegister reg(seed);
    for (int i = 0; i < 200; ++i) {
      auto s1 = reg.alloc_bell_pair(BellKind::PhiPlus);
      auto s2 = reg.alloc_bell_pair(BellKind::PsiPlus);
      outcomes.push_back(static_cast<int>(reg.measure_bell(s1.first, s2.first)));
      outcomes.push_back(reg.measure_z(s1.second));
      outcomes.push_back(reg.measure_z(s2.second));
      for (auto q : {s1.second, s2.second}) reg.release(q);
      reg.measure_z(s1.first);
      reg.measure_z(s2.first);
      reg.release(s1.first);
      reg.release(s2.first);
    }
    return outcomes;
  };
  CHECK(run(99) == run(99));
  CHECK(run(99) != run(100));
}
