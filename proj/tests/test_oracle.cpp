#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle/dense_oracle.hpp"
#include "oracle/frozen.hpp"

using namespace oracle;

namespace {

Step tap(int basis, int qubit) { return basis == 1 ? Step::measure_x(qubit) : Step::measure_z(qubit); }

double auth_tap_mismatch(int basis, int id_bit) {
  // (T=0, U=1) in Phi+; Trent encodes U, Eve taps U, the user decodes U.
  std::vector<Step> steps;
  if (id_bit) steps.push_back(Step::unitary({1}, hadamard()));
  steps.push_back(tap(basis, 1));
  if (id_bit) steps.push_back(Step::unitary({1}, hadamard()));
  steps.push_back(Step::measure_z(0));
  steps.push_back(Step::measure_z(1));
  return probability_of(enumerate(bell(0), 2, steps), [](const auto& o) { return o[1] != o[2]; });
}

// init: 0 = Phi+, 2 = Psi+. Tap on T_A (qubit 0) of (T_A, A).
double channel_tap_error(int basis, int init) {
  const auto branches = enumerate(bell(init), 2, {tap(basis, 0), Step::measure_z(0), Step::measure_z(1)});
  return probability_of(branches, [init](const auto& o) { return o[1] != (o[2] ^ (init == 2)); });
}

// (T_A, A, T_B, B); tap on `tapped`, Bell on (T_A, T_B), sigma_z on A and B.
double swap_tap_error(int basis, int init, int tapped) {
  const auto branches = enumerate(kron(bell(init), bell(0)), 4,
                                  {tap(basis, tapped), Step::measure_bell(0, 2), Step::measure_z(1),
                                   Step::measure_z(3)});
  return probability_of(branches, [init](const auto& o) {
    const int psi_class = o[1] >= 2;
    return o[3] != (o[2] ^ (init == 2) ^ psi_class);
  });
}

}  // namespace

TEST_CASE("oracle reproduces the frozen authentication tap rates") {
  for (int basis : {0, 1})
    for (int bit : {0, 1})
      CHECK(auth_tap_mismatch(basis, bit) == doctest::Approx(frozen::kAuthTapMismatch[basis][bit]).epsilon(1e-12));
}

TEST_CASE("oracle reproduces the frozen channel and swap check tap rates") {
  for (int basis : {0, 1}) {
    const double c3 = 0.5 * channel_tap_error(basis, 0) + 0.5 * channel_tap_error(basis, 2);
    CHECK(c3 == doctest::Approx(frozen::kChannelCheckTapError[basis]).epsilon(1e-12));
    for (int tapped : {0, 2}) {
      const double c5 = 0.5 * swap_tap_error(basis, 0, tapped) + 0.5 * swap_tap_error(basis, 2, tapped);
      CHECK(c5 == doctest::Approx(frozen::kSwapCheckTapError[basis]).epsilon(1e-12));
    }
    // The rates do not depend on the prepared state either.
    CHECK(channel_tap_error(basis, 0) == doctest::Approx(channel_tap_error(basis, 2)));
  }
}

TEST_CASE("oracle: authentication pass probability per bit") {
  // Trent encodes with H, impostor does not decode.
  const auto wrong = enumerate(bell(0), 2,
                               {Step::unitary({1}, hadamard()), Step::measure_z(0), Step::measure_z(1)});
  const double mismatched = probability_of(wrong, [](const auto& o) { return o[0] == o[1]; });
  CHECK(mismatched == doctest::Approx(frozen::kMismatchedBitPass));

  const auto right = enumerate(bell(0), 2,
                               {Step::unitary({1}, hadamard()), Step::unitary({1}, hadamard()),
                                Step::measure_z(0), Step::measure_z(1)});
  const double matched = probability_of(right, [](const auto& o) { return o[0] == o[1]; });
  CHECK(matched == doctest::Approx(1.0));
  CHECK(0.5 * matched + 0.5 * mismatched == doctest::Approx(frozen::kRandomBitPass));
}

TEST_CASE("oracle: Bell decomposition of |00>") {
  for (int k = 0; k < 4; ++k)
    CHECK(probability(ket("00"), proj_bell(k)) == doctest::Approx(frozen::kZeroZeroBell[k]));
}

TEST_CASE("oracle: swapped pairs follow the expected correlation without a tap") {
  // Z-tapped A-sequence bit e predicts the responder: b = e XOR (class is Psi).
  for (int init : {0, 2}) {
    const auto branches = enumerate(kron(bell(init), bell(0)), 4,
                                    {Step::measure_z(0), Step::measure_bell(0, 2), Step::measure_z(1),
                                     Step::measure_z(3)});
    const double hit = probability_of(branches, [](const auto& o) {
      return o[3] == (o[0] ^ static_cast<int>(o[1] >= 2));
    });
    CHECK(hit == doctest::Approx(1.0));
  }
}
