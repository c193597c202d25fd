// Copyright 2026 The donorgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "donorgate/circuit.hpp"
#include "donorgate/errors.hpp"

using namespace donorgate;
using namespace donorgate::gates;
using cd = std::complex<double>;

TEST_SUITE("circuit") {
  TEST_CASE("pure state validation") {
    CHECK_THROWS_AS(PureState(1, {1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(PureState(2, {1.0, 0.0}), ValidationError);
    CHECK_NOTHROW(PureState(1, {cd(0.6), cd(0.0, 0.8)}));
    const PureState b = PureState::basis(3, 5);
    CHECK(b.amplitude(5) == cd(1.0));
    CHECK(b.probability(0, 1) == 1.0);
    CHECK(b.probability(1, 0) == 1.0);
    CHECK(b.probability(2, 1) == 1.0);
  }

  TEST_CASE("product puts lhs on the leading qubits") {
    const PureState p = PureState::product(PureState::basis(1, 1), PureState(1, {cd(0.6), cd(0.8)}));
    CHECK(std::abs(p.amplitude(2) - 0.6) < 1e-15);
    CHECK(std::abs(p.amplitude(3) - 0.8) < 1e-15);
    CHECK(p.probability(0, 1) == doctest::Approx(1.0));
  }

  TEST_CASE("single gates") {
    const PureState zero = PureState::basis(1, 0);
    const Op h[] = {Op::h(0)};
    const auto plus = simulate_circuit(zero, h);
    REQUIRE(plus.size() == 1);
    CHECK(std::abs(plus[0].state->amplitude(0) - std::sqrt(0.5)) < 1e-15);
    CHECK(std::abs(plus[0].state->amplitude(1) - std::sqrt(0.5)) < 1e-15);

    const Op hz[] = {Op::h(0), Op::z(0, 0.7)};
    const auto phased = simulate_circuit(zero, hz);
    CHECK(std::abs(phased[0].state->amplitude(1) - std::polar(std::sqrt(0.5), 0.7)) < 1e-15);

    const Op hh[] = {Op::h(0), Op::h(0)};
    CHECK(state_distance(*simulate_circuit(zero, hh)[0].state, zero) < 1e-15);

    const Op x[] = {Op::x(1)};
    CHECK(state_distance(*simulate_circuit(PureState::basis(2, 0), x)[0].state, PureState::basis(2, 1)) < 1e-15);
  }

  TEST_CASE("cz flips the sign of |11> only") {
    const PureState plus2(2, {0.5, 0.5, 0.5, 0.5});
    const Op cz[] = {Op::cz(0, 1)};
    const auto out = simulate_circuit(plus2, cz);
    CHECK(state_distance(*out[0].state, PureState(2, {0.5, 0.5, 0.5, -0.5})) < 1e-15);
  }

  TEST_CASE("measurement returns both branches") {
    const PureState psi(1, {cd(std::sqrt(0.3)), cd(0.0, std::sqrt(0.7))});
    const Op m[] = {Op::measure(0)};
    const auto branches = simulate_circuit(psi, m);
    REQUIRE(branches.size() == 2);
    CHECK(branches[0].outcomes == std::vector<int>{0});
    CHECK(branches[0].probability == doctest::Approx(0.3));
    CHECK(branches[1].probability == doctest::Approx(0.7));
    CHECK(state_distance(*branches[0].state, PureState::basis(1, 0)) < 1e-15);
    CHECK(state_distance(*branches[1].state, PureState::basis(1, 1)) < 1e-15);
  }

  TEST_CASE("zero-probability branches carry no state") {
    const Op m[] = {Op::measure(0)};
    const auto branches = simulate_circuit(PureState::basis(1, 0), m);
    REQUIRE(branches.size() == 2);
    CHECK(branches[1].probability == 0.0);
    CHECK_FALSE(branches[1].state.has_value());
  }

  TEST_CASE("reset leaves |0> in every branch") {
    const PureState psi(1, {cd(0.6), cd(0.8)});
    const Op r[] = {Op::reset(0)};
    for (const auto& b : simulate_circuit(psi, r)) {
      REQUIRE(b.state.has_value());
      CHECK(state_distance(*b.state, PureState::basis(1, 0)) < 1e-15);
    }
  }

  TEST_CASE("invalid targets") {
    const PureState s = PureState::basis(2, 0);
    const Op bad[] = {Op::x(2)};
    CHECK_THROWS_AS(simulate_circuit(s, bad), ValidationError);
    const Op same[] = {Op::cz(1, 1)};
    CHECK_THROWS_AS(simulate_circuit(s, same), ValidationError);
  }

  TEST_CASE("state_distance ignores global phase") {
    const PureState a(1, {cd(0.6), cd(0.8)});
    const PureState b(1, {std::polar(0.6, 1.0), std::polar(0.8, 1.0)});
    CHECK(state_distance(a, b) < 1e-15);
    CHECK(state_distance(a, PureState(1, {cd(0.8), cd(0.6)})) > 0.1);
  }
}
