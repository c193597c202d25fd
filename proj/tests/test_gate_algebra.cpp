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
#include <random>

#include "donorgate/errors.hpp"
#include "donorgate/gate_algebra.hpp"
#include "oracles.hpp"

using namespace donorgate;
using namespace donorgate::gates;
using oracle::Mat;

namespace {

constexpr double kPi = std::numbers::pi;

void check_phases(const DiagonalGate& g, std::initializer_list<double> want, double tol = 1e-12) {
  REQUIRE(g.dimension() == want.size());
  std::size_t k = 0;
  for (double w : want) {
    CHECK(std::abs(wrap_phase(g.phase(k) - w)) < tol);
    ++k;
  }
}

}  // namespace

TEST_SUITE("gate_algebra") {
  TEST_CASE("wrap_phase maps into (-pi, pi]") {
    CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_phase(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_phase(0.25 + 4 * kPi) == doctest::Approx(0.25));
  }

  TEST_CASE("canonicalize") {
    check_phases(canonicalize(DiagonalGate(2, {0.5, 0.5, 0.5, 0.5})), {0, 0, 0, 0});
    const DiagonalGate g(2, {0, kPi, 0, kPi});
    CHECK(g.is_canonical());
    check_phases(canonicalize(g), {0, kPi, 0, kPi});
    check_phases(canonicalize(DiagonalGate(2, {1.0, 1.0 + 2 * kPi + 0.3, 1.0, 1.0})), {0, 0.3, 0, 0});
  }

  TEST_CASE("diagonal gate validation") {
    CHECK_THROWS_AS(DiagonalGate(2, {0, 0, 0}), ValidationError);
    CHECK_THROWS_AS(DiagonalGate(0, {0}), ValidationError);
    CHECK_THROWS_AS(DiagonalGate(1, {0, NAN}), ValidationError);
    CHECK_THROWS_AS(compose(DiagonalGate::identity(2), DiagonalGate::identity(3)), ValidationError);
    CHECK_THROWS_AS(DiagonalGate::z(2, 2, 0.1), ValidationError);
    CHECK_THROWS_AS(DiagonalGate::cz(2, 1, 1, 0.1), ValidationError);
  }

  TEST_CASE("compose") {
    const DiagonalGate g(2, {0, 0.4, -1.2, 2.5});
    CHECK(phase_distance(compose(g, DiagonalGate::identity(2)), g) < 1e-15);
    CHECK(phase_distance(compose(DiagonalGate::cz(2, 0, 1, kPi), DiagonalGate::cz(2, 0, 1, kPi)),
                         DiagonalGate::identity(2)) < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int t = 0; t < 100; ++t) {
      std::vector<double> p1(8), p2(8), p3(8);
      for (int k = 0; k < 8; ++k) {
        p1[k] = u(rng);
        p2[k] = u(rng);
        p3[k] = u(rng);
      }
      const DiagonalGate a(3, p1), b(3, p2), c(3, p3);
      CHECK(phase_distance(compose(a, b), compose(b, a)) < 1e-12);
      CHECK(phase_distance(compose(compose(a, b), c), compose(a, compose(b, c))) < 1e-12);
      CHECK(phase_distance(canonicalize(compose(a, b)), compose(canonicalize(a), canonicalize(b))) < 1e-12);
      CHECK(compose(a, b).is_canonical());
      CHECK(oracle::distance_up_to_phase(compose(a, b).matrix(), a.matrix() * b.matrix()) < 1e-12);
    }
  }

  TEST_CASE("three-stage cycle composition adds transit phases") {
    const CycleParams first{0.1, 0.2, 0.3, 0, 0, 0, 0};
    const CycleParams third{0.4, 0.5, 0.6, 0, 0, 0, 0};
    const CycleParams net = combine_cycles(first, third);
    CHECK(net.a == doctest::Approx(0.5));
    CHECK(net.b == doctest::Approx(0.7));
    CHECK(net.c == doctest::Approx(0.9));
    const CycleParams dwell{0, 0, 0, 0.7, -0.2, kPi, 4.0};
    const Mat chain = oracle::zzc(0.4, 0.5, 0.6) * oracle::zzc(0.7, -0.2, kPi) * oracle::zzc(0.1, 0.2, 0.3);
    CHECK(oracle::distance_up_to_phase(chain, combine_cycles(combine_cycles(first, dwell), third).gate().matrix()) <
          1e-12);
  }

  TEST_CASE("cycle params validation") {
    CHECK_THROWS_AS(CycleParams({0, 0, 0, 0, 0, 0, -1.0}).validate(), ValidationError);
    CHECK_THROWS_AS(CycleParams({NAN, 0, 0, 0, 0, 0, 0}).validate(), ValidationError);
    CHECK_NOTHROW(CycleParams({0, 0, 0, 0, 0, 0, 0}).validate());
  }

  TEST_CASE("extract_zzc") {
    const ZzcAngles id = extract_zzc(DiagonalGate::identity(2));
    CHECK(id.a == 0.0);
    CHECK(id.b == 0.0);
    CHECK(id.c == 0.0);
    const ZzcAngles cz = extract_zzc(DiagonalGate(2, {0, 0, 0, kPi}));
    CHECK(cz.a == doctest::Approx(0.0));
    CHECK(cz.b == doctest::Approx(0.0));
    CHECK(cz.c == doctest::Approx(kPi));
    CHECK_THROWS_AS(extract_zzc(DiagonalGate::identity(3)), ValidationError);

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    double worst = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const DiagonalGate g(2, {u(rng), u(rng), u(rng), u(rng)});
      const ZzcAngles z = extract_zzc(g);
      worst = std::max(worst, phase_distance(build_zzc(z), g));
      worst = std::max(worst, oracle::distance_up_to_phase(oracle::zzc(z.a, z.b, z.c), g.matrix()));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("determinant-one form maps onto Z_a x Z_b . CZ_c") {
    const double al = 0.3, be = -1.1, ga = 2.2;
    const DiagonalGate g(2, {al, be, ga, -(al + be + ga)});
    const ZzcAngles z = extract_zzc(g);
    CHECK(std::abs(wrap_phase(z.a - (ga - al))) < 1e-12);
    CHECK(std::abs(wrap_phase(z.b - (be - al))) < 1e-12);
    CHECK(std::abs(wrap_phase(z.c + 2 * (be + ga))) < 1e-12);
  }

  TEST_CASE("x_conjugate") {
    CHECK(phase_distance(x_conjugate(DiagonalGate::identity(2), 0), DiagonalGate::identity(2)) < 1e-15);
    CHECK(phase_distance(x_conjugate(DiagonalGate::z(2, 1, 0.8), 1), DiagonalGate::z(2, 1, -0.8)) < 1e-12);
    const double c = 1.3;
    const DiagonalGate conj = x_conjugate(DiagonalGate::cz(2, 0, 1, c), 0);
    CHECK(phase_distance(conj, compose(DiagonalGate::z(2, 1, c), DiagonalGate::cz(2, 0, 1, -c))) < 1e-12);
    const Mat x0 = oracle::on(2, 0, oracle::x());
    CHECK(oracle::distance_up_to_phase(x0 * oracle::cz(2, 0, 1, c) * x0, conj.matrix()) < 1e-12);
    CHECK_THROWS_AS(x_conjugate(DiagonalGate::identity(2), 2), ValidationError);
    CHECK_THROWS_AS(x_conjugate(DiagonalGate::identity(2), -1), ValidationError);
  }

  TEST_CASE("flipped diagonal composition matches dense products") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    FlippedDiagonal f = FlippedDiagonal::identity(3);
    Mat dense = Mat::Identity(8, 8);
    for (int step = 0; step < 12; ++step) {
      const DiagonalGate d(3, {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)});
      f = f.then(d);
      dense = d.matrix() * dense;
      const int q = step % 3;
      f = f.then_x(q);
      dense = oracle::on(3, q, oracle::x()) * dense;
    }
    CHECK(oracle::distance_up_to_phase(dense, f.matrix()) < 1e-12);
    CHECK(qubit_bit(3, 0) == 4u);
    CHECK(qubit_bit(3, 2) == 1u);
  }

  TEST_CASE("double_cycle_net") {
    const FlippedDiagonal plain = double_cycle_net({0, 0, 0, 0, 0, kPi, 1.0}, {0, 0, 0, 0, 0, 0, 0});
    CHECK(plain.x_mask == qubit_bit(2, 0));
    CHECK(phase_distance(plain.diag, DiagonalGate::cz(2, 0, 1, kPi)) < 1e-12);

    const double b = 0.3, c = 0.5, e = 0.7, d = -0.4;
    const FlippedDiagonal net = double_cycle_net({1.1, b, c, d, e, kPi, 1.0}, {1.1, b, c, 0, 0, 0, 0});
    const ZzcAngles z = extract_zzc(net.diag);
    CHECK(z.b == doctest::Approx(1.8));
    CHECK(z.a == doctest::Approx(d));
    CHECK(std::abs(wrap_phase(z.c - kPi)) < 1e-12);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int t = 0; t < 200; ++t) {
      const double bb = u(rng), cc = u(rng), dd = u(rng), ee = u(rng), a1 = u(rng), a2 = u(rng);
      const FlippedDiagonal n1 = double_cycle_net({a1, bb, cc, dd, ee, kPi, 1}, {a1, bb, cc, 0, 0, 0, 0});
      const FlippedDiagonal n2 = double_cycle_net({a2, bb, cc, dd, ee, kPi, 1}, {a2, bb, cc, 0, 0, 0, 0});
      CHECK(oracle::distance_up_to_phase(n1.matrix(), n2.matrix()) < 1e-12);
      const Mat x0 = oracle::on(2, 0, oracle::x());
      const Mat chain = oracle::zzc(a1, bb, cc) * x0 * oracle::zzc(a1 + dd, bb + ee, cc + kPi);
      CHECK(oracle::distance_up_to_phase(chain, n1.matrix()) < 1e-12);
    }
  }

  TEST_CASE("composite_ideal") {
    const CycleParams zero_dwell{0, 0, 0, 0, 0, kPi, 1.0};
    const CompositeIdeal plain = composite_ideal({zero_dwell, {}}, {zero_dwell, {}});
    CHECK(plain.net.x_mask == 7u);
    const DiagonalGate czcz = compose(DiagonalGate::cz(3, 0, 2, kPi), DiagonalGate::cz(3, 1, 2, kPi));
    CHECK(phase_distance(plain.entangling, czcz) < 1e-12);
    CHECK(phase_distance(plain.single_qubit, DiagonalGate::z(3, 1, kPi)) < 1e-12);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    for (int t = 0; t < 100; ++t) {
      const double b = u(rng), c = u(rng), e = u(rng), d1 = u(rng), d2 = u(rng);
      auto dc = [&](double d) {
        const double a = u(rng);
        return DoubleCycleParams{{a, b, c, d, e, kPi, 1.0}, {a, b, c, 0, 0, 0, 0}};
      };
      const CompositeIdeal ideal = composite_ideal(dc(d1), dc(d2));
      CHECK(phase_distance(ideal.entangling, czcz) < 1e-12);
      const DiagonalGate singles = compose(DiagonalGate::z(3, 0, d1), DiagonalGate::z(3, 1, d2 + kPi));
      CHECK(phase_distance(ideal.single_qubit, singles) < 1e-12);
      CHECK(phase_distance(compose(ideal.entangling, ideal.single_qubit), ideal.net.diag) < 1e-12);
    }
  }

  TEST_CASE("single-qubit and entangling split") {
    const DiagonalGate g = compose(compose(DiagonalGate::z(3, 0, 0.3), DiagonalGate::z(3, 2, -1.0)),
                                   DiagonalGate::cz(3, 0, 1, 0.9));
    CHECK(phase_distance(single_qubit_part(g), compose(DiagonalGate::z(3, 0, 0.3), DiagonalGate::z(3, 2, -1.0))) <
          1e-12);
    CHECK(phase_distance(entangling_part(g), DiagonalGate::cz(3, 0, 1, 0.9)) < 1e-12);
  }

  TEST_CASE("embed") {
    const DiagonalGate g = build_zzc(0.2, -0.5, 1.1);
    const int rails[] = {0, 2};
    const DiagonalGate e = embed(g, 3, rails);
    const Mat want = oracle::on(3, 0, oracle::z(0.2)) * oracle::on(3, 2, oracle::z(-0.5)) * oracle::cz(3, 0, 2, 1.1);
    CHECK(oracle::distance_up_to_phase(want, e.matrix()) < 1e-12);
    const int reversed[] = {2, 0};
    const Mat want_rev = oracle::on(3, 2, oracle::z(0.2)) * oracle::on(3, 0, oracle::z(-0.5)) * oracle::cz(3, 0, 2, 1.1);
    CHECK(oracle::distance_up_to_phase(want_rev, embed(g, 3, reversed).matrix()) < 1e-12);
    const int repeated[] = {1, 1};
    CHECK_THROWS_AS(embed(g, 3, repeated), ValidationError);
  }
}
