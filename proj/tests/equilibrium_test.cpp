#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lobby/equilibrium.hpp"
#include "lobby/verify.hpp"
#include "oracle.hpp"

using namespace lobby;

namespace {

constexpr double kTol = 1e-9;

bool near(double a, double b) { return std::abs(a - b) <= kTol; }

}  // namespace

TEST_CASE("over-lobbying fixture values") {
  auto params = validate_params({0.4, 0.4, 0.05, 0.05, 2, Capacity::Two});
  auto r = classify_regimes(params);
  CHECK(near(r.cost_ratio, 0.25));
  CHECK(r.lemma1 == Lemma1Regime::OverLobbying);
  CHECK(r.region == Region::R3);

  auto s = lemma1_equilibrium(params);
  CHECK(near(s.lobby[0].on, 1));
  CHECK(near(s.lobby[1].on, 1));
  CHECK(near(s.lobby[0].off, 2.0 / 9));
  CHECK(near(s.lobby[1].off, 2.0 / 3));
  CHECK(near(1 - s.access.gamma1, 0.0625));
  CHECK(near(s.beliefs.access[0][1], 0.75));
  CHECK(near(s.beliefs.access[1][1], 0.5));
  // Group 2 is reformed with probability 0.1 whenever it lobbies without access.
  CHECK(near(s.policy.at({{true, true}, Access::First, false}).reform2, 0.1));
  CHECK(near(s.policy.at({{true, true}, Access::First, true}).reform2, 0.1));
  CHECK(near(s.policy.at({{false, true}, Access::None, std::nullopt}).reform2, 0.1));
}

TEST_CASE("regime examples") {
  auto truthful = classify_regimes(validate_params({0.4, 0.4, 0.4, 0.4, 2}));
  CHECK(near(truthful.cost_ratio, 2));
  CHECK(truthful.lemma1 == Lemma1Regime::Truthful);

  auto silent = classify_regimes(validate_params({0.45, 0.3, 0.2, 0.6, 1.5}));
  CHECK(silent.lemma2 == Lemma2Regime::Case1GroupTwoSilent);
  CHECK(silent.region == Region::R1);

  auto unique = classify_regimes(validate_params({0.3, 0.3, 0.2, 0.2, 2}));
  CHECK(unique.lemma2 == Lemma2Regime::Case2TruthfulUnique);
  auto exists = classify_regimes(validate_params({0.3, 0.3, 0.9, 0.2, 2}));
  CHECK(exists.lemma2 == Lemma2Regime::Case2TruthfulExists);

  auto pareto = classify_regimes(validate_params({0.45, 0.45, 0.02, 0.02, 1.2}));
  CHECK(pareto.pareto_lhs == doctest::Approx(0.1155555556).epsilon(1e-9));
  CHECK(pareto.pareto_condition);

  // f2 exactly at 1 - pi1 and C exactly 1.
  CHECK(classify_regimes(validate_params({0.25, 0.3, 0.2, 0.75, 2})).lemma2 ==
        Lemma2Regime::Boundary);
  auto edge = classify_regimes(validate_params({0.25, 0.25, 0.125, 0.125, 2}));
  CHECK(edge.lemma1 == Lemma1Regime::Boundary);
  CHECK(edge.any_boundary());
}

TEST_CASE("constructed over-lobbying profiles match the closed forms") {
  oracle::Draws d(101);
  for (int k = 0; k < 1000; ++k) {
    auto raw = d.until(oracle::over_lobbying_draw);
    auto params = validate_params(raw);
    auto s = lemma1_equilibrium(params);
    auto o = oracle::over_lobbying(raw.pi1, raw.pi2, raw.f1, raw.f2, raw.alpha);
    CAPTURE(raw.pi1);
    CAPTURE(raw.pi2);
    CAPTURE(raw.f1);
    CAPTURE(raw.f2);
    CHECK(near(s.lobby[0].off, o.xi1_off));
    CHECK(near(s.lobby[1].off, o.xi2_off));
    CHECK(near(1 - s.access.gamma1, o.gamma2));
    CHECK(near(s.beliefs.access[0][1], o.b1));
    CHECK(near(s.beliefs.access[1][1], o.b2));
    CHECK(near(s.policy.at({{true, true}, Access::First, false}).reform2, o.rho2));
  }
}

TEST_CASE("C < 1 keeps every over-lobbying closed form inside [0,1]") {
  oracle::Draws d(7);
  for (int k = 0; k < 10000; ++k) {
    auto r = d.until([](const RawParams& r) {
      return oracle::cost_ratio(r.pi1, r.pi2, r.f1, r.f2) < 1;
    });
    REQUIRE(2 * r.pi2 - r.f1 > 0);
    auto o = oracle::over_lobbying(r.pi1, r.pi2, r.f1, r.f2, r.alpha);
    for (double v : {o.xi1_off, o.xi2_off, o.gamma2, o.rho2}) {
      REQUIRE(v >= 0);
      REQUIRE(v <= 1);
    }
  }
}

TEST_CASE("truthful access weight lies in its supporting interval") {
  oracle::Draws d(3);
  for (int k = 0; k < 1000; ++k) {
    auto r = d.until(oracle::truthful_draw);
    auto s = lemma1_equilibrium(validate_params(r));
    double lo = std::max(0.0, 1 - r.f1 / r.pi2);
    double hi = std::min(1.0, r.f2 / r.pi1);
    REQUIRE(lo <= hi + kTol);
    CHECK(s.access.gamma1 >= lo - kTol);
    CHECK(s.access.gamma1 <= hi + kTol);
    CHECK(s.lobby[0].off == 0);
    CHECK(s.lobby[1].off == 0);
  }
}

TEST_CASE("capacity-one constructions") {
  auto silent = validate_params({0.45, 0.3, 0.2, 0.6, 1.5, Capacity::One});
  auto s = lemma2_equilibrium(silent);
  CHECK(s.lobby[1].on == 0);
  CHECK(s.lobby[1].off == 0);
  CHECK(s.lobby[0].on == 1);
  CHECK(s.beliefs.off_path[1][1]);
  CHECK(near(s.beliefs.access[1][0], 0.3));

  auto truthful = lemma2_equilibrium(validate_params({0.4, 0.4, 0.4, 0.4, 2, Capacity::One}));
  CHECK(truthful.lobby[1].on == 1);
  CHECK(truthful.access.gamma1 == 1);
}

TEST_CASE("regime errors") {
  auto n2 = validate_params({0.4, 0.4, 0.05, 0.05, 2, Capacity::Two});
  auto n1 = n2.with_capacity(Capacity::One);
  auto kind = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return std::optional(e.kind());
    }
    return std::optional<ErrorKind>();
  };
  CHECK(kind([&] { lemma1_equilibrium(n1); }) == ErrorKind::RegimeMismatch);
  CHECK(kind([&] { lemma2_equilibrium(n2); }) == ErrorKind::RegimeMismatch);

  ConstructOptions strict;
  strict.strict_regime = true;
  auto edge = validate_params({0.25, 0.25, 0.125, 0.125, 2});
  CHECK(kind([&] { lemma1_equilibrium(edge, strict); }) == ErrorKind::RegimeMismatch);
  CHECK_FALSE(kind([&] { lemma1_equilibrium(edge); }).has_value());
  auto silent_edge = validate_params({0.25, 0.3, 0.2, 0.75, 2, Capacity::One});
  CHECK(kind([&] { lemma2_equilibrium(silent_edge, strict); }) == ErrorKind::RegimeMismatch);

  // Forcing the over-lobbying closed forms where 2 pi2 <= f1.
  ConstructOptions force;
  force.force_lemma1 = Lemma1Regime::OverLobbying;
  auto degenerate = validate_params({0.3, 0.1, 0.5, 0.5, 2});
  CHECK(kind([&] { lemma1_equilibrium(degenerate, force); }) == ErrorKind::DegenerateFormula);
}

TEST_CASE("region partition identities") {
  oracle::Draws d(17);
  for (int k = 0; k < 10000; ++k) {
    auto raw = d.any();
    auto r = classify_regimes(validate_params(raw));
    bool r3 = r.region == Region::R3;
    CHECK(r3 == (r.cost_ratio < 1));
    if (r.region == Region::R1) CHECK(r.cost_ratio > 1);
    CHECK(int(r.region) + 1 == oracle::region_of(raw));
  }
}

TEST_CASE("every policy entry is a best response except the group-2 mixing") {
  oracle::Draws d(23);
  for (int k = 0; k < 300; ++k) {
    auto params = validate_params(d.any(k % 2 ? Capacity::One : Capacity::Two));
    auto s = construct_equilibrium(params);
    CHECK(s.policy.entries().size() == 11);
    CHECK(verify_equilibrium(s, params).policy_ok);
  }
}
