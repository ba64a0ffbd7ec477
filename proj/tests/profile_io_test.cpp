#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lobby/equilibrium.hpp"
#include "lobby/profile_io.hpp"
#include "oracle.hpp"

using namespace lobby;

namespace {

void check_same(const StrategyProfile& a, const StrategyProfile& b, double tol) {
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.lobby[i].on == doctest::Approx(b.lobby[i].on).epsilon(tol));
    CHECK(a.lobby[i].off == doctest::Approx(b.lobby[i].off).epsilon(tol));
    for (int l = 0; l < 2; ++l) {
      CHECK(a.beliefs.access[i][l] == doctest::Approx(b.beliefs.access[i][l]).epsilon(tol));
      CHECK(a.beliefs.off_path[i][l] == b.beliefs.off_path[i][l]);
    }
  }
  CHECK(a.access.gamma1 == doctest::Approx(b.access.gamma1).epsilon(tol));
  CHECK(a.access.lone_grant == b.access.lone_grant);
  REQUIRE(a.policy.entries().size() == b.policy.entries().size());
  for (const auto& [h, c] : a.policy.entries()) {
    CHECK(b.policy.at(h).reform1 == doctest::Approx(c.reform1).epsilon(tol));
    CHECK(b.policy.at(h).reform2 == doctest::Approx(c.reform2).epsilon(tol));
  }
}

}  // namespace

TEST_CASE("numbers print with 12 significant digits") {
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(2.0 / 9) == "0.222222222222");
  CHECK(format_number(2.84) == "2.84");
  CHECK(format_number(1.0 / 3 * 1e-7) == "3.33333333333e-08");
  CHECK(round12(2.0 / 3) == 0.666666666667);
}

TEST_CASE("history keys round-trip") {
  for (const auto& h : all_histories()) {
    CHECK(parse_history_key(history_key(h)) == h);
  }
  CHECK(history_key({{true, true}, Access::Second, true}) == "11.a2.1");
  CHECK(history_key({{false, false}, Access::None, std::nullopt}) == "00.none");
  for (auto bad : {"11.none", "10.a2.1", "01.a1.0", "2x.none", "11.a1", "11.a1.2", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_history_key(bad), Error);
  }
}

TEST_CASE("text and JSON documents round-trip constructed profiles") {
  oracle::Draws d(5);
  for (int k = 0; k < 200; ++k) {
    auto cap = k % 2 ? Capacity::One : Capacity::Two;
    auto params = validate_params(d.any(cap));
    auto profile = construct_equilibrium(params);

    auto doc = read_profile(write_profile(params, profile));
    CHECK(doc.params.raw().pi1 == doctest::Approx(params.pi(0)).epsilon(1e-11));
    CHECK(doc.params.capacity() == cap);
    check_same(profile, doc.profile, 1e-11);

    auto json_doc = read_profile(profile_to_json(params, profile).dump());
    check_same(profile, json_doc.profile, 1e-11);
  }
}

TEST_CASE("writer output is stable") {
  auto params = validate_params({0.4, 0.4, 0.05, 0.05, 2, Capacity::Two});
  auto profile = construct_equilibrium(params);
  auto text = write_profile(params, profile);
  CHECK(text == write_profile(read_profile(text).params, read_profile(text).profile));
  CHECK(text.find("xi1_off = 0.222222222222\n") != std::string::npos);
  CHECK(text.find("gamma1 = 0.9375\n") != std::string::npos);
  CHECK(text.find("rho.00.none = 0 0\n") != std::string::npos);

  auto j = profile_to_json(params, profile);
  CHECK(j.begin().key() == "pi1");
  CHECK(j["rho.11.a1.0"][1].get<double>() == doctest::Approx(0.1));
}

TEST_CASE("malformed documents are rejected with the right kind") {
  auto params = validate_params({0.4, 0.4, 0.05, 0.05, 2, Capacity::Two});
  auto good = write_profile(params, construct_equilibrium(params));

  auto kind_of = [](const std::string& text) {
    try {
      read_profile(text);
    } catch (const Error& e) {
      return std::optional(e.kind());
    }
    return std::optional<ErrorKind>();
  };

  CHECK(kind_of("# only a comment\n") == ErrorKind::MalformedProfile);
  CHECK(kind_of(good + "pi1 = 0.3\n") == ErrorKind::MalformedProfile);  // duplicate
  CHECK(kind_of("{ not json") == ErrorKind::MalformedProfile);
  CHECK(kind_of("[1, 2]") == ErrorKind::MalformedProfile);

  std::string no_gamma = good;
  no_gamma.erase(no_gamma.find("gamma1"), no_gamma.find('\n', no_gamma.find("gamma1")) -
                                              no_gamma.find("gamma1") + 1);
  CHECK(kind_of(no_gamma) == ErrorKind::MalformedProfile);

  std::string bad_pi = good;
  bad_pi.replace(bad_pi.find("pi1 = 0.4"), 9, "pi1 = 0.7");
  CHECK(kind_of(bad_pi) == ErrorKind::OutOfRange);

  std::string bad_xi = good;
  bad_xi.replace(bad_xi.find("xi1_on = 1"), 10, "xi1_on = 2");
  CHECK(kind_of(bad_xi).has_value());

  std::string bad_num = good;
  bad_num.replace(bad_num.find("alpha = 2"), 9, "alpha = two");
  CHECK(kind_of(bad_num) == ErrorKind::MalformedProfile);

  CHECK_FALSE(kind_of("# header comment\n" + good).has_value());
}
