#include "lobby/verify.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "lobby/profile_io.hpp"

namespace lobby {
namespace {

double match_prob(double reform, double belief_high) {
  return belief_high * reform + (1 - belief_high) * (1 - reform);
}

History both_lobby(Access a, bool revealed) {
  return {{true, true}, a, revealed};
}

Access access_to(std::size_t group) {
  return group == 0 ? Access::First : Access::Second;
}

std::string_view kind_name(CheckKind k) {
  switch (k) {
    case CheckKind::Bayes: return "bayes";
    case CheckKind::Lobbying: return "lobby";
    case CheckKind::Access: return "access";
    case CheckKind::Policy: return "policy";
  }
  return "?";
}

// Policymaker's expected utility at a history prefix where `lobbied` is
// observed and access goes to `access`, evaluated with access-stage beliefs.
double access_stage_value(const StrategyProfile& profile, const GameParams& params,
                          const std::array<bool, 2>& lobbied, Access access) {
  std::array<double, 2> belief = {profile.beliefs.access[0][lobbied[0]],
                                  profile.beliefs.access[1][lobbied[1]]};
  auto value_at = [&](const History& h) {
    const auto& c = profile.policy.at(h);
    double v = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      v += params.weight(i) * match_prob(c.reform(i), policy_belief(profile.beliefs, h, i));
    }
    return v;
  };
  auto g = accessed_group(access);
  if (!g) return value_at({lobbied, Access::None, std::nullopt});
  return belief[*g] * value_at({lobbied, access, true}) +
         (1 - belief[*g]) * value_at({lobbied, access, false});
}

}  // namespace

VerificationIntermediates compute_intermediates(const StrategyProfile& profile,
                                                const GameParams& params) {
  VerificationIntermediates out;
  for (std::size_t i = 0; i < 2; ++i) {
    out.lobby_rate[i] = profile.lobby[i].rate(params.pi(i));
  }
  for (std::size_t i = 0; i < 2; ++i) {
    double rival = out.lobby_rate[other(i)];
    out.access_rate[i] = rival * profile.access.gamma(i) +
                         (profile.access.lone_grant ? 1 - rival : 0.0);
  }

  std::array<double, 2> belief = {profile.beliefs.access[0][1],
                                  profile.beliefs.access[1][1]};
  for (std::size_t i = 0; i < 2; ++i) {
    std::size_t o = other(i);
    const auto& hi1 = profile.policy.at(both_lobby(access_to(i), true));
    const auto& hi0 = profile.policy.at(both_lobby(access_to(i), false));
    out.match_with_access[i] =
        belief[i] * hi1.reform(i) + (1 - belief[i]) * (1 - hi0.reform(i));

    const auto& ho1 = profile.policy.at(both_lobby(access_to(o), true));
    const auto& ho0 = profile.policy.at(both_lobby(access_to(o), false));
    out.match_without_access[i] =
        belief[o] * match_prob(ho1.reform(i), belief[i]) +
        (1 - belief[o]) * match_prob(ho0.reform(i), belief[i]);

    out.access_value[i] = out.match_with_access[i] - out.match_without_access[i];
  }
  return out;
}

double expected_reform(const StrategyProfile& profile, const GameParams& params,
                       std::size_t group, bool state, bool lobbies) {
  const std::size_t rival = other(group);
  double total = 0;
  for (bool rival_state : {false, true}) {
    double p_state = rival_state ? params.pi(rival) : 1 - params.pi(rival);
    for (bool rival_lobbies : {false, true}) {
      double xi = profile.lobby[rival].at(rival_state);
      double p_lobby = rival_lobbies ? xi : 1 - xi;
      double weight = p_state * p_lobby;
      if (weight == 0) continue;

      std::array<bool, 2> lobbied{};
      lobbied[group] = lobbies;
      lobbied[rival] = rival_lobbies;
      auto dist = access_distribution(lobbied, profile.access);
      for (int a = 0; a < 3; ++a) {
        if (dist[a] == 0) continue;
        Access access = static_cast<Access>(a);
        History h{lobbied, access, std::nullopt};
        if (auto g = accessed_group(access)) {
          h.revealed = *g == group ? state : rival_state;
        }
        total += weight * dist[a] * profile.policy.at(h).reform(group);
      }
    }
  }
  return total;
}

double lobby_expected_payoff(const StrategyProfile& profile,
                             const GameParams& params, std::size_t group,
                             bool state, double xi) {
  double lobby = expected_reform(profile, params, group, state, true) - params.cost(group);
  double quiet = expected_reform(profile, params, group, state, false);
  return xi * lobby + (1 - xi) * quiet;
}

double lobby_payoff_derivative(const StrategyProfile& profile,
                               const GameParams& params, std::size_t group,
                               bool state) {
  return expected_reform(profile, params, group, state, true) -
         expected_reform(profile, params, group, state, false) -
         params.cost(group);
}

VerificationReport verify_equilibrium(const StrategyProfile& profile,
                                      const GameParams& params, double tol) {
  VerificationReport report;
  auto record = [&](CheckKind kind, std::string label, double value, double violation) {
    ConditionCheck c{kind, std::move(label), value, violation, violation <= tol};
    report.max_violation = std::max(report.max_violation, violation);
    if (!c.ok) {
      switch (kind) {
        case CheckKind::Bayes: report.bayes_ok = false; break;
        case CheckKind::Lobbying: report.lobby_ok = false; break;
        case CheckKind::Access: report.access_ok = false; break;
        case CheckKind::Policy: report.policy_ok = false; break;
      }
    }
    report.checks.push_back(std::move(c));
  };

  // Every history the access convention can produce must carry a policy.
  for (const auto& h : all_histories()) {
    bool lone = h.lobbied[0] != h.lobbied[1];
    bool convention = !lone || (h.access != Access::None) == profile.access.lone_grant;
    if (convention) profile.policy.at(h);
  }

  // (a) Bayes consistency on path.
  for (std::size_t i = 0; i < 2; ++i) {
    auto post = bayes_access_belief(params.pi(i), profile.lobby[i]);
    for (bool lambda : {false, true}) {
      double stated = profile.beliefs.access[i][lambda];
      auto label = fmt::format("group{} belief after {}", i + 1, lambda ? "lobbying" : "silence");
      if (auto b = post.at(lambda)) {
        record(CheckKind::Bayes, fmt::format("{} (posterior {})", label, format_number(*b)),
               stated, std::abs(stated - *b));
      } else {
        record(CheckKind::Bayes, label + " (off path, free)", stated, 0.0);
      }
    }
  }

  // (b) Lobbying first-order conditions.
  for (std::size_t i = 0; i < 2; ++i) {
    for (bool state : {false, true}) {
      double xi = profile.lobby[i].at(state);
      double d = lobby_payoff_derivative(profile, params, i, state);
      double violation = 0;
      std::string_view bound = "interior";
      if (xi >= 1 - tol) {
        violation = std::max(0.0, -d);
        bound = "xi=1";
      } else if (xi <= tol) {
        violation = std::max(0.0, d);
        bound = "xi=0";
      } else {
        violation = std::abs(d);
      }
      record(CheckKind::Lobbying,
             fmt::format("group{} theta={} {} dEv/dxi", i + 1, int(state), bound), d,
             violation);
    }
  }

  // (c) Access when both lobby: weight only on the larger alpha_i * X_i.
  {
    auto inter = compute_intermediates(profile, params);
    double gap = params.weight(0) * inter.access_value[0] -
                 params.weight(1) * inter.access_value[1];
    double violation = 0;
    if (gap > tol) violation = profile.access.gamma(1);
    if (gap < -tol) violation = profile.access.gamma(0);
    record(CheckKind::Access,
           fmt::format("both lobby: alpha1*X1 - X2 (gamma1 {})",
                       format_number(profile.access.gamma1)),
           gap, violation);
  }
  // Lone lobbier: the convention must not be strictly worse than the
  // alternative when both continuation histories are defined.
  for (std::size_t i = 0; i < 2; ++i) {
    std::array<bool, 2> lobbied{};
    lobbied[i] = true;
    Access grant = access_to(i);
    bool defined = profile.policy.contains({lobbied, Access::None, std::nullopt}) &&
                   profile.policy.contains({lobbied, grant, false}) &&
                   profile.policy.contains({lobbied, grant, true});
    if (!defined) continue;
    double v_grant = access_stage_value(profile, params, lobbied, grant);
    double v_none = access_stage_value(profile, params, lobbied, Access::None);
    double chosen = profile.access.lone_grant ? v_grant : v_none;
    double best = std::max(v_grant, v_none);
    record(CheckKind::Access,
           fmt::format("group{} lobbies alone: {} access", i + 1,
                       profile.access.lone_grant ? "grant" : "deny"),
           chosen - best, best - chosen);
  }

  // (d) Sequential rationality of the policy rule.
  for (const auto& [h, c] : profile.policy.entries()) {
    std::array<double, 2> b = {policy_belief(profile.beliefs, h, 0),
                               policy_belief(profile.beliefs, h, 1)};
    auto br = policy_best_response(b, params, tol);
    double violation = br.misplaced_mass(c);
    if (params.capacity() == Capacity::One) {
      violation = std::max(violation, c.reform1 + c.reform2 - 1);
    }
    record(CheckKind::Policy,
           fmt::format("history {} beliefs ({}, {}){}", history_key(h), format_number(b[0]),
                       format_number(b[1]), br.tie ? " tie" : ""),
           c.reform1 + c.reform2, violation);
  }
  return report;
}

std::string format_report(const VerificationReport& report) {
  std::string out;
  for (const auto& c : report.checks) {
    out += fmt::format("{:<6} {:<4} {} value={} violation={}\n", kind_name(c.kind),
                       c.ok ? "ok" : "FAIL", c.label, format_number(c.value),
                       format_number(c.violation));
  }
  out += fmt::format("summary bayes={} lobby={} access={} policy={} max_violation={} => {}\n",
                     report.bayes_ok ? "ok" : "FAIL", report.lobby_ok ? "ok" : "FAIL",
                     report.access_ok ? "ok" : "FAIL", report.policy_ok ? "ok" : "FAIL",
                     format_number(report.max_violation), report.passed() ? "PASS" : "FAIL");
  return out;
}

}  // namespace lobby
