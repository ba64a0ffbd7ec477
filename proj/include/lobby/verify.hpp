#pragma once

// Perfect-Bayesian-equilibrium checks for an arbitrary strategy profile.
// Every expectation is an exact sum over the finite game tree.

#include <string>
#include <vector>

#include "lobby/game.hpp"

namespace lobby {

struct VerificationIntermediates {
  /// Unconditional lobbying probability per group.
  std::array<double, 2> lobby_rate{};
  /// Probability group i is granted access given that it lobbies.
  std::array<double, 2> access_rate{};
  /// When both lobby: probability the policymaker matches p_i = theta_i if
  /// access goes to i (win) or to the rival (without), and the difference.
  std::array<double, 2> match_with_access{};
  std::array<double, 2> match_without_access{};
  std::array<double, 2> access_value{};
};

VerificationIntermediates compute_intermediates(const StrategyProfile& profile,
                                                const GameParams& params);

/// Probability that p_i = 1 given group i's state and lobbying decision,
/// with every other strategy held fixed.
double expected_reform(const StrategyProfile& profile, const GameParams& params,
                       std::size_t group, bool state, bool lobbies);

/// Group i's expected payoff in state `state` when it lobbies with
/// probability `xi` (the objective is affine in xi).
double lobby_expected_payoff(const StrategyProfile& profile,
                             const GameParams& params, std::size_t group,
                             bool state, double xi);

/// d Ev_i / d xi_i(state).
double lobby_payoff_derivative(const StrategyProfile& profile,
                               const GameParams& params, std::size_t group,
                               bool state);

enum class CheckKind { Bayes, Lobbying, Access, Policy };

struct ConditionCheck {
  CheckKind kind;
  std::string label;
  double value = 0;      // the quantity examined
  double violation = 0;  // 0 when satisfied exactly
  bool ok = true;
};

struct VerificationReport {
  bool bayes_ok = true;
  bool lobby_ok = true;
  bool access_ok = true;
  bool policy_ok = true;
  double max_violation = 0;
  std::vector<ConditionCheck> checks;

  bool passed() const { return bayes_ok && lobby_ok && access_ok && policy_ok; }
};

/// Checks Bayes consistency of on-path access beliefs, the lobbying
/// first-order conditions, access optimality when both groups lobby (and
/// when a lone lobbier's alternative history is defined), and sequential
/// rationality of the policy rule at every history. Throws
/// Error(MalformedProfile) when a reachable history has no policy entry.
VerificationReport verify_equilibrium(const StrategyProfile& profile,
                                      const GameParams& params,
                                      double tol = kTolerance);

/// One line per checked condition, then a summary line.
std::string format_report(const VerificationReport& report);

}  // namespace lobby
