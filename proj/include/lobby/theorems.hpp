#pragma once

// Comparative statics between the constrained (capacity one) and
// unconstrained (capacity two) games: belief precision by parameter region,
// and the Pareto comparison of equilibrium payoffs.

#include <string>
#include <vector>

#include "lobby/equilibrium.hpp"
#include "lobby/game.hpp"

namespace lobby {

/// On-path access-stage beliefs about one issue and their precision
/// |B - 1/2|.
struct IssuePrecision {
  std::vector<double> beliefs;
  double min_precision = 0.5;
  double max_precision = 0.5;
};

struct Verdict {
  std::string statement;
  bool holds = false;
};

struct BeliefPrecisionReport {
  Region region = Region::R2;
  /// [0] capacity one, [1] capacity two; inner index is the issue.
  std::array<std::array<IssuePrecision, 2>, 2> precision{};
  std::vector<Verdict> verdicts;

  const IssuePrecision& at(Capacity c, std::size_t issue) const {
    return precision[c == Capacity::One ? 0 : 1][issue];
  }
  bool holds() const;
};

/// Builds both games' equilibria and evaluates the (in)equalities stated
/// for the detected region. Throws Error(Boundary) on knife-edge parameters.
BeliefPrecisionReport theorem1_compare(const GameParams& params,
                                       double tol = kTolerance);

IssuePrecision issue_precision(const StrategyProfile& profile,
                               const GameParams& params, std::size_t issue);

struct ParetoReport {
  double condition_lhs = 0;
  bool condition_holds = false;
  /// lhs within tolerance of 1.
  bool condition_boundary = false;
  /// True in the over-lobbying regime, where the comparison is claimed.
  bool applicable = false;
  PayoffVector payoffs_n1{};
  PayoffVector payoffs_n2{};
  /// Every capacity-one payoff weakly above capacity two, one strictly.
  bool pareto_verdict = false;
  bool consistent = false;

  /// Group 2's capacity-two payoff: enumeration against the two printed
  /// closed forms, pi2 (1 - pi1 - f2) and the braced expression.
  double eu2_n2_enumerated = 0;
  double eu2_n2_short_form = 0;
  double eu2_n2_braced_form = 0;
  bool short_form_matches = false;
  bool braced_form_matches = false;
};

ParetoReport theorem2_check(const GameParams& params, double tol = kTolerance);

}  // namespace lobby
