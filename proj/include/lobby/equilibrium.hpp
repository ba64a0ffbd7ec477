#pragma once

// Parameter-regime classification and closed-form equilibrium construction
// for the unconstrained (capacity two) and constrained (capacity one) games.

#include <optional>
#include <string_view>

#include "lobby/game.hpp"

namespace lobby {

enum class Lemma1Regime { Truthful, OverLobbying, Boundary };
enum class Lemma2Regime {
  Case1GroupTwoSilent,
  Case2TruthfulExists,
  Case2TruthfulUnique,
  Boundary,
};
enum class Region { R1, R2, R3 };

std::string_view to_string(Lemma1Regime r);
std::string_view to_string(Lemma2Regime r);
std::string_view to_string(Region r);

struct RegimeReport {
  /// (pi1 f1 + pi2 f2) / (pi1 pi2); truthful lobbying survives iff >= 1.
  double cost_ratio = 0;
  Lemma1Regime lemma1 = Lemma1Regime::Truthful;
  Lemma2Regime lemma2 = Lemma2Regime::Case2TruthfulExists;

  /// Weak-inequality region; R2 is the closed interval [r2_lower, r2_upper].
  Region region = Region::R2;
  double r2_lower = 0;  // pi1 (1 - f1/pi2)
  double r2_upper = 0;  // 1 - pi1
  bool region_boundary = false;
  bool region_empty = false;

  /// (alpha pi1 f1 + (2 alpha - 1) pi2 f2) / (pi1 pi2) and whether it is <= 1.
  double pareto_lhs = 0;
  bool pareto_condition = false;

  bool any_boundary() const {
    return lemma1 == Lemma1Regime::Boundary || lemma2 == Lemma2Regime::Boundary ||
           region_boundary;
  }
};

RegimeReport classify_regimes(const GameParams& params, double tol = kTolerance);

struct ConstructOptions {
  /// Throw RegimeMismatch instead of resolving a knife-edge by the weak
  /// inequality.
  bool strict_regime = false;
  /// Build the capacity-two profile for this regime regardless of the
  /// parameters. Forcing OverLobbying outside its regime can raise
  /// DegenerateFormula.
  std::optional<Lemma1Regime> force_lemma1;
};

/// Capacity-two equilibrium. Truthful when the cost ratio is >= 1 (access
/// weight at the midpoint of its supporting interval), otherwise the unique
/// over-lobbying profile.
StrategyProfile lemma1_equilibrium(const GameParams& params,
                                   const ConstructOptions& options = {});

/// Capacity-one equilibrium. Group 2 silent when f2 > 1 - pi1, otherwise
/// both groups lobby truthfully and access goes to group 1.
StrategyProfile lemma2_equilibrium(const GameParams& params,
                                   const ConstructOptions& options = {});

/// Dispatches on params.capacity().
StrategyProfile construct_equilibrium(const GameParams& params,
                                      const ConstructOptions& options = {});

/// Fills every history with the canonical best response to the beliefs
/// implied by `profile.beliefs`.
void fill_policy_best_responses(StrategyProfile& profile,
                                const GameParams& params);

}  // namespace lobby
