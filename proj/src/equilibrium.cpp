#include "lobby/equilibrium.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace lobby {

std::string_view to_string(Lemma1Regime r) {
  switch (r) {
    case Lemma1Regime::Truthful: return "Truthful";
    case Lemma1Regime::OverLobbying: return "OverLobbying";
    case Lemma1Regime::Boundary: return "Boundary";
  }
  return "?";
}

std::string_view to_string(Lemma2Regime r) {
  switch (r) {
    case Lemma2Regime::Case1GroupTwoSilent: return "Case1_GI2Silent";
    case Lemma2Regime::Case2TruthfulExists: return "Case2_TruthfulExists";
    case Lemma2Regime::Case2TruthfulUnique: return "Case2_TruthfulUnique";
    case Lemma2Regime::Boundary: return "Boundary";
  }
  return "?";
}

std::string_view to_string(Region r) {
  switch (r) {
    case Region::R1: return "R1";
    case Region::R2: return "R2";
    case Region::R3: return "R3";
  }
  return "?";
}

RegimeReport classify_regimes(const GameParams& params, double tol) {
  const double pi1 = params.pi(0), pi2 = params.pi(1);
  const double f1 = params.cost(0), f2 = params.cost(1);
  const double alpha = params.alpha();

  RegimeReport r;
  r.cost_ratio = (pi1 * f1 + pi2 * f2) / (pi1 * pi2);
  if (std::abs(r.cost_ratio - 1) <= tol) {
    r.lemma1 = Lemma1Regime::Boundary;
  } else {
    r.lemma1 = r.cost_ratio > 1 ? Lemma1Regime::Truthful : Lemma1Regime::OverLobbying;
  }

  const double silent_cut = 1 - pi1;
  if (std::abs(f2 - silent_cut) <= tol) {
    r.lemma2 = Lemma2Regime::Boundary;
  } else if (f2 > silent_cut) {
    r.lemma2 = Lemma2Regime::Case1GroupTwoSilent;
  } else if (f1 <= 1 - pi1 && f2 <= 1 - pi2) {
    r.lemma2 = Lemma2Regime::Case2TruthfulUnique;
  } else {
    r.lemma2 = Lemma2Regime::Case2TruthfulExists;
  }

  r.r2_lower = pi1 * (1 - f1 / pi2);
  r.r2_upper = silent_cut;
  r.region_empty = r.r2_lower > r.r2_upper + tol;
  r.region_boundary =
      std::abs(f2 - r.r2_lower) <= tol || std::abs(f2 - r.r2_upper) <= tol;
  if (f2 > r.r2_upper) {
    r.region = Region::R1;
  } else if (f2 < r.r2_lower) {
    r.region = Region::R3;
  } else {
    r.region = Region::R2;
  }

  r.pareto_lhs = (alpha * pi1 * f1 + (2 * alpha - 1) * pi2 * f2) / (pi1 * pi2);
  r.pareto_condition = r.pareto_lhs <= 1;
  return r;
}

void fill_policy_best_responses(StrategyProfile& profile,
                                const GameParams& params) {
  for (const auto& h : all_histories()) {
    std::array<double, 2> b = {policy_belief(profile.beliefs, h, 0),
                               policy_belief(profile.beliefs, h, 1)};
    profile.policy.set(h, policy_best_response(b, params).canonical);
  }
}

namespace {

StrategyProfile truthful_profile() {
  StrategyProfile p;
  for (std::size_t i = 0; i < 2; ++i) {
    p.lobby[i] = {1.0, 0.0};
    p.beliefs.access[i] = {0.0, 1.0};
  }
  return p;
}

StrategyProfile lemma1_truthful(const GameParams& params) {
  StrategyProfile p = truthful_profile();
  // Neither group gains from lobbying on bad news iff
  // gamma1 in [1 - f1/pi2, f2/pi1].
  double lo = std::clamp(1 - params.cost(0) / params.pi(1), 0.0, 1.0);
  double hi = std::clamp(params.cost(1) / params.pi(0), 0.0, 1.0);
  p.access.gamma1 = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
  fill_policy_best_responses(p, params);
  return p;
}

StrategyProfile lemma1_over_lobbying(const GameParams& params) {
  const double pi1 = params.pi(0), pi2 = params.pi(1);
  const double f1 = params.cost(0), f2 = params.cost(1);
  const double alpha = params.alpha();

  const double denom = pi1 * alpha * (2 * pi2 - f1);
  if (!(2 * pi2 - f1 > 0)) {
    throw Error(ErrorKind::DegenerateFormula,
                fmt::format("2 pi2 - f1 = {} <= 0 leaves the group-2 policy "
                            "mixing undefined",
                            2 * pi2 - f1));
  }

  StrategyProfile p;
  for (std::size_t i = 0; i < 2; ++i) {
    double pi = params.pi(i);
    p.lobby[i] = {1.0, pi / (1 - pi) / (2 * params.weight(i) - 1)};
  }
  const double gamma2 = f1 / (2 * pi2);
  const double mix2 = pi2 * (2 * alpha - 1) * f2 / denom;
  for (double v : {p.lobby[0].off, p.lobby[1].off, gamma2, mix2}) {
    if (!(v >= 0 && v <= 1)) {
      throw Error(ErrorKind::DegenerateFormula,
                  fmt::format("over-lobbying closed form leaves [0,1] ({})", v));
    }
  }
  p.access.gamma1 = 1 - gamma2;

  for (std::size_t i = 0; i < 2; ++i) {
    auto post = bayes_access_belief(params.pi(i), p.lobby[i]);
    p.beliefs.access[i] = {post.quiet.value_or(0.0), post.lobby.value_or(1.0)};
  }
  fill_policy_best_responses(p, params);

  // Group 2's posterior after lobbying is exactly 1/2; the policymaker mixes
  // so that group 2 is indifferent on bad news.
  for (const auto& [h, c] : p.policy.entries()) {
    if (h.lobbied[1] && h.access != Access::Second) {
      PolicyChoice mixed = c;
      mixed.reform2 = mix2;
      p.policy.set(h, mixed);
    }
  }
  return p;
}

}  // namespace

StrategyProfile lemma1_equilibrium(const GameParams& params,
                                   const ConstructOptions& options) {
  if (params.capacity() != Capacity::Two) {
    throw Error(ErrorKind::RegimeMismatch,
                "the unconstrained equilibrium needs capacity 2");
  }
  Lemma1Regime regime =
      options.force_lemma1.value_or(classify_regimes(params).lemma1);
  if (regime == Lemma1Regime::Boundary) {
    if (options.strict_regime) {
      throw Error(ErrorKind::RegimeMismatch,
                  "cost ratio is within tolerance of 1 (knife edge)");
    }
    regime = Lemma1Regime::Truthful;
  }
  return regime == Lemma1Regime::Truthful ? lemma1_truthful(params)
                                          : lemma1_over_lobbying(params);
}

StrategyProfile lemma2_equilibrium(const GameParams& params,
                                   const ConstructOptions& options) {
  if (params.capacity() != Capacity::One) {
    throw Error(ErrorKind::RegimeMismatch,
                "the constrained equilibrium needs capacity 1");
  }
  Lemma2Regime regime = classify_regimes(params).lemma2;
  if (regime == Lemma2Regime::Boundary && options.strict_regime) {
    throw Error(ErrorKind::RegimeMismatch, "f2 is within tolerance of 1 - pi1");
  }

  StrategyProfile p = truthful_profile();
  p.access.gamma1 = 1.0;
  if (regime == Lemma2Regime::Case1GroupTwoSilent) {
    p.lobby[1] = {0.0, 0.0};
    // Lobbying by group 2 is off path; it is read as favourable news.
    p.beliefs.access[1] = {params.pi(1), 1.0};
    p.beliefs.off_path[1][1] = true;
  }
  fill_policy_best_responses(p, params);
  return p;
}

StrategyProfile construct_equilibrium(const GameParams& params,
                                      const ConstructOptions& options) {
  return params.capacity() == Capacity::Two ? lemma1_equilibrium(params, options)
                                            : lemma2_equilibrium(params, options);
}

}  // namespace lobby
