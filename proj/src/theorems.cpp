#include "lobby/theorems.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "lobby/payoff.hpp"

namespace lobby {

bool BeliefPrecisionReport::holds() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const Verdict& v) { return v.holds; });
}

IssuePrecision issue_precision(const StrategyProfile& profile,
                               const GameParams& params, std::size_t issue) {
  IssuePrecision out;
  double rate = profile.lobby[issue].rate(params.pi(issue));
  out.min_precision = 0.5;
  out.max_precision = 0.0;
  for (bool lambda : {false, true}) {
    double mass = lambda ? rate : 1 - rate;
    if (mass <= 0) continue;
    double b = profile.beliefs.access[issue][lambda];
    out.beliefs.push_back(b);
    double precision = std::abs(b - 0.5);
    out.min_precision = std::min(out.min_precision, precision);
    out.max_precision = std::max(out.max_precision, precision);
  }
  return out;
}

BeliefPrecisionReport theorem1_compare(const GameParams& params, double tol) {
  auto regimes = classify_regimes(params, tol);
  if (regimes.any_boundary()) {
    throw Error(ErrorKind::Boundary, "parameters sit on a regime boundary");
  }
  BeliefPrecisionReport r;
  r.region = regimes.region;

  auto n1 = params.with_capacity(Capacity::One);
  auto n2 = params.with_capacity(Capacity::Two);
  auto eq1 = lemma2_equilibrium(n1);
  auto eq2 = lemma1_equilibrium(n2);
  for (std::size_t i = 0; i < 2; ++i) {
    r.precision[0][i] = issue_precision(eq1, n1, i);
    r.precision[1][i] = issue_precision(eq2, n2, i);
  }

  auto sharp = [&](Capacity c, std::size_t i) {
    return r.at(c, i).min_precision >= 0.5 - tol;
  };
  auto add = [&](std::string s, bool ok) { r.verdicts.push_back({std::move(s), ok}); };

  switch (r.region) {
    case Region::R1:
      add("|B1^{N=2} - 1/2| = 1/2", sharp(Capacity::Two, 0));
      add("|B1^{N=1} - 1/2| = 1/2", sharp(Capacity::One, 0));
      add("|B2^{N=2} - 1/2| = 1/2", sharp(Capacity::Two, 1));
      add("|B2^{N=1} - 1/2| < 1/2",
          r.at(Capacity::One, 1).max_precision < 0.5 - tol);
      break;
    case Region::R2:
      for (std::size_t i = 0; i < 2; ++i) {
        add(fmt::format("|B{0}^{{N=2}} - 1/2| = 1/2", i + 1), sharp(Capacity::Two, i));
        add(fmt::format("|B{0}^{{N=1}} - 1/2| = 1/2", i + 1), sharp(Capacity::One, i));
      }
      break;
    case Region::R3: {
      bool some_strict = false;
      for (std::size_t i = 0; i < 2; ++i) {
        add(fmt::format("|B{0}^{{N=2}} - 1/2| <= 1/2", i + 1),
            r.at(Capacity::Two, i).max_precision <= 0.5 + tol);
        add(fmt::format("|B{0}^{{N=1}} - 1/2| = 1/2", i + 1), sharp(Capacity::One, i));
        some_strict |= r.at(Capacity::Two, i).min_precision < 0.5 - tol;
      }
      add("strict for some issue under N=2", some_strict);
      break;
    }
  }
  return r;
}

ParetoReport theorem2_check(const GameParams& params, double tol) {
  auto regimes = classify_regimes(params, tol);
  ParetoReport r;
  r.condition_lhs = regimes.pareto_lhs;
  r.condition_holds = regimes.pareto_condition;
  r.condition_boundary = std::abs(regimes.pareto_lhs - 1) <= tol;
  r.applicable = regimes.lemma1 == Lemma1Regime::OverLobbying;

  auto n1 = params.with_capacity(Capacity::One);
  auto n2 = params.with_capacity(Capacity::Two);
  r.payoffs_n1 = exact_payoffs(lemma2_equilibrium(n1), n1);
  r.payoffs_n2 = exact_payoffs(lemma1_equilibrium(n2), n2);

  auto a = r.payoffs_n1.as_array();
  auto b = r.payoffs_n2.as_array();
  bool weak = true, strict = false;
  for (std::size_t k = 0; k < 3; ++k) {
    weak &= a[k] >= b[k] - tol;
    strict |= a[k] > b[k] + tol;
  }
  r.pareto_verdict = weak && strict;
  r.consistent = r.pareto_verdict == r.condition_holds;

  const double pi1 = params.pi(0), pi2 = params.pi(1);
  const double f1 = params.cost(0), f2 = params.cost(1);
  const double alpha = params.alpha();
  r.eu2_n2_enumerated = r.payoffs_n2.group2;
  r.eu2_n2_short_form = pi2 * (1 - pi1 - f2);
  r.eu2_n2_braced_form =
      pi2 * (1 -
             pi1 * (alpha * (2 * pi2 - f1) - pi2 / pi1 * (2 * alpha - 1) * f2) /
                 (pi2 * (2 * alpha - 1)) -
             f2);
  r.short_form_matches = std::abs(r.eu2_n2_short_form - r.eu2_n2_enumerated) <= tol;
  r.braced_form_matches = std::abs(r.eu2_n2_braced_form - r.eu2_n2_enumerated) <= tol;
  return r;
}

}  // namespace lobby
