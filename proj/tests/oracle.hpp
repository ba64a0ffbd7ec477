#pragma once

// Test-side oracles, written without reusing library internals: an explicit
// leaf list of the game tree, closed forms substituted by hand, and seeded
// parameter generators for the property tests.

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "lobby/game.hpp"

namespace oracle {

using lobby::Access;
using lobby::Capacity;
using lobby::GameParams;
using lobby::History;
using lobby::RawParams;
using lobby::StrategyProfile;

struct Leaf {
  double prob = 0;
  std::array<int, 2> theta{};
  std::array<int, 2> lobbied{};
  std::array<int, 2> policy{};
};

/// Every terminal node with positive probability.
inline std::vector<Leaf> leaves(const StrategyProfile& s, const GameParams& g) {
  std::vector<Leaf> out;
  const double pi[2] = {g.pi(0), g.pi(1)};
  for (int t1 = 0; t1 <= 1; ++t1)
    for (int t2 = 0; t2 <= 1; ++t2)
      for (int l1 = 0; l1 <= 1; ++l1)
        for (int l2 = 0; l2 <= 1; ++l2) {
          double p = (t1 ? pi[0] : 1 - pi[0]) * (t2 ? pi[1] : 1 - pi[1]);
          double x1 = t1 ? s.lobby[0].on : s.lobby[0].off;
          double x2 = t2 ? s.lobby[1].on : s.lobby[1].off;
          p *= (l1 ? x1 : 1 - x1) * (l2 ? x2 : 1 - x2);
          if (p == 0) continue;

          // (access, probability) pairs
          std::vector<std::pair<Access, double>> acc;
          if (l1 && l2) {
            acc = {{Access::First, s.access.gamma1}, {Access::Second, 1 - s.access.gamma1}};
          } else if (l1 && s.access.lone_grant) {
            acc = {{Access::First, 1.0}};
          } else if (l2 && s.access.lone_grant) {
            acc = {{Access::Second, 1.0}};
          } else {
            acc = {{Access::None, 1.0}};
          }

          for (auto [a, pa] : acc) {
            if (pa == 0) continue;
            History h{{bool(l1), bool(l2)}, a, std::nullopt};
            if (a == Access::First) h.revealed = bool(t1);
            if (a == Access::Second) h.revealed = bool(t2);
            auto c = s.policy.at(h);

            std::vector<std::pair<std::array<int, 2>, double>> pol;
            if (g.capacity() == Capacity::Two) {
              for (int p1 = 0; p1 <= 1; ++p1)
                for (int p2 = 0; p2 <= 1; ++p2)
                  pol.push_back({{p1, p2}, (p1 ? c.reform1 : 1 - c.reform1) *
                                               (p2 ? c.reform2 : 1 - c.reform2)});
            } else {
              pol = {{{0, 0}, 1 - c.reform1 - c.reform2},
                     {{1, 0}, c.reform1},
                     {{0, 1}, c.reform2}};
            }
            for (auto [pv, pp] : pol) {
              if (pp == 0) continue;
              out.push_back({p * pa * pp, {t1, t2}, {l1, l2}, pv});
            }
          }
        }
  return out;
}

inline std::array<double, 3> payoffs(const StrategyProfile& s, const GameParams& g) {
  std::array<double, 3> u{};
  for (const auto& leaf : leaves(s, g)) {
    u[0] += leaf.prob * (leaf.policy[0] - leaf.lobbied[0] * g.cost(0));
    u[1] += leaf.prob * (leaf.policy[1] - leaf.lobbied[1] * g.cost(1));
    u[2] += leaf.prob * (g.alpha() * (leaf.policy[0] == leaf.theta[0]) +
                         (leaf.policy[1] == leaf.theta[1]));
  }
  return u;
}

/// Closed-form capacity-two over-lobbying profile values.
struct OverLobbying {
  double xi1_off, xi2_off, gamma2, rho2, b1, b2;
};

inline OverLobbying over_lobbying(double pi1, double pi2, double f1, double f2,
                                  double a) {
  OverLobbying o;
  o.xi1_off = pi1 / ((1 - pi1) * (2 * a - 1));
  o.xi2_off = pi2 / (1 - pi2);
  o.gamma2 = f1 / (2 * pi2);
  o.rho2 = pi2 * (2 * a - 1) * f2 / (pi1 * a * (2 * pi2 - f1));
  o.b1 = 1 - 1 / (2 * a);
  o.b2 = 0.5;
  return o;
}

inline double cost_ratio(double pi1, double pi2, double f1, double f2) {
  return (pi1 * f1 + pi2 * f2) / (pi1 * pi2);
}

inline double pareto_lhs(double pi1, double pi2, double f1, double f2, double a) {
  return (a * pi1 * f1 + (2 * a - 1) * pi2 * f2) / (pi1 * pi2);
}

/// Payoff closed forms: EU1 (both capacities), EU2 and EUDP per capacity.
inline double eu1(double pi1, double f1) { return pi1 * (1 - f1); }
inline double eu2_n1(double pi1, double pi2, double f2) { return pi2 * (1 - pi1 - f2); }
inline double eudp_n1(double pi1, double pi2, double a) { return a + 1 - pi1 * pi2; }
inline double eudp_n2(double pi1, double pi2, double a) {
  return a + 1 - 2 * pi1 * pi2 * a / (2 * a - 1);
}

// ------------------------------------------------------------ generators

class Draws {
 public:
  explicit Draws(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  /// pi ~ U(0, 1/2), f ~ U(0, 1), alpha ~ U(1, 4), kept off the open ends.
  RawParams any(Capacity c = Capacity::Two) {
    return {uniform(1e-3, 0.5 - 1e-3), uniform(1e-3, 0.5 - 1e-3), uniform(1e-3, 1 - 1e-3),
            uniform(1e-3, 1 - 1e-3), uniform(1 + 1e-3, 4), c};
  }

  /// Rejection sampling until `accept` holds.
  template <class Pred>
  RawParams until(Pred accept, Capacity c = Capacity::Two) {
    for (;;) {
      auto r = any(c);
      if (accept(r)) return r;
    }
  }

 private:
  std::mt19937_64 rng_;
};

inline double margin(double v, double cut) { return std::abs(v - cut); }

/// C clearly below or above 1.
inline bool over_lobbying_draw(const RawParams& r) {
  double c = cost_ratio(r.pi1, r.pi2, r.f1, r.f2);
  return c < 1 - 1e-6;
}
inline bool truthful_draw(const RawParams& r) {
  return cost_ratio(r.pi1, r.pi2, r.f1, r.f2) > 1 + 1e-6;
}
inline bool silent_draw(const RawParams& r) { return r.f2 > 1 - r.pi1 + 1e-6; }
inline bool both_truthful_n1_draw(const RawParams& r) { return r.f2 < 1 - r.pi1 - 1e-6; }

inline int region_of(const RawParams& r) {
  double lo = r.pi1 * (1 - r.f1 / r.pi2);
  double hi = 1 - r.pi1;
  if (r.f2 > hi) return 1;
  if (r.f2 < lo) return 3;
  return 2;
}
inline bool off_region_edges(const RawParams& r) {
  double lo = r.pi1 * (1 - r.f1 / r.pi2);
  double hi = 1 - r.pi1;
  return margin(r.f2, lo) > 1e-6 && margin(r.f2, hi) > 1e-6 &&
         margin(cost_ratio(r.pi1, r.pi2, r.f1, r.f2), 1) > 1e-6;
}

}  // namespace oracle
