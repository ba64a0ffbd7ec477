#include "lobby/payoff.hpp"

#include <cmath>

namespace lobby {
namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

SplitMix64 SplitMix64::for_trial(std::uint64_t seed, std::uint64_t trial) {
  return SplitMix64(mix(seed) ^ mix(trial * kGolden + 1));
}

SplitMix64::result_type SplitMix64::operator()() {
  state_ += kGolden;
  return mix(state_);
}

PayoffVector exact_payoffs(const StrategyProfile& profile, const GameParams& params) {
  std::array<double, 3> total{};
  for (int t = 0; t < 4; ++t) {
    StateVector theta = {bool(t & 1), bool(t & 2)};
    double p_theta = 1;
    for (std::size_t i = 0; i < 2; ++i) {
      p_theta *= theta[i] ? params.pi(i) : 1 - params.pi(i);
    }
    for (int l = 0; l < 4; ++l) {
      std::array<bool, 2> lobbied = {bool(l & 1), bool(l & 2)};
      double p_lobby = 1;
      for (std::size_t i = 0; i < 2; ++i) {
        double xi = profile.lobby[i].at(theta[i]);
        p_lobby *= lobbied[i] ? xi : 1 - xi;
      }
      double weight = p_theta * p_lobby;
      if (weight == 0) continue;

      auto dist = access_distribution(lobbied, profile.access);
      for (int a = 0; a < 3; ++a) {
        if (dist[a] == 0) continue;
        Access access = static_cast<Access>(a);
        History h{lobbied, access, std::nullopt};
        if (auto g = accessed_group(access)) h.revealed = theta[*g];
        const auto& c = profile.policy.at(h);

        double w = weight * dist[a];
        double dp = 0;
        for (std::size_t i = 0; i < 2; ++i) {
          double r = c.reform(i);
          total[i] += w * (r - (lobbied[i] ? params.cost(i) : 0.0));
          dp += params.weight(i) * (theta[i] ? r : 1 - r);
        }
        total[2] += w * dp;
      }
    }
  }
  return PayoffVector::from_array(total);
}

PlayTrace single_play(const StrategyProfile& profile, const GameParams& params,
                      SplitMix64& rng) {
  PlayTrace trace;
  trace.theta = draw_state(params, rng);
  for (std::size_t i = 0; i < 2; ++i) {
    trace.lobbied[i] = bernoulli(rng, profile.lobby[i].at(trace.theta[i]));
  }

  if (trace.lobbied[0] && trace.lobbied[1]) {
    trace.access = bernoulli(rng, profile.access.gamma1) ? Access::First : Access::Second;
  } else if (trace.lobbied[0] || trace.lobbied[1]) {
    if (profile.access.lone_grant) {
      trace.access = trace.lobbied[0] ? Access::First : Access::Second;
    }
  }
  if (auto g = accessed_group(trace.access)) trace.revealed = trace.theta[*g];

  const auto& c = profile.policy.at({trace.lobbied, trace.access, trace.revealed});
  if (params.capacity() == Capacity::Two) {
    trace.policy[0] = bernoulli(rng, c.reform1);
    trace.policy[1] = bernoulli(rng, c.reform2);
  } else {
    double u = uniform01(rng);
    trace.policy[0] = u < c.reform1;
    trace.policy[1] = !trace.policy[0] && u < c.reform1 + c.reform2;
  }

  trace.payoffs.group1 = double(trace.policy[0]) - (trace.lobbied[0] ? params.cost(0) : 0.0);
  trace.payoffs.group2 = double(trace.policy[1]) - (trace.lobbied[1] ? params.cost(1) : 0.0);
  trace.payoffs.policymaker = dp_utility(trace.policy, trace.theta, params);
  return trace;
}

PayoffEstimate simulate(const StrategyProfile& profile, const GameParams& params,
                        std::uint64_t trials, std::uint64_t seed) {
  PayoffEstimate est;
  est.trials = trials;
  est.seed = seed;
  if (trials == 0) return est;

  // Welford, in trial order.
  std::array<double, 3> mean{}, m2{};
  for (std::uint64_t t = 0; t < trials; ++t) {
    auto rng = SplitMix64::for_trial(seed, t);
    auto x = single_play(profile, params, rng).payoffs.as_array();
    double n = double(t + 1);
    for (std::size_t k = 0; k < 3; ++k) {
      double delta = x[k] - mean[k];
      mean[k] += delta / n;
      m2[k] += delta * (x[k] - mean[k]);
    }
  }
  est.mean = PayoffVector::from_array(mean);
  if (trials > 1) {
    std::array<double, 3> se{};
    double n = double(trials);
    for (std::size_t k = 0; k < 3; ++k) se[k] = std::sqrt(m2[k] / (n - 1) / n);
    est.std_error = PayoffVector::from_array(se);
  }
  return est;
}

}  // namespace lobby
