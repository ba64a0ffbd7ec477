#pragma once

// Exact ex-ante payoffs by enumeration of the game tree, and a seeded
// Monte Carlo simulator of complete plays that cross-checks them.

#include <cstdint>
#include <optional>
#include <string_view>

#include "lobby/game.hpp"

namespace lobby {

/// SplitMix64. Each trial gets its own stream keyed by (seed, trial index),
/// so any partition of trials across workers draws the same numbers.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::string_view kAlgorithm = "splitmix64-trial-keyed-v1";

  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static SplitMix64 for_trial(std::uint64_t seed, std::uint64_t trial);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

struct PlayTrace {
  StateVector theta{};
  std::array<bool, 2> lobbied{};
  Access access = Access::None;
  std::optional<bool> revealed;
  PolicyVector policy{};
  /// Realized v_i - lambda_i f_i for each group and U for the policymaker.
  PayoffVector payoffs{};
};

struct PayoffEstimate {
  PayoffVector mean{};
  /// Sample standard deviation / sqrt(trials); absent when trials == 1.
  std::optional<PayoffVector> std_error;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string_view algorithm = SplitMix64::kAlgorithm;

  bool operator==(const PayoffEstimate&) const = default;
};

/// Expected payoffs over states, lobbying, access and policy randomization.
/// Throws Error(MalformedProfile) when a reachable history lacks a policy.
PayoffVector exact_payoffs(const StrategyProfile& profile, const GameParams& params);

/// One rollout through the four stages.
PlayTrace single_play(const StrategyProfile& profile, const GameParams& params,
                      SplitMix64& rng);

/// Average of `trials` independent plays (trials >= 1).
PayoffEstimate simulate(const StrategyProfile& profile, const GameParams& params,
                        std::uint64_t trials, std::uint64_t seed);

}  // namespace lobby
