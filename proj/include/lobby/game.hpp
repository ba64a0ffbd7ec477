#pragma once

// Core types of the two-issue lobbying game: parameters, strategies, beliefs,
// and the stage primitives shared by every other module.
//
// Indexing: groups and issues are 0 (issue 1, the weighted one) and 1
// (issue 2). Group i lobbies on issue i.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace lobby {

/// Global comparison tolerance for probabilities and payoffs.
inline constexpr double kTolerance = 1e-9;

inline constexpr std::size_t other(std::size_t i) { return 1 - i; }

enum class ErrorKind {
  OutOfRange,
  RegimeMismatch,
  DegenerateFormula,
  MalformedProfile,
  FileUnreadable,
  SchemaMismatch,
  MissingIncome,
  Boundary,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Leadership constraint: the number of issues the policymaker may reform.
enum class Capacity { One = 1, Two = 2 };

struct RawParams {
  double pi1 = 0, pi2 = 0;
  double f1 = 0, f2 = 0;
  double alpha = 0;
  Capacity capacity = Capacity::Two;
};

struct ParamViolation {
  std::string field;
  std::string message;
};

class GameParams;

/// Every violated range constraint of `raw`; empty means valid.
std::vector<ParamViolation> check_params(const RawParams& raw);

/// Throws Error(OutOfRange) listing every violated constraint.
GameParams validate_params(const RawParams& raw);

/// Validated, immutable game parameters.
class GameParams {
 public:
  double pi(std::size_t i) const { return pi_[i]; }
  double cost(std::size_t i) const { return cost_[i]; }
  double alpha() const { return alpha_; }
  /// alpha_1 = alpha, alpha_2 = 1.
  double weight(std::size_t i) const { return i == 0 ? alpha_ : 1.0; }
  Capacity capacity() const { return capacity_; }

  GameParams with_capacity(Capacity c) const {
    GameParams copy = *this;
    copy.capacity_ = c;
    return copy;
  }
  RawParams raw() const {
    return {pi_[0], pi_[1], cost_[0], cost_[1], alpha_, capacity_};
  }

 private:
  friend GameParams validate_params(const RawParams& raw);
  GameParams() = default;

  std::array<double, 2> pi_{};
  std::array<double, 2> cost_{};
  double alpha_ = 0;
  Capacity capacity_ = Capacity::Two;
};

using StateVector = std::array<bool, 2>;
using PolicyVector = std::array<bool, 2>;

/// Lobbying probabilities of one group, conditional on its private state.
struct LobbyRule {
  double on = 0;   // xi(1)
  double off = 0;  // xi(0)
  double at(bool theta) const { return theta ? on : off; }
  /// Unconditional probability of lobbying given prior `pi`.
  double rate(double pi) const { return pi * on + (1 - pi) * off; }
};

/// Access outcome at stage 3.
enum class Access : std::uint8_t { None, First, Second };

inline std::optional<std::size_t> accessed_group(Access a) {
  switch (a) {
    case Access::First: return 0;
    case Access::Second: return 1;
    case Access::None: break;
  }
  return std::nullopt;
}

struct AccessRule {
  /// Probability of granting access to group 1 when both lobby.
  double gamma1 = 0.5;
  /// Access policy when exactly one group lobbies.
  bool lone_grant = true;
  double gamma(std::size_t i) const { return i == 0 ? gamma1 : 1 - gamma1; }
};

/// Probability of each access outcome given the lobbying profile.
std::array<double, 3> access_distribution(const std::array<bool, 2>& lobbied,
                                          const AccessRule& rule);

/// What the policymaker has observed when choosing policy.
struct History {
  std::array<bool, 2> lobbied{};
  Access access = Access::None;
  /// State of the accessed issue; set iff access was granted.
  std::optional<bool> revealed;

  auto key() const {
    return std::tuple(lobbied[0], lobbied[1], static_cast<int>(access),
                      revealed.has_value() ? int(*revealed) : -1);
  }
  bool operator==(const History& o) const { return key() == o.key(); }
  bool operator<(const History& o) const { return key() < o.key(); }
};

/// All eleven policy-stage histories. Lone lobbiers appear both with and
/// without access so either lone-lobbier convention is covered.
std::vector<History> all_histories();

/// Probabilities of p_1 = 1 and p_2 = 1. Under capacity one these are the
/// weights on (1,0) and (0,1); the remainder is the status quo.
struct PolicyChoice {
  double reform1 = 0;
  double reform2 = 0;
  double reform(std::size_t i) const { return i == 0 ? reform1 : reform2; }
  double& reform(std::size_t i) { return i == 0 ? reform1 : reform2; }
};

class PolicyRule {
 public:
  void set(const History& h, PolicyChoice c) { entries_[h] = c; }
  bool contains(const History& h) const { return entries_.count(h) != 0; }
  /// Throws Error(MalformedProfile) for a missing history.
  const PolicyChoice& at(const History& h) const;
  const std::map<History, PolicyChoice>& entries() const { return entries_; }

 private:
  std::map<History, PolicyChoice> entries_;
};

/// Access-stage beliefs B_i^A(lambda) that theta_i = 1. Policy-stage
/// beliefs follow from these plus the revealed state (see policy_belief).
struct BeliefSystem {
  /// [group][lambda]
  std::array<std::array<double, 2>, 2> access{};
  std::array<std::array<bool, 2>, 2> off_path{};
};

/// B_i at the policy stage: the revealed state if issue i was accessed,
/// otherwise the access-stage belief for the observed lobbying decision.
double policy_belief(const BeliefSystem& beliefs, const History& h,
                     std::size_t issue);

struct StrategyProfile {
  std::array<LobbyRule, 2> lobby{};
  AccessRule access{};
  PolicyRule policy{};
  BeliefSystem beliefs{};
};

/// Expected utilities of group 1, group 2 and the policymaker.
struct PayoffVector {
  double group1 = 0;
  double group2 = 0;
  double policymaker = 0;

  std::array<double, 3> as_array() const {
    return {group1, group2, policymaker};
  }
  static PayoffVector from_array(const std::array<double, 3>& a) {
    return {a[0], a[1], a[2]};
  }
  bool operator==(const PayoffVector&) const = default;
};

/// alpha * 1[p1 = theta1] + 1[p2 = theta2].
double dp_utility(const PolicyVector& p, const StateVector& theta,
                  const GameParams& params);

/// Bayes posterior that theta = 1 after each lobbying decision; nullopt
/// marks an off-path decision (zero probability under the rule).
struct AccessPosterior {
  std::optional<double> quiet;  // B^A(0)
  std::optional<double> lobby;  // B^A(1)
  std::optional<double> at(bool lambda) const { return lambda ? lobby : quiet; }
};

AccessPosterior bayes_access_belief(double pi, const LobbyRule& rule);

enum class PolicyOption { StatusQuo = 0, ReformFirst = 1, ReformSecond = 2 };
enum class IssueDecision { Keep, Reform, Indifferent };

/// The set of optimal stage-4 policies with explicit tie markers.
struct PolicyBestResponse {
  Capacity capacity = Capacity::Two;
  /// Capacity two: per-issue decision.
  std::array<IssueDecision, 2> issue{};
  /// Capacity one: which of the three options are optimal.
  std::array<bool, 3> optimal{};
  /// Capacity one: (B_i - 1/2) * alpha_i.
  std::array<double, 2> gain{};
  bool tie = false;
  /// Deterministic pick: status quo on any tie involving it, otherwise the
  /// weighted issue first.
  PolicyChoice canonical{};

  /// Probability mass `c` places outside the optimal set.
  double misplaced_mass(const PolicyChoice& c) const;
};

PolicyBestResponse policy_best_response(const std::array<double, 2>& beliefs,
                                        const GameParams& params,
                                        double tol = kTolerance);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
template <class Rng>
double uniform01(Rng& rng) {
  static_assert(sizeof(typename Rng::result_type) >= 8,
                "needs a 64-bit generator");
  return static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) *
         0x1.0p-53;
}

template <class Rng>
bool bernoulli(Rng& rng, double p) {
  return uniform01(rng) < p;
}

/// Stage 1: each theta_i = 1 independently with probability pi_i.
template <class Rng>
StateVector draw_state(const GameParams& params, Rng& rng) {
  StateVector theta{};
  theta[0] = bernoulli(rng, params.pi(0));
  theta[1] = bernoulli(rng, params.pi(1));
  return theta;
}

}  // namespace lobby
