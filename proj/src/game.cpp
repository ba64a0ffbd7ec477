#include "lobby/game.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace lobby {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::RegimeMismatch: return "RegimeMismatch";
    case ErrorKind::DegenerateFormula: return "DegenerateFormula";
    case ErrorKind::MalformedProfile: return "MalformedProfile";
    case ErrorKind::FileUnreadable: return "FileUnreadable";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::MissingIncome: return "MissingIncome";
    case ErrorKind::Boundary: return "Boundary";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), message)),
      kind_(kind) {}

std::vector<ParamViolation> check_params(const RawParams& raw) {
  std::vector<ParamViolation> out;
  auto open_interval = [&](const char* name, double v, double lo, double hi) {
    if (!std::isfinite(v) || !(v > lo && v < hi)) {
      out.push_back({name, fmt::format("{} = {} not in ({}, {})", name, v, lo, hi)});
    }
  };
  open_interval("pi1", raw.pi1, 0.0, 0.5);
  open_interval("pi2", raw.pi2, 0.0, 0.5);
  open_interval("f1", raw.f1, 0.0, 1.0);
  open_interval("f2", raw.f2, 0.0, 1.0);
  if (!std::isfinite(raw.alpha) || !(raw.alpha > 1.0)) {
    out.push_back({"alpha", fmt::format("alpha = {} must exceed 1", raw.alpha)});
  }
  if (raw.capacity != Capacity::One && raw.capacity != Capacity::Two) {
    out.push_back({"capacity", "capacity must be 1 or 2"});
  }
  return out;
}

GameParams validate_params(const RawParams& raw) {
  auto violations = check_params(raw);
  if (!violations.empty()) {
    std::string msg;
    for (const auto& v : violations) {
      if (!msg.empty()) msg += "; ";
      msg += v.message;
    }
    throw Error(ErrorKind::OutOfRange, msg);
  }
  GameParams p;
  p.pi_ = {raw.pi1, raw.pi2};
  p.cost_ = {raw.f1, raw.f2};
  p.alpha_ = raw.alpha;
  p.capacity_ = raw.capacity;
  return p;
}

std::array<double, 3> access_distribution(const std::array<bool, 2>& lobbied,
                                          const AccessRule& rule) {
  // Indexed by Access: None, First, Second.
  if (lobbied[0] && lobbied[1]) return {0.0, rule.gamma1, 1.0 - rule.gamma1};
  if (lobbied[0]) return rule.lone_grant ? std::array{0.0, 1.0, 0.0} : std::array{1.0, 0.0, 0.0};
  if (lobbied[1]) return rule.lone_grant ? std::array{0.0, 0.0, 1.0} : std::array{1.0, 0.0, 0.0};
  return {1.0, 0.0, 0.0};
}

std::vector<History> all_histories() {
  std::vector<History> out;
  for (bool l1 : {false, true}) {
    for (bool l2 : {false, true}) {
      out.push_back({{l1, l2}, Access::None, std::nullopt});
      if (l1) {
        out.push_back({{l1, l2}, Access::First, false});
        out.push_back({{l1, l2}, Access::First, true});
      }
      if (l2) {
        out.push_back({{l1, l2}, Access::Second, false});
        out.push_back({{l1, l2}, Access::Second, true});
      }
    }
  }
  // Both lobbying without access is not a legal outcome.
  std::erase_if(out, [](const History& h) {
    return h.lobbied[0] && h.lobbied[1] && h.access == Access::None;
  });
  return out;
}

const PolicyChoice& PolicyRule::at(const History& h) const {
  auto it = entries_.find(h);
  if (it == entries_.end()) {
    throw Error(ErrorKind::MalformedProfile,
                fmt::format("policy rule has no entry for history lobbied=({},{}) "
                            "access={} revealed={}",
                            int(h.lobbied[0]), int(h.lobbied[1]),
                            static_cast<int>(h.access),
                            h.revealed ? int(*h.revealed) : -1));
  }
  return it->second;
}

double policy_belief(const BeliefSystem& beliefs, const History& h,
                     std::size_t issue) {
  if (accessed_group(h.access) == issue && h.revealed) {
    return *h.revealed ? 1.0 : 0.0;
  }
  return beliefs.access[issue][h.lobbied[issue]];
}

double dp_utility(const PolicyVector& p, const StateVector& theta,
                  const GameParams& params) {
  double u = 0;
  for (std::size_t i = 0; i < 2; ++i) {
    if (p[i] == theta[i]) u += params.weight(i);
  }
  return u;
}

AccessPosterior bayes_access_belief(double pi, const LobbyRule& rule) {
  AccessPosterior out;
  double lobby_mass = pi * rule.on + (1 - pi) * rule.off;
  if (lobby_mass > 0) out.lobby = pi * rule.on / lobby_mass;
  double quiet_mass = pi * (1 - rule.on) + (1 - pi) * (1 - rule.off);
  if (quiet_mass > 0) out.quiet = pi * (1 - rule.on) / quiet_mass;
  return out;
}

double PolicyBestResponse::misplaced_mass(const PolicyChoice& c) const {
  if (capacity == Capacity::Two) {
    double worst = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      double r = c.reform(i);
      if (issue[i] == IssueDecision::Reform) worst = std::max(worst, 1 - r);
      if (issue[i] == IssueDecision::Keep) worst = std::max(worst, r);
    }
    return worst;
  }
  std::array<double, 3> mass = {1 - c.reform1 - c.reform2, c.reform1, c.reform2};
  double misplaced = std::max(0.0, -mass[0]);  // over-committed capacity
  for (std::size_t k = 0; k < 3; ++k) {
    if (!optimal[k]) misplaced += std::max(0.0, mass[k]);
  }
  return misplaced;
}

PolicyBestResponse policy_best_response(const std::array<double, 2>& beliefs,
                                        const GameParams& params, double tol) {
  PolicyBestResponse br;
  br.capacity = params.capacity();
  if (params.capacity() == Capacity::Two) {
    for (std::size_t i = 0; i < 2; ++i) {
      double d = beliefs[i] - 0.5;
      if (std::abs(d) <= tol) {
        br.issue[i] = IssueDecision::Indifferent;
        br.tie = true;
      } else {
        br.issue[i] = d > 0 ? IssueDecision::Reform : IssueDecision::Keep;
      }
      br.canonical.reform(i) = br.issue[i] == IssueDecision::Reform ? 1.0 : 0.0;
    }
    return br;
  }

  br.gain = {(beliefs[0] - 0.5) * params.weight(0),
             (beliefs[1] - 0.5) * params.weight(1)};
  std::array<double, 3> value = {0.0, br.gain[0], br.gain[1]};
  double best = *std::max_element(value.begin(), value.end());
  int count = 0;
  for (std::size_t k = 0; k < 3; ++k) {
    br.optimal[k] = value[k] >= best - tol;
    count += br.optimal[k];
  }
  br.tie = count > 1;
  if (br.optimal[0]) {
    br.canonical = {0, 0};
  } else if (br.optimal[1]) {
    br.canonical = {1, 0};
  } else {
    br.canonical = {0, 1};
  }
  return br;
}

}  // namespace lobby
