#pragma once

// Key/value text serialization of a game instance and a strategy profile.
//
//   pi1 = 0.4
//   ...
//   xi1_on = 1
//   rho.11.a2.1 = 1 0        # lobbied (1,1), access to group 2, revealed 1
//   rho.00.none = 0 0
//
// Lines starting with '#' are comments. Numbers use 12 significant digits.

#include <string>
#include <string_view>

#include <json.hpp>

#include "lobby/game.hpp"

namespace lobby {

struct ProfileDocument {
  GameParams params;
  StrategyProfile profile;
};

/// 12 significant digits, shortest form.
std::string format_number(double v);
/// `v` rounded to 12 significant digits.
double round12(double v);

std::string history_key(const History& h);
History parse_history_key(std::string_view key);

std::string write_profile(const GameParams& params,
                          const StrategyProfile& profile);
nlohmann::ordered_json profile_to_json(const GameParams& params,
                               const StrategyProfile& profile);

/// Parses either the key/value text or the JSON form. Throws
/// Error(MalformedProfile) on syntax errors or missing fields and
/// Error(OutOfRange) on invalid parameters.
ProfileDocument read_profile(std::string_view text);

}  // namespace lobby
