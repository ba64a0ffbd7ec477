#include "lobby/profile_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace lobby {
namespace {

[[noreturn]] void malformed(const std::string& msg) {
  throw Error(ErrorKind::MalformedProfile, msg);
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    malformed(fmt::format("field '{}': '{}' is not a number", key, text));
  }
  return v;
}

std::string access_token(Access a) {
  switch (a) {
    case Access::None: return "none";
    case Access::First: return "a1";
    case Access::Second: return "a2";
  }
  return "none";
}

using FieldMap = std::map<std::string, std::string>;

FieldMap parse_key_values(std::string_view text) {
  FieldMap fields;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    auto eq = content.find('=');
    if (eq == std::string::npos) {
      malformed(fmt::format("line {}: expected 'key = value'", lineno));
    }
    auto key = trim(std::string_view(content).substr(0, eq));
    auto value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty()) malformed(fmt::format("line {}: empty key", lineno));
    if (!fields.emplace(key, value).second) {
      malformed(fmt::format("line {}: duplicate key '{}'", lineno, key));
    }
  }
  return fields;
}

FieldMap flatten_json(const nlohmann::json& doc) {
  if (!doc.is_object()) malformed("JSON profile must be an object");
  FieldMap fields;
  for (const auto& [key, value] : doc.items()) {
    if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ' ';
        joined += format_number(v.get<double>());
      }
      fields[key] = joined;
    } else if (value.is_number()) {
      fields[key] = format_number(value.get<double>());
    } else if (value.is_boolean()) {
      fields[key] = value.get<bool>() ? "1" : "0";
    } else if (value.is_string()) {
      fields[key] = value.get<std::string>();
    } else {
      malformed(fmt::format("JSON field '{}' has unsupported type", key));
    }
  }
  return fields;
}

class FieldReader {
 public:
  explicit FieldReader(FieldMap fields) : fields_(std::move(fields)) {}

  double number(const std::string& key) {
    auto it = fields_.find(key);
    if (it == fields_.end()) malformed(fmt::format("missing field '{}'", key));
    return parse_double(key, it->second);
  }
  double number_or(const std::string& key, double fallback) {
    return fields_.count(key) ? number(key) : fallback;
  }
  const FieldMap& all() const { return fields_; }

 private:
  FieldMap fields_;
};

}  // namespace

std::string format_number(double v) {
  if (v == 0) return "0";
  return fmt::format("{:.12g}", v);
}

double round12(double v) {
  auto s = format_number(v);
  double out = 0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string history_key(const History& h) {
  std::string key = fmt::format("{}{}.{}", int(h.lobbied[0]), int(h.lobbied[1]),
                                access_token(h.access));
  if (h.revealed) key += fmt::format(".{}", int(*h.revealed));
  return key;
}

History parse_history_key(std::string_view key) {
  History h;
  auto bad = [&] { malformed(fmt::format("bad history key '{}'", key)); };
  if (key.size() < 4 || key[2] != '.') bad();
  for (std::size_t i = 0; i < 2; ++i) {
    if (key[i] != '0' && key[i] != '1') bad();
    h.lobbied[i] = key[i] == '1';
  }
  auto rest = key.substr(3);
  auto dot = rest.find('.');
  auto token = rest.substr(0, dot);
  if (token == "none") {
    h.access = Access::None;
  } else if (token == "a1") {
    h.access = Access::First;
  } else if (token == "a2") {
    h.access = Access::Second;
  } else {
    bad();
  }
  if (dot != std::string_view::npos) {
    auto state = rest.substr(dot + 1);
    if (state != "0" && state != "1") bad();
    h.revealed = state == "1";
  }
  // Access needs a revealed state, no access must not carry one, only a
  // group that lobbied can be accessed, and two lobbies always yield access.
  if ((h.access == Access::None) == h.revealed.has_value()) bad();
  if (auto g = accessed_group(h.access); g && !h.lobbied[*g]) bad();
  if (h.lobbied[0] && h.lobbied[1] && h.access == Access::None) bad();
  return h;
}

namespace {

std::vector<std::pair<std::string, std::string>> ordered_fields(
    const GameParams& params, const StrategyProfile& profile) {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [&](std::string key, double v) { out.emplace_back(std::move(key), format_number(v)); };
  num("pi1", params.pi(0));
  num("pi2", params.pi(1));
  num("f1", params.cost(0));
  num("f2", params.cost(1));
  num("alpha", params.alpha());
  num("capacity", static_cast<int>(params.capacity()));
  for (std::size_t i = 0; i < 2; ++i) {
    num(fmt::format("xi{}_on", i + 1), profile.lobby[i].on);
    num(fmt::format("xi{}_off", i + 1), profile.lobby[i].off);
  }
  num("gamma1", profile.access.gamma1);
  num("lone_grant", profile.access.lone_grant ? 1 : 0);
  for (std::size_t i = 0; i < 2; ++i) {
    num(fmt::format("belief{}_quiet", i + 1), profile.beliefs.access[i][0]);
    num(fmt::format("belief{}_lobby", i + 1), profile.beliefs.access[i][1]);
    num(fmt::format("offpath{}_quiet", i + 1), profile.beliefs.off_path[i][0]);
    num(fmt::format("offpath{}_lobby", i + 1), profile.beliefs.off_path[i][1]);
  }
  for (const auto& [h, c] : profile.policy.entries()) {
    out.emplace_back("rho." + history_key(h),
                     format_number(c.reform1) + " " + format_number(c.reform2));
  }
  return out;
}

}  // namespace

std::string write_profile(const GameParams& params,
                          const StrategyProfile& profile) {
  std::string out;
  for (const auto& [key, value] : ordered_fields(params, profile)) {
    out += fmt::format("{} = {}\n", key, value);
  }
  return out;
}

nlohmann::ordered_json profile_to_json(const GameParams& params,
                               const StrategyProfile& profile) {
  nlohmann::ordered_json ordered;
  for (const auto& [key, value] : ordered_fields(params, profile)) {
    if (key.rfind("rho.", 0) == 0) {
      auto space = value.find(' ');
      ordered[key] = {std::stod(value.substr(0, space)),
                      std::stod(value.substr(space + 1))};
    } else if (value.find_first_of(".e") == std::string::npos) {
      ordered[key] = std::stoll(value);
    } else {
      ordered[key] = std::stod(value);
    }
  }
  return ordered;
}

ProfileDocument read_profile(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  FieldMap fields;
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      malformed(std::string("invalid JSON: ") + e.what());
    }
    fields = flatten_json(doc);
  } else {
    fields = parse_key_values(text);
  }
  FieldReader r(std::move(fields));

  RawParams raw;
  raw.pi1 = r.number("pi1");
  raw.pi2 = r.number("pi2");
  raw.f1 = r.number("f1");
  raw.f2 = r.number("f2");
  raw.alpha = r.number("alpha");
  double cap = r.number("capacity");
  if (cap != 1 && cap != 2) malformed("capacity must be 1 or 2");
  raw.capacity = cap == 1 ? Capacity::One : Capacity::Two;

  StrategyProfile profile;
  auto probability = [&](const std::string& key, double v) {
    if (!(v >= 0 && v <= 1)) malformed(fmt::format("field '{}' = {} not in [0,1]", key, v));
    return v;
  };
  for (std::size_t i = 0; i < 2; ++i) {
    auto on = fmt::format("xi{}_on", i + 1);
    auto off = fmt::format("xi{}_off", i + 1);
    profile.lobby[i].on = probability(on, r.number(on));
    profile.lobby[i].off = probability(off, r.number(off));
  }
  profile.access.gamma1 = probability("gamma1", r.number("gamma1"));
  profile.access.lone_grant = r.number_or("lone_grant", 1) != 0;
  for (std::size_t i = 0; i < 2; ++i) {
    const char* names[2] = {"quiet", "lobby"};
    for (std::size_t l = 0; l < 2; ++l) {
      auto key = fmt::format("belief{}_{}", i + 1, names[l]);
      profile.beliefs.access[i][l] = probability(key, r.number(key));
      profile.beliefs.off_path[i][l] =
          r.number_or(fmt::format("offpath{}_{}", i + 1, names[l]), 0) != 0;
    }
  }
  for (const auto& [key, value] : r.all()) {
    if (key.rfind("rho.", 0) != 0) continue;
    History h = parse_history_key(std::string_view(key).substr(4));
    std::istringstream vs(value);
    std::string a, b, extra;
    if (!(vs >> a >> b) || (vs >> extra)) {
      malformed(fmt::format("field '{}' needs two probabilities", key));
    }
    PolicyChoice c{probability(key, parse_double(key, a)),
                   probability(key, parse_double(key, b))};
    profile.policy.set(h, c);
  }
  return {validate_params(raw), std::move(profile)};
}

}  // namespace lobby
