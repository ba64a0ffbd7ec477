#include "lobby/empirics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "lobby/game.hpp"
#include "lobby/profile_io.hpp"

namespace lobby::empirics {
namespace {

constexpr double kCutoffTol = 1e-9;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::optional<double> parse_number(const std::string& text) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

bool on_cutoff(double v, double cutoff) { return std::abs(v - cutoff) <= kCutoffTol; }

}  // namespace

ScaleBounds bounds(IndexScale scale) {
  return scale == IndexScale::Epin ? ScaleBounds{1.0, 6.0} : ScaleBounds{0.0, 100.0};
}

Thresholds Thresholds::for_scale(IndexScale scale) {
  auto b = bounds(scale);
  Thresholds t;
  t.index_high_cutoff = 0.5 * (b.low + b.high);
  return t;
}

std::string_view to_string(IncomeClass c) {
  return c == IncomeClass::Low ? "Low" : "NonLow";
}

std::optional<IncomeClass> parse_income_class(std::string_view text) {
  auto s = lower(trim(text));
  std::erase_if(s, [](char c) { return c == '-' || c == '_' || c == ' '; });
  if (s == "low" || s == "l" || s == "lowincome") return IncomeClass::Low;
  if (s == "nonlow" || s == "nl" || s == "notlow" || s == "high" ||
      s == "middle" || s == "nonlowincome") {
    return IncomeClass::NonLow;
  }
  return std::nullopt;
}

std::string_view to_string(DiagnosticKind k) {
  switch (k) {
    case DiagnosticKind::RangeViolation: return "RangeViolation";
    case DiagnosticKind::ParseError: return "ParseError";
    case DiagnosticKind::Boundary: return "Boundary";
  }
  return "?";
}

std::string_view to_string(Quadrant q) {
  static constexpr std::array<std::string_view, 4> names = {"I", "II", "III", "IV"};
  return names[static_cast<int>(q)];
}

std::vector<std::string> split_delimited(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      out.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(trim(field));
  return out;
}

LoadResult parse_countries(std::istream& in, const ColumnMapping& mapping,
                           const Thresholds& thresholds) {
  std::string header;
  if (!std::getline(in, header)) {
    throw Error(ErrorKind::SchemaMismatch, "input has no header row");
  }
  if (header.rfind("\xEF\xBB\xBF", 0) == 0) header.erase(0, 3);  // UTF-8 BOM

  char delim = mapping.delimiter;
  if (delim == 0) {
    bool tabs = header.find('\t') != std::string::npos;
    bool commas = header.find(',') != std::string::npos;
    delim = tabs && !commas ? '\t' : ',';
  }

  auto columns = split_delimited(header, delim);
  auto find = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      if (lower(columns[k]) == lower(name)) return k;
    }
    return std::nullopt;
  };
  auto required = [&](const std::string& name) {
    auto k = find(name);
    if (!k) {
      throw Error(ErrorKind::SchemaMismatch,
                  fmt::format("mapped column '{}' not in header", name));
    }
    return *k;
  };
  const std::size_t name_col = required(mapping.name);
  const std::size_t index_col = required(mapping.index);
  const std::size_t abundance_col = required(mapping.abundance);
  const auto gni_col = find(mapping.gni);
  const auto income_col = find(mapping.income);
  const auto scale = bounds(mapping.scale);

  LoadResult result;
  std::string line;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split_delimited(line, delim);
    auto report = [&](DiagnosticKind kind, std::string msg) {
      result.diagnostics.push_back({lineno, kind, std::move(msg)});
    };
    auto cell = [&](std::size_t k) { return k < fields.size() ? fields[k] : std::string(); };

    CountryRecord rec;
    rec.name = cell(name_col);
    std::string label = rec.name.empty() ? fmt::format("line {}", lineno)
                                         : fmt::format("line {} ({})", lineno, rec.name);

    auto index = parse_number(cell(index_col));
    auto abundance = parse_number(cell(abundance_col));
    if (!index || !abundance) {
      report(DiagnosticKind::ParseError, label + ": index and abundance must be numbers");
      continue;
    }
    rec.index_value = *index;
    rec.abundance_share = *abundance;
    if (rec.index_value < scale.low || rec.index_value > scale.high) {
      report(DiagnosticKind::RangeViolation,
             fmt::format("{}: index {} outside [{}, {}]", label, rec.index_value,
                         scale.low, scale.high));
      continue;
    }
    if (rec.abundance_share < 0 || rec.abundance_share > 100) {
      report(DiagnosticKind::RangeViolation,
             fmt::format("{}: abundance {} outside [0, 100]", label, rec.abundance_share));
      continue;
    }
    if (gni_col && !cell(*gni_col).empty()) {
      auto gni = parse_number(cell(*gni_col));
      if (!gni) {
        report(DiagnosticKind::ParseError, label + ": GNI per capita is not a number");
        continue;
      }
      if (*gni < 0) {
        report(DiagnosticKind::RangeViolation, fmt::format("{}: negative GNI {}", label, *gni));
        continue;
      }
      rec.gni_per_capita = gni;
    }
    if (income_col && !cell(*income_col).empty()) {
      rec.income_class = parse_income_class(cell(*income_col));
      if (!rec.income_class) {
        report(DiagnosticKind::ParseError,
               fmt::format("{}: unknown income class '{}'", label, cell(*income_col)));
        continue;
      }
    }
    if (!rec.income_class) rec.income_class = resolve_income(rec, thresholds);

    auto q = classify_quadrant(rec, thresholds);
    if (q.boundary) {
      report(DiagnosticKind::Boundary,
             fmt::format("{}: on a cutoff, classified {}", label, to_string(q.quadrant)));
    }
    result.records.push_back(std::move(rec));
  }
  return result;
}

LoadResult load_countries(const std::filesystem::path& path,
                          const ColumnMapping& mapping,
                          const Thresholds& thresholds) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::FileUnreadable, fmt::format("cannot read '{}'", path.string()));
  }
  return parse_countries(in, mapping, thresholds);
}

QuadrantAssignment classify_quadrant(const CountryRecord& record,
                                     const Thresholds& t) {
  QuadrantAssignment a;
  bool index_edge = on_cutoff(record.index_value, t.index_high_cutoff);
  bool abundance_edge = on_cutoff(record.abundance_share, t.abundance_cutoff);
  a.high_index = index_edge || record.index_value > t.index_high_cutoff;
  a.abundant = abundance_edge || record.abundance_share > t.abundance_cutoff;
  a.boundary = index_edge || abundance_edge;
  if (a.high_index) {
    a.quadrant = a.abundant ? Quadrant::I : Quadrant::II;
  } else {
    a.quadrant = a.abundant ? Quadrant::IV : Quadrant::III;
  }
  return a;
}

std::optional<IncomeClass> resolve_income(const CountryRecord& record,
                                          const Thresholds& t) {
  if (record.income_class) return record.income_class;
  if (record.gni_per_capita) {
    return *record.gni_per_capita <= t.income_low_cutoff ? IncomeClass::Low
                                                         : IncomeClass::NonLow;
  }
  return std::nullopt;
}

bool is_anomaly(const CountryRecord& record, const Thresholds& t) {
  auto income = resolve_income(record, t);
  if (!income) {
    throw Error(ErrorKind::MissingIncome,
                fmt::format("'{}' has neither an income class nor GNI", record.name));
  }
  bool high = classify_quadrant(record, t).high_index;
  return high == (*income == IncomeClass::Low);
}

AnomalyTable anomaly_table(std::span<const CountryRecord> records,
                           const Thresholds& t) {
  AnomalyTable table;
  for (const auto& rec : records) {
    auto q = static_cast<std::size_t>(classify_quadrant(rec, t).quadrant);
    table.members[q] += 1;
    table.member_names[q].push_back(rec.name);
    if (is_anomaly(rec, t)) {
      table.anomalies[q] += 1;
      table.anomaly_names[q].push_back(rec.name);
    }
  }
  return table;
}

std::string format_table_text(const AnomalyTable& table) {
  std::string out = fmt::format("{:<10}{:>10}{:>12}\n", "quadrant", "members", "anomalies");
  for (int q = 0; q < 4; ++q) {
    out += fmt::format("{:<10}{:>10}{:>12}\n", to_string(static_cast<Quadrant>(q)),
                       table.members[q], table.anomalies[q]);
  }
  std::size_t members = table.members[0] + table.members[1] + table.members[2] + table.members[3];
  out += fmt::format("{:<10}{:>10}{:>12}\n", "total", members, table.total());
  return out;
}

std::string format_table_csv(const AnomalyTable& table) {
  std::string out = "quadrant,members,anomalies\n";
  for (int q = 0; q < 4; ++q) {
    out += fmt::format("{},{},{}\n", to_string(static_cast<Quadrant>(q)), table.members[q],
                       table.anomalies[q]);
  }
  return out;
}

std::string format_countries_csv(std::span<const CountryRecord> records,
                                 const Thresholds& t) {
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  std::string out = "name,index,abundance,income_class,quadrant,is_anomaly,boundary_flag\n";
  for (const auto& rec : records) {
    auto q = classify_quadrant(rec, t);
    auto income = resolve_income(rec, t);
    out += fmt::format("{},{},{},{},{},{},{}\n", quote(rec.name),
                       format_number(rec.index_value), format_number(rec.abundance_share),
                       income ? to_string(*income) : "NA", to_string(q.quadrant),
                       income ? (is_anomaly(rec, t) ? "1" : "0") : "NA",
                       q.boundary ? 1 : 0);
  }
  return out;
}

}  // namespace lobby::empirics
