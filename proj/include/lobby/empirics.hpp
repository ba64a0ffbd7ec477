#pragma once

// Country-level quadrant classification (governance index x resource
// abundance) and the per-quadrant tally of income anomalies.

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lobby::empirics {

/// EPIN/CPIA-style scores run 1-6; the NRGI robustness variant runs 0-100.
enum class IndexScale { Epin, Nrgi };

struct ScaleBounds {
  double low;
  double high;
};
ScaleBounds bounds(IndexScale scale);

enum class IncomeClass { Low, NonLow };
std::string_view to_string(IncomeClass c);
std::optional<IncomeClass> parse_income_class(std::string_view text);

struct CountryRecord {
  std::string name;
  double index_value = 0;
  /// Percent of merchandise exports.
  double abundance_share = 0;
  std::optional<double> gni_per_capita;
  std::optional<IncomeClass> income_class;
};

struct Thresholds {
  double index_high_cutoff = 3.5;
  double abundance_cutoff = 40.0;
  /// GNI per capita at or below this is low income.
  double income_low_cutoff = 1025.0;

  /// Index cutoff at the scale midpoint.
  static Thresholds for_scale(IndexScale scale);
};

/// Header names of the mapped columns. GNI and income class are optional:
/// when absent from the header the field is left empty.
struct ColumnMapping {
  std::string name = "country";
  std::string index = "index";
  std::string abundance = "abundance";
  std::string gni = "gni_per_capita";
  std::string income = "income_class";
  /// 0 picks tab when the header has tabs and no commas, comma otherwise.
  char delimiter = 0;
  IndexScale scale = IndexScale::Epin;
};

enum class DiagnosticKind { RangeViolation, ParseError, Boundary };
std::string_view to_string(DiagnosticKind k);

struct Diagnostic {
  std::size_t line = 0;  // 1-based, header is line 1
  DiagnosticKind kind = DiagnosticKind::ParseError;
  std::string message;
};

struct LoadResult {
  std::vector<CountryRecord> records;
  std::vector<Diagnostic> diagnostics;
};

/// Rows failing a range or parse check are skipped and reported. Throws
/// Error(FileUnreadable) or Error(SchemaMismatch).
LoadResult load_countries(const std::filesystem::path& path,
                          const ColumnMapping& mapping,
                          const Thresholds& thresholds);
LoadResult parse_countries(std::istream& in, const ColumnMapping& mapping,
                           const Thresholds& thresholds);

/// Splits one delimited line; double quotes protect delimiters and "" is a
/// literal quote.
std::vector<std::string> split_delimited(std::string_view line, char delimiter);

/// NE = I, NW = II, SW = III, SE = IV.
enum class Quadrant { I = 0, II = 1, III = 2, IV = 3 };
std::string_view to_string(Quadrant q);

struct QuadrantAssignment {
  Quadrant quadrant = Quadrant::I;
  bool high_index = false;
  bool abundant = false;
  /// Either coordinate sits exactly on its cutoff (classified high/abundant).
  bool boundary = false;
};

QuadrantAssignment classify_quadrant(const CountryRecord& record,
                                     const Thresholds& t);

/// Explicit class first, then GNI against the cutoff.
std::optional<IncomeClass> resolve_income(const CountryRecord& record,
                                          const Thresholds& t);

/// High-index countries are expected outside the low-income group and
/// low-index countries inside it; anything else is an anomaly.
bool is_anomaly(const CountryRecord& record, const Thresholds& t);

struct AnomalyTable {
  std::array<std::size_t, 4> members{};
  std::array<std::size_t, 4> anomalies{};
  std::array<std::vector<std::string>, 4> member_names{};
  std::array<std::vector<std::string>, 4> anomaly_names{};

  std::size_t total() const {
    return anomalies[0] + anomalies[1] + anomalies[2] + anomalies[3];
  }
};

/// Throws Error(MissingIncome) for a record without class or GNI.
AnomalyTable anomaly_table(std::span<const CountryRecord> records,
                           const Thresholds& t);

std::string format_table_text(const AnomalyTable& table);
/// quadrant,members,anomalies
std::string format_table_csv(const AnomalyTable& table);
/// name,index,abundance,income_class,quadrant,is_anomaly,boundary_flag
std::string format_countries_csv(std::span<const CountryRecord> records,
                                 const Thresholds& t);

}  // namespace lobby::empirics
