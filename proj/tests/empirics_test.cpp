#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "lobby/empirics.hpp"
#include "lobby/game.hpp"

using namespace lobby;
using namespace lobby::empirics;

namespace {

std::string data(const char* name) { return std::string(LOBBY_TEST_DATA) + "/" + name; }

ColumnMapping urn_mapping() {
  ColumnMapping m;
  m.name = "name";
  m.index = "nrgi";
  m.abundance = "fuel_share";
  m.gni = "gni";
  m.scale = IndexScale::Nrgi;
  return m;
}

std::vector<CountryRecord> synthetic(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> idx(1, 6), ab(0, 100), gni(100, 5000);
  std::vector<CountryRecord> out;
  for (std::size_t k = 0; k < n; ++k) {
    CountryRecord r;
    r.name = "c" + std::to_string(k);
    r.index_value = idx(rng);
    r.abundance_share = ab(rng);
    r.gni_per_capita = gni(rng);
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("published anomaly rows from the two fixtures") {
  auto t = Thresholds::for_scale(IndexScale::Epin);
  auto blg = load_countries(data("blg_fixture.csv"), {}, t);
  CHECK(blg.diagnostics.empty());
  auto table = anomaly_table(blg.records, t);
  CHECK(table.anomalies == std::array<std::size_t, 4>{1, 2, 0, 0});
  CHECK(table.total() == 3);

  auto m = urn_mapping();
  auto tu = Thresholds::for_scale(IndexScale::Nrgi);
  CHECK(tu.index_high_cutoff == 50);
  auto urn = load_countries(data("urn_fixture.tsv"), m, tu);
  CHECK(urn.diagnostics.empty());
  auto table2 = anomaly_table(urn.records, tu);
  CHECK(table2.anomalies == std::array<std::size_t, 4>{1, 3, 5, 1});
  CHECK(table2.total() == 10);
  CHECK(format_table_csv(table2) == "quadrant,members,anomalies\nI,3,1\nII,6,3\nIII,9,5\nIV,4,1\n");
}

TEST_CASE("loader examples") {
  auto t = Thresholds{};
  auto three = load_countries(data("three_rows.csv"), {}, t);
  CHECK(three.records.size() == 3);
  CHECK(three.diagnostics.empty());
  CHECK(three.records[2].name == "Gamma, Republic of");

  auto bad = load_countries(data("bad_abundance.csv"), {}, t);
  CHECK(bad.records.size() == 2);
  REQUIRE(bad.diagnostics.size() == 1);
  CHECK(bad.diagnostics[0].kind == DiagnosticKind::RangeViolation);
  CHECK(bad.diagnostics[0].line == 3);
  CHECK(bad.diagnostics[0].message.find("Beta") != std::string::npos);

  auto gni = load_countries(data("gni_only.csv"), {}, t);
  REQUIRE(gni.records.size() == 4);
  std::vector<IncomeClass> expect = {IncomeClass::NonLow, IncomeClass::Low, IncomeClass::Low,
                                     IncomeClass::NonLow};
  for (std::size_t k = 0; k < 4; ++k) {
    REQUIRE(gni.records[k].income_class.has_value());
    CHECK(*gni.records[k].income_class == expect[k]);
  }

  try {
    load_countries(data("missing_column.csv"), {}, t);
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SchemaMismatch);
  }
  try {
    load_countries(data("does_not_exist.csv"), {}, t);
    FAIL("expected FileUnreadable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FileUnreadable);
  }
  auto no_income = load_countries(data("no_income.csv"), {}, t);
  try {
    anomaly_table(no_income.records, t);
    FAIL("expected MissingIncome");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MissingIncome);
  }
}

TEST_CASE("explicit income class overrides GNI") {
  std::istringstream in("country,index,abundance,gni_per_capita,income_class\nX,4,50,300,NonLow\n");
  auto r = parse_countries(in, {}, Thresholds{});
  REQUIRE(r.records.size() == 1);
  CHECK(*r.records[0].income_class == IncomeClass::NonLow);
}

TEST_CASE("quadrant examples and the tie convention") {
  Thresholds t;
  CHECK(classify_quadrant({"a", 4.0, 55}, t).quadrant == Quadrant::I);
  CHECK(classify_quadrant({"b", 2.0, 10}, t).quadrant == Quadrant::III);
  CHECK(classify_quadrant({"c", 4.0, 10}, t).quadrant == Quadrant::II);
  CHECK(classify_quadrant({"d", 2.0, 55}, t).quadrant == Quadrant::IV);
  auto tie = classify_quadrant({"e", 3.5, 10}, t);
  CHECK(tie.high_index);
  CHECK(tie.boundary);
  CHECK(tie.quadrant == Quadrant::II);
  CHECK(classify_quadrant({"f", 2.0, 40}, t).quadrant == Quadrant::IV);

  std::istringstream in("country,index,abundance,income_class\nEdge,3.5,20,Low\n");
  auto r = parse_countries(in, {}, t);
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].kind == DiagnosticKind::Boundary);
  CHECK(r.records.size() == 1);
}

TEST_CASE("tab-delimited input is detected") {
  std::istringstream in("country\tindex\tabundance\tincome_class\nA\t5\t70\tNonLow\n");
  auto r = parse_countries(in, {}, Thresholds{});
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].abundance_share == 70);
}

TEST_CASE("empty record list gives an all-zero table") {
  auto table = anomaly_table({}, Thresholds{});
  CHECK(table.total() == 0);
  CHECK(table.members == std::array<std::size_t, 4>{0, 0, 0, 0});
}

TEST_CASE("partition, monotonicity and invariance on synthetic records") {
  std::mt19937_64 rng(2024);
  auto records = synthetic(rng, 10000);
  std::uniform_real_distribution<double> cut_idx(1.5, 5.5), cut_ab(5, 95);
  Thresholds base;
  auto table = anomaly_table(records, base);
  CHECK(table.members[0] + table.members[1] + table.members[2] + table.members[3] ==
        records.size());

  for (int k = 0; k < 20; ++k) {
    Thresholds t;
    t.index_high_cutoff = cut_idx(rng);
    t.abundance_cutoff = cut_ab(rng);
    Thresholds raised = t;
    raised.abundance_cutoff += 10;
    for (const auto& r : records) {
      auto before = classify_quadrant(r, t).quadrant;
      auto after = classify_quadrant(r, raised).quadrant;
      if (before == Quadrant::II || before == Quadrant::III) {
        CHECK((after == Quadrant::II || after == Quadrant::III));
      }
    }
  }

  // Reordering.
  auto shuffled = records;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  auto t2 = anomaly_table(shuffled, base);
  CHECK(t2.anomalies == table.anomalies);
  CHECK(t2.members == table.members);

  // Strictly monotone rescale of the index onto 0-100 with the cutoff mapped
  // to its image.
  auto rescale = [](double v) { return 100 * std::pow((v - 1) / 5, 1.7); };
  auto rescaled = records;
  for (auto& r : rescaled) r.index_value = rescale(r.index_value);
  Thresholds mapped = base;
  mapped.index_high_cutoff = rescale(base.index_high_cutoff);
  auto t3 = anomaly_table(rescaled, mapped);
  CHECK(t3.anomalies == table.anomalies);
}

TEST_CASE("country CSV") {
  Thresholds t;
  std::vector<CountryRecord> rs = {{"Comma, Land", 4.5, 60, 500.0, std::nullopt}};
  auto csv = format_countries_csv(rs, t);
  CHECK(csv ==
        "name,index,abundance,income_class,quadrant,is_anomaly,boundary_flag\n"
        "\"Comma, Land\",4.5,60,Low,I,1,0\n");
}
