#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "bicap/report.hpp"

using namespace bicap;

namespace {

std::string temp(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

int line_count(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

}  // namespace

TEST_CASE("numbers round trip through CSV at full precision") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  CsvTable t{{"x", "y"}, {}};
  for (int i = 0; i < 200; ++i) t.rows.push_back({u(rng), std::ldexp(u(rng), -60)});
  t.rows.push_back({0.1, 1.0 / 3.0});
  t.rows.push_back({NAN, -INFINITY});
  const auto path = temp("bicap_report_roundtrip.csv");
  write_csv(t, path);
  const CsvTable back = read_csv(path);
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);
  CHECK(std::isnan(back.rows.back()[0]));
  CHECK(back.rows.back()[1] == -INFINITY);
  std::filesystem::remove(path);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
}

TEST_CASE("series tables") {
  LayerSeries s;
  const auto path = temp("bicap_report_series.csv");
  write_csv(series_table(s), path);
  CHECK(line_count(path) == 1);
  for (int j = 1; j <= 12; ++j) {
    LayerTerm t;
    t.j = j;
    t.weight = std::pow(2.0, -j);
    s.terms.push_back(t);
  }
  write_csv(series_table(s), path);
  CHECK(line_count(path) == 13);
  const CsvTable back = read_csv(path);
  CHECK(back.header == std::vector<std::string>{"j", "gamma", "weight", "partial"});
  CHECK(back.rows[11][0] == 12.0);
  std::filesystem::remove(path);
  CsvTable bad{{"a"}, {{1.0, 2.0}}};
  CHECK_THROWS_AS(write_csv(bad, path), std::runtime_error);
}

TEST_CASE("reports serialize deterministically") {
  Report r;
  r.task = "capacity";
  r.inputs["b"] = 1;
  r.inputs["a"] = 2;
  r.results["value"] = 0.1;
  r.timings["solve"] = 1.5;
  const auto with = r.to_json();
  const auto without = r.to_json(false);
  CHECK(with["provenance"]["timings"]["solve"] == 1.5);
  CHECK_FALSE(without["provenance"].contains("timings"));
  CHECK(without["schema"] == kReportSchema);
  CHECK(without.dump() == r.to_json(false).dump());
  CHECK(without.dump().find("\"a\":2,\"b\":1") != std::string::npos);
}

TEST_CASE("verdicts with missing values serialize as null") {
  RegularityVerdict v;
  v.tail_exponent = NAN;
  v.model_residuals = {0.1, NAN, 0.3};
  const auto j = to_json(v);
  CHECK(j["tail_exponent"].is_null());
  CHECK(j["model_residuals"][1].is_null());
  CHECK(j["kind"] == "numeric_trend");
}
