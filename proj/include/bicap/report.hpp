#pragma once

// JSON reports and plot-ready CSV tables.

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

#include "bicap/biharm.hpp"
#include "bicap/capacity.hpp"
#include "bicap/models.hpp"
#include "bicap/wiener.hpp"

namespace bicap {

inline constexpr const char* kReportSchema = "bicap-report/1";

struct Report {
  std::string task;
  nlohmann::json inputs = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json provenance = nlohmann::json::object();
  std::map<std::string, double> timings;  // seconds

  /// Keys are sorted, so equal reports dump to equal bytes. Timings go to
  /// provenance.timings unless `with_timings` is false.
  nlohmann::json to_json(bool with_timings = true) const;
};

/// Throws std::runtime_error if the file cannot be written.
void write_json(const nlohmann::json& j, const std::string& path);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_number(double v);

/// Header plus one line per row. Throws std::runtime_error if the file
/// cannot be written or a row has the wrong width.
void write_csv(const CsvTable& t, const std::string& path);
CsvTable read_csv(const std::string& path);

nlohmann::json to_json(const CgStats& s);
nlohmann::json to_json(const Eigen::Matrix4d& m);
nlohmann::json to_json(const PiProfile& p);
nlohmann::json to_json(const GramMatrix& g);
nlohmann::json to_json(const LayerSeries& s);
nlohmann::json to_json(const RegularityVerdict& v);
nlohmann::json to_json(const DecayReport& r);

/// Columns j, gamma, weight, partial.
CsvTable series_table(const LayerSeries& s);

}  // namespace bicap
