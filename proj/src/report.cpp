#include "bicap/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bicap {

using nlohmann::json;

json Report::to_json(bool with_timings) const {
  json j;
  j["schema"] = kReportSchema;
  j["task"] = task;
  j["inputs"] = inputs;
  j["results"] = results;
  json prov = provenance;
  if (with_timings) {
    json t = json::object();
    for (const auto& [k, v] : timings) t[k] = v;
    prov["timings"] = t;
  }
  j["provenance"] = prov;
  return j;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf, end);
}

void write_csv(const CsvTable& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << t.header[i];
  out << '\n';
  for (const auto& row : t.rows) {
    if (row.size() != t.header.size()) throw std::runtime_error("write_csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  CsvTable t;
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
  };
  if (!std::getline(in, line)) return t;
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& cell : split(line)) {
      double v = 0.0;
      if (cell == "nan") v = std::nan("");
      else if (cell == "inf") v = INFINITY;
      else if (cell == "-inf") v = -INFINITY;
      else {
        const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || end != cell.data() + cell.size()) {
          throw std::runtime_error("read_csv: bad number '" + cell + "'");
        }
      }
      row.push_back(v);
    }
    if (row.size() != t.header.size()) throw std::runtime_error("read_csv: ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json to_json(const CgStats& s) {
  return {{"iterations", s.iterations}, {"residual", s.residual}, {"converged", s.converged}};
}

json to_json(const Eigen::Matrix4d& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json r = json::array();
    for (int k = 0; k < 4; ++k) r.push_back(m(i, k));
    rows.push_back(r);
  }
  return rows;
}

json to_json(const PiProfile& p) { return json(std::vector<double>(p.b.begin(), p.b.end())); }

json to_json(const GramMatrix& g) {
  json stats = json::array();
  for (const auto& s : g.stats) stats.push_back(to_json(s));
  return {{"g", to_json(g.g)}, {"stats", stats}};
}

namespace {

// JSON has no NaN; absent values are null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json to_json(const LayerSeries& s) {
  json terms = json::array();
  for (const auto& t : s.terms) {
    terms.push_back({{"j", t.j},
                     {"gamma", t.gamma},
                     {"weight", t.weight},
                     {"term", t.term},
                     {"partial", t.partial},
                     {"empty", t.empty},
                     {"b_min", to_json(t.b_min)},
                     {"gram", to_json(t.gram)},
                     {"iterations", t.iterations}});
  }
  return {{"a", s.a},
          {"span", s.span == LayerSpan::Single ? "single" : "double"},
          {"j_min", s.j_min},
          {"j_max", s.j_max},
          {"resolution", s.resolution},
          {"terms", terms}};
}

json to_json(const RegularityVerdict& v) {
  json res = json::array();
  for (double r : v.model_residuals) res.push_back(finite_or_null(r));
  return {{"kind", to_string(v.kind)},
          {"model", v.model ? json(to_string(*v.model)) : json(nullptr)},
          {"partial_sums", v.partial_sums},
          {"model_residuals", res},
          {"tail_exponent", finite_or_null(v.tail_exponent)},
          {"source", v.source}};
}

json to_json(const DecayReport& r) {
  return {{"pattern", to_string(r.pattern)},
          {"l", r.l},
          {"capacity_sum", r.capacity_sum},
          {"log_sup", r.log_sup},
          {"slope", r.slope},
          {"intercept", r.intercept},
          {"r2", r.r2},
          {"slope_per_layer", r.slope_per_layer},
          {"no_decay_baseline", r.no_decay_baseline}};
}

CsvTable series_table(const LayerSeries& s) {
  CsvTable t{{"j", "gamma", "weight", "partial"}, {}};
  for (const auto& term : s.terms) t.rows.push_back({double(term.j), term.gamma, term.weight, term.partial});
  return t;
}

}  // namespace bicap
