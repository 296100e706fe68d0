// Acceptance gate: runs the full verification pipeline twice through the
// command-line tool and prints one PASS/FAIL line per criterion.
//
//   acceptance <bicap executable> <work directory>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Criterion {
  int id;
  std::string suite;
  double max_seconds;  // 0: no runtime bound
};

const std::vector<Criterion> kCriteria{
    {1, "kernel", 1.0},   {2, "identity", 120.0}, {3, "capacity", 600.0},
    {4, "spectral", 60.0}, {5, "green", 900.0},    {6, "punctured", 0.0},
    {7, "cusp", 1200.0},  {8, "fourpoint", 600.0}, {9, "decay", 1200.0},
};

struct Run {
  int status = -1;
  std::string output;
};

Run run(const std::string& cmd) {
  Run r;
  FILE* p = popen((cmd + " 2>&1").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  while (std::fgets(buf, sizeof buf, p)) {
    r.output += buf;
    std::fputs(buf, stdout);
    std::fflush(stdout);
  }
  r.status = pclose(p);
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: acceptance <bicap executable> <work directory>\n";
    return 1;
  }
  const std::string exe = argv[1];
  const std::filesystem::path dir = argv[2];
  std::filesystem::create_directories(dir);
  const std::string j1 = (dir / "run1.json").string(), j2 = (dir / "run2.json").string();
  std::filesystem::remove(j1);
  std::filesystem::remove(j2);

  const std::string base = quote(exe) + " verify --suite all --seed 1 --no-timings --json ";
  const Run r1 = run(base + quote(j1));
  const Run r2 = run(base + quote(j2));

  // Console lines look like "capacity   PASS  (189.62 s)".
  std::map<std::string, double> seconds;
  const std::regex line(R"(^(\w+)\s+(PASS|FAIL)\s+\(([0-9.]+) s\))");
  std::istringstream out(r1.output);
  for (std::string l; std::getline(out, l);) {
    std::smatch m;
    if (std::regex_search(l, m, line)) seconds[m[1]] = std::stod(m[3]);
  }

  std::map<std::string, bool> passed;
  try {
    const auto j = nlohmann::json::parse(slurp(j1));
    for (const auto& s : j.at("results").at("suites")) passed[s.at("suite")] = s.at("passed").get<bool>();
  } catch (const std::exception& e) {
    std::cout << "cannot read " << j1 << ": " << e.what() << '\n';
  }

  bool all = true;
  std::ostringstream summary;
  for (const auto& c : kCriteria) {
    const bool have = passed.count(c.suite) && seconds.count(c.suite);
    const bool checks = have && passed[c.suite];
    const double t = have ? seconds[c.suite] : -1.0;
    const bool fast = have && (c.max_seconds == 0.0 || t < c.max_seconds);
    const bool ok = checks && fast;
    all = all && ok;
    char msg[256];
    if (c.max_seconds > 0.0) {
      std::snprintf(msg, sizeof msg, "criterion %2d %-10s %s  checks %s, runtime %.2f s (limit %.0f s)", c.id,
                    c.suite.c_str(), ok ? "PASS" : "FAIL", checks ? "pass" : "fail", t, c.max_seconds);
    } else {
      std::snprintf(msg, sizeof msg, "criterion %2d %-10s %s  checks %s, runtime %.2f s (no limit)", c.id,
                    c.suite.c_str(), ok ? "PASS" : "FAIL", checks ? "pass" : "fail", t);
    }
    summary << msg << '\n';
  }

  const std::string b1 = slurp(j1), b2 = slurp(j2);
  const bool same = !b1.empty() && b1 == b2;
  all = all && same;
  summary << "criterion 10 determinism " << (same ? "PASS" : "FAIL") << "  " << b1.size() << " and " << b2.size()
          << " bytes, " << (same ? "identical" : "different") << '\n';
  summary << (all ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << '\n';
  std::cout << '\n' << summary.str();
  std::ofstream((dir / "summary.txt").string()) << summary.str();
  return all ? 0 : 1;
}
