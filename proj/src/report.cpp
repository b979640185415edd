#include "symbranch/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "symbranch/errors.hpp"

namespace sbm {

bool RunReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  j["provenance"] = {{"seed", seed}, {"config_hash", config_hash}, {"wall_ms", wall_ms}};
  j["pass"] = all_pass();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : checks) {
    arr.push_back({{"name", c.name},
                   {"measured", c.measured},
                   {"tolerance", c.tolerance},
                   {"comparator", c.comparator},
                   {"pass", c.pass},
                   {"note", c.note}});
  }
  j["checks"] = arr;
  j["tables"] = tables;
  return j;
}

std::string RunReport::summary_lines() const {
  std::string out;
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof(buf), "%-4s %-40s measured=%.6g tol=%.6g (%s)%s%s\n",
                  c.pass ? "ok" : "FAIL", c.name.c_str(), c.measured, c.tolerance,
                  c.comparator.c_str(), c.note.empty() ? "" : " ", c.note.c_str());
    out += buf;
  }
  return out;
}

void append_report(const std::string& out_dir, const RunReport& report) {
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / "report.json";
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("report: cannot open " + path.string());
  out << report.to_json().dump() << "\n";
}

}  // namespace sbm
