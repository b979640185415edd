#ifndef SYMBRANCH_REPORT_HPP
#define SYMBRANCH_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sbm {

// One pass/fail line: the measured value and the tolerance it was held to
// are always recorded together.
struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string comparator;  // e.g. "abs<=", "in-window", "frac>="
  bool pass = false;
  std::string note;
};

struct RunReport {
  std::string kind;
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_ms = 0.0;
  std::vector<CheckResult> checks;
  nlohmann::json tables;  // estimates, CIs, fits; all rows carry CI or tolerance

  bool all_pass() const;
  nlohmann::json to_json() const;
  std::string summary_lines() const;  // one line per check, value + tolerance
};

// Appends one JSON object line to <out_dir>/report.json (JSON lines; the
// file is append-only across runs). Creates the directory if needed.
void append_report(const std::string& out_dir, const RunReport& report);

}  // namespace sbm

#endif
