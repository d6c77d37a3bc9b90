#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "bq/config.hpp"
#include "bq/permutability.hpp"

namespace bq {

// one residual with its acceptance interval [lo, hi]
struct Check {
  std::string tag;
  double value = 0;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool pass() const { return value >= lo && value <= hi; }
};

struct CsvPoint {
  double u = 0, v = 0;
  CVec3 x = CVec3::Zero();
};
struct CsvTable {
  std::string name;  // file stem
  std::vector<CsvPoint> rows;
};

struct SuiteReport {
  std::string suite;
  std::vector<Check> checks;
  std::string error;  // set when the suite stopped on a numeric error
  json data = json::object();
  std::vector<CsvTable> tables;

  bool pass() const;
  void upper(const std::string& tag, double v, double hi) { checks.push_back({tag, v, -INFINITY, hi}); }
  void lower(const std::string& tag, double v, double lo) { checks.push_back({tag, v, lo, INFINITY}); }
  void within(const std::string& tag, double v, double lo, double hi) { checks.push_back({tag, v, lo, hi}); }
  const Check* find(const std::string& tag) const;
};

// identities, ivory, roll, backlund, bpt, cube, check-ic, rigidity
const std::vector<std::string>& suite_names();
// runs one suite; numeric errors end up in SuiteReport::error, ConfigError propagates
SuiteReport run_suite(const std::string& name, const ExperimentConfig& cfg);

SuiteReport suite_identities(const ExperimentConfig& cfg);
SuiteReport suite_ivory(const ExperimentConfig& cfg);
SuiteReport suite_roll(const ExperimentConfig& cfg);
SuiteReport suite_backlund(const ExperimentConfig& cfg);
SuiteReport suite_bpt(const ExperimentConfig& cfg);
SuiteReport suite_cube(const ExperimentConfig& cfg);
SuiteReport suite_check_ic(const ExperimentConfig& cfg);
SuiteReport suite_rigidity(const ExperimentConfig& cfg);

// fixture pieces shared by the suites
SurfacePatch fixture_base(const ExperimentConfig& cfg);
SurfacePatch fixture_surface(const ExperimentConfig& cfg);
SeedPtr fixture_seed(const ExperimentConfig& cfg);
Grid fixture_grid(const ExperimentConfig& cfg);

// {suite, pass, residuals, limits, error, data, config_echo, timestamp}
json report_json(const SuiteReport& r, const json& config_echo, const std::string& timestamp);
void write_csv(const CsvTable& t, const std::string& path);

}  // namespace bq
