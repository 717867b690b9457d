#pragma once

// Verification suites and the JSON report envelope used by zollcheck.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace zoll {

inline constexpr const char* tool_name = "zollcheck";
inline constexpr const char* tool_version = "1.0.0";
inline constexpr int schema_version = 1;

struct CheckResult {
  std::string name;
  std::string verdict;  ///< pass | fail | warn
  nlohmann::json metrics;
};

struct Report {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<CheckResult> checks;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Standard metrics record {check, n, grid, tolerance, max_residual, verdict}.
CheckResult make_check(const std::string& name, int n, int grid, double tolerance, double max_residual, bool pass);

struct SuiteOptions {
  int n = 1;
  int grid = 0;            ///< 0 selects the suite default
  double tolerance = 0.0;  ///< 0 keeps the per-check defaults
  std::uint64_t seed = 7;
};

Report verify_model(const SuiteOptions& options);
Report degrees(const SuiteOptions& options);

struct TubeProbeRequest {
  std::string model = "cpn";  ///< cpn | sphere | block
  int n = 2;
  double curvature = 1.0;
  double tau_max = 40.0;
  int grid = 64;
};

Report tube_probe(const TubeProbeRequest& request);

/// Rows space,degree,group,rank,torsion,closed_form,match for UM, D and X.
std::string cohomology_csv(int n);
Report cohomology_report(int n);

/// Matrix JSON: array of rows; entries are numbers or [re, im] pairs.
Report classify_involution(const nlohmann::json& matrix, std::uint64_t seed, int samples);

}  // namespace zoll
