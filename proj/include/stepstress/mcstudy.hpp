#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stepstress/model.hpp"
#include "stepstress/schemes.hpp"

namespace stepstress {

struct Scenario {
  std::string id = "scenario";
  ModelParams truth{0.0, 0.0, 1.0};
  StressPlan plan{{0.0}, {}};          // placeholder single-level plan
  CensoringScheme scheme{1, {0}};      // placeholder complete sample of one
  int replications = 1000;
  int bootstrap_B = 0;  // 0 disables the bootstrap interval family
  std::vector<double> conf_levels{0.90, 0.95, 0.99};
  std::uint64_t seed = 1;
};

struct McReport {
  struct CoverageCell {
    double level;
    std::string method;  // "approximate" | "percentile-bootstrap"
    std::array<double, 3> coverage_pct;
    std::array<double, 3> mean_length;
  };

  std::string scenario_id;
  int replications = 0;
  int bootstrap_B = 0;
  std::uint64_t seed = 0;
  int n_failed_fits = 0;   // replications excluded from every aggregate
  bool unreliable = false; // > 10% of replications failed
  std::array<double, 3> bias{};
  std::array<double, 3> mse{};
  std::vector<CoverageCell> cells;  // level-major, approximate before bootstrap
};

// Simulate `replications` datasets from the truth, fit each, and aggregate
// bias, MSE, and per-(level, method) coverage and mean interval length.
// Replication i draws its dataset from stream (i << 32) and bootstrap
// replicate b from stream (i << 32) | (b + 1), so results are bit-identical
// for any `jobs` and any thread schedule.
McReport run_scenario(const Scenario& scenario, int jobs = 1);

enum class TableFormat { kCsv, kAligned };

// kCsv emits the schema
//   scenario_id,param,bias,mse,level,method,coverage_pct,mean_length,n_failed_fits
// kAligned emits one row per parameter with "coverage (length)" cells.
std::string render_table(const McReport& report, TableFormat format);

}  // namespace stepstress
