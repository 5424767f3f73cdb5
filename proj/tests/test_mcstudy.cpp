#include <cmath>
#include <sstream>
#include <string>

#include "doctest.h"
#include "stepstress/mcstudy.hpp"
#include "testdata.hpp"

using namespace stepstress;

namespace {

Scenario small_scenario() {
  Scenario sc;
  sc.id = "unit-small";
  sc.truth = ModelParams(testdata::kTrueGamma0, testdata::kTrueGamma1,
                         testdata::kTrueSigma);
  sc.plan = testdata::demo_plan();
  sc.scheme = parse_scheme("7,27*0", 35);
  sc.replications = 40;
  sc.bootstrap_B = 0;
  sc.conf_levels = {0.90, 0.95};
  sc.seed = 77;
  return sc;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("run_scenario aggregates a small study") {
  Scenario sc = small_scenario();
  McReport rep = run_scenario(sc, 2);
  CHECK(rep.scenario_id == "unit-small");
  CHECK(rep.replications == 40);
  CHECK(rep.seed == 77);
  CHECK(rep.n_failed_fits <= 4);
  CHECK_FALSE(rep.unreliable);
  REQUIRE(rep.cells.size() == 2);  // two levels, approximate only
  for (const auto& cell : rep.cells) {
    CHECK(cell.method == "approximate");
    for (int p = 0; p < 3; ++p) {
      CHECK(cell.coverage_pct[p] >= 0.0);
      CHECK(cell.coverage_pct[p] <= 100.0);
      CHECK(cell.mean_length[p] > 0.0);
    }
  }
  // loose sanity on the estimates themselves
  CHECK(std::fabs(rep.bias[1]) < 0.05);
  CHECK(std::fabs(rep.bias[2]) < 0.05);
  CHECK(rep.mse[1] < 0.01);
}

TEST_CASE("results are independent of the job count") {
  Scenario sc = small_scenario();
  sc.replications = 24;
  McReport a = run_scenario(sc, 1);
  McReport b = run_scenario(sc, 8);
  CHECK(a.n_failed_fits == b.n_failed_fits);
  for (int p = 0; p < 3; ++p) {
    CHECK(a.bias[p] == b.bias[p]);
    CHECK(a.mse[p] == b.mse[p]);
  }
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t c = 0; c < a.cells.size(); ++c) {
    for (int p = 0; p < 3; ++p) {
      CHECK(a.cells[c].coverage_pct[p] == b.cells[c].coverage_pct[p]);
      CHECK(a.cells[c].mean_length[p] == b.cells[c].mean_length[p]);
    }
  }
}

TEST_CASE("bootstrap cells appear when B > 0") {
  Scenario sc = small_scenario();
  sc.replications = 6;
  sc.bootstrap_B = 40;
  sc.conf_levels = {0.90};
  McReport rep = run_scenario(sc, 4);
  REQUIRE(rep.cells.size() == 2);
  CHECK(rep.cells[0].method == "approximate");
  CHECK(rep.cells[1].method == "percentile-bootstrap");
  CHECK(rep.cells[1].mean_length[1] > 0.0);
}

TEST_CASE("unidentifiable scenario is flagged, not fatal") {
  Scenario sc = small_scenario();
  sc.plan = StressPlan({sc.plan.levels[0]}, {});
  sc.scheme = CensoringScheme(10, std::vector<int>(10, 0));
  sc.replications = 5;
  McReport rep = run_scenario(sc, 1);
  CHECK(rep.n_failed_fits == 5);
  CHECK(rep.unreliable);
  CHECK(rep.cells.empty());
}

TEST_CASE("render_table") {
  Scenario sc = small_scenario();
  sc.replications = 10;
  McReport rep = run_scenario(sc, 2);
  SUBCASE("csv schema") {
    std::string csv = render_table(rep, TableFormat::kCsv);
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    CHECK(header ==
          "scenario_id,param,bias,mse,level,method,coverage_pct,mean_length,"
          "n_failed_fits");
    // 3 params x 2 cells data rows + header
    CHECK(count_lines(csv) == 1 + 6);
    CHECK(csv.find("gamma0,") != std::string::npos);
    CHECK(csv.find(",approximate,") != std::string::npos);
  }
  SUBCASE("aligned format") {
    std::string txt = render_table(rep, TableFormat::kAligned);
    CHECK(txt.find("unit-small") != std::string::npos);
    CHECK(txt.find("90% app.") != std::string::npos);
    CHECK(txt.find('(') != std::string::npos);
    CHECK(txt.find("sigma") != std::string::npos);
  }
}
