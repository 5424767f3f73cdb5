// Command-line front end; all statistics go through the public C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stepstress/capi.h"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path, int& exit_code) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << path << "\n";
    exit_code = kExitIo;
    return {};
  }
  std::ostringstream buf;
  buf << f.rdbuf();
  if (f.bad()) {
    std::cerr << "error: failed reading " << path << "\n";
    exit_code = kExitIo;
    return {};
  }
  exit_code = 0;
  return buf.str();
}

int write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return 0;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return kExitIo;
  }
  f << content;
  f.flush();
  if (!f) {
    std::cerr << "error: failed writing " << path << "\n";
    return kExitIo;
  }
  return 0;
}

int map_status(int status) {
  if (status == SSX_OK) return 0;
  std::cerr << "error: " << ssx_last_error() << "\n";
  return status == SSX_ERR_IO ? kExitIo : kExitValidation;
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { ssx_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? std::string() : ptr; }
};

std::string levels_json(const std::vector<double>& percents) {
  std::string out = "[";
  for (std::size_t i = 0; i < percents.size(); ++i) {
    if (i > 0) out += ",";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", percents[i] / 100.0);
    out += buf;
  }
  return out + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Step-stress accelerated life test toolkit"};
  app.set_version_flag("--version", std::string(ssx_version()));
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Simulate a dataset from a config");
  std::string sim_config, sim_out, sim_sidecar;
  simulate->add_option("--config", sim_config, "Experiment config JSON")->required();
  simulate->add_option("--out", sim_out, "Output CSV path ('-' for stdout)");
  simulate->add_option("--sidecar", sim_sidecar, "Resolved-plan JSON path");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit the model to a dataset");
  std::string fit_data, fit_plan, fit_out;
  bool fit_ci = false, fit_test = false;
  int fit_boot = 0;
  unsigned long long fit_seed = 1;
  std::vector<double> fit_levels;
  fit->add_option("--data", fit_data, "Dataset CSV")->required();
  fit->add_option("--plan", fit_plan, "Plan JSON (levels, taus, n)")->required();
  fit->add_flag("--ci", fit_ci, "Add approximate confidence intervals");
  fit->add_option("--boot", fit_boot, "Bootstrap replications (adds percentile CIs)");
  fit->add_option("--levels", fit_levels,
                  "Confidence levels in percent (default 90 95 99)")
      ->delimiter(',');
  fit->add_flag("--test-gamma1", fit_test, "One-sided test of gamma1 > 0");
  fit->add_option("--seed", fit_seed, "Bootstrap seed");
  fit->add_option("--out", fit_out, "Report path ('-' for stdout)");

  // mc
  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo scenario");
  std::string mc_scenario, mc_out;
  int mc_jobs = 1;
  mc->add_option("--scenario", mc_scenario, "Scenario JSON")->required();
  mc->add_option("--out", mc_out, "Report CSV path ('-' for stdout)");
  mc->add_option("--jobs", mc_jobs, "Worker threads (output is jobs-independent)");

  // design-taus
  auto* design = app.add_subcommand("design-taus",
                                    "Place change times for target probabilities");
  std::string design_request, design_out;
  design->add_option("--request", design_request, "Request JSON")->required();
  design->add_option("--out", design_out, "Output path ('-' for stdout)");

  // calibrate
  auto* cal = app.add_subcommand("calibrate",
                                 "Parameters from mean lifetimes and a spread");
  std::string cal_request, cal_out;
  cal->add_option("--request", cal_request, "Request JSON")->required();
  cal->add_option("--out", cal_out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  int rc = 0;
  if (*simulate) {
    const std::string config = read_file(sim_config, rc);
    if (rc != 0) return rc;
    OwnedString csv, sidecar;
    const int status = ssx_simulate(config.c_str(), &csv.ptr,
                                    sim_sidecar.empty() ? nullptr : &sidecar.ptr);
    if (status != SSX_OK) return map_status(status);
    rc = write_output(sim_out, csv.str());
    if (rc == 0 && !sim_sidecar.empty()) rc = write_output(sim_sidecar, sidecar.str());
    return rc;
  }

  if (*fit) {
    const std::string data = read_file(fit_data, rc);
    if (rc != 0) return rc;
    const std::string plan = read_file(fit_plan, rc);
    if (rc != 0) return rc;
    std::string options = "{\"ci\":" + std::string(fit_ci ? "true" : "false") +
                          ",\"test_gamma1\":" + (fit_test ? "true" : "false") +
                          ",\"boot_B\":" + std::to_string(fit_boot) +
                          ",\"seed\":" + std::to_string(fit_seed);
    if (!fit_levels.empty()) options += ",\"conf_levels\":" + levels_json(fit_levels);
    options += "}";
    OwnedString report;
    const int status =
        ssx_fit(data.c_str(), plan.c_str(), options.c_str(), &report.ptr);
    if (status != SSX_OK) return map_status(status);
    return write_output(fit_out, report.str());
  }

  if (*mc) {
    const std::string scenario = read_file(mc_scenario, rc);
    if (rc != 0) return rc;
    OwnedString csv;
    const int status = ssx_mc_run(scenario.c_str(), mc_jobs, &csv.ptr);
    if (status != SSX_OK) return map_status(status);
    return write_output(mc_out, csv.str());
  }

  if (*design) {
    const std::string request = read_file(design_request, rc);
    if (rc != 0) return rc;
    OwnedString out;
    const int status = ssx_design_taus(request.c_str(), &out.ptr);
    if (status != SSX_OK) return map_status(status);
    return write_output(design_out, out.str());
  }

  if (*cal) {
    const std::string request = read_file(cal_request, rc);
    if (rc != 0) return rc;
    OwnedString out;
    const int status = ssx_calibrate(request.c_str(), &out.ptr);
    if (status != SSX_OK) return map_status(status);
    return write_output(cal_out, out.str());
  }

  return kExitValidation;  // unreachable with require_subcommand(1)
}
