#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "stepstress/mcstudy.hpp"
#include "stepstress/model.hpp"
#include "stepstress/sample.hpp"
#include "stepstress/schemes.hpp"

namespace stepstress {

inline constexpr const char* kToolVersion = "0.1.0";

// A fully resolved experiment description: covariates on the link scale,
// explicit change times, and the censoring scheme.
struct ExperimentConfig {
  ModelParams params;
  std::vector<double> x;
  std::vector<double> taus;
  std::size_t n = 0;
  CensoringScheme scheme{1, {0}};
  std::uint64_t seed = 1;
  int bootstrap_B = 0;
  std::vector<double> conf_levels{0.90, 0.95, 0.99};
  nlohmann::json resolved;  // input echoed back with computed x / taus

  StressPlan plan() const { return StressPlan(x, taus); }
};

// Parses and resolves a config document. Levels come from exactly one of
// "celsius" (Arrhenius transform), "x" (already on the link scale) or
// "inverse_power_v" (log transform); change times from exactly one of "taus"
// or "target_cum_probs" (inverted through design_taus). Violations throw
// std::invalid_argument.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
ExperimentConfig parse_experiment_config_text(const std::string& text);

// Link-scale covariates from exactly one of "celsius", "x", "inverse_power_v".
std::vector<double> resolve_levels(const nlohmann::json& doc);

// Plan-only document for fitting existing data: one levels representation,
// explicit "taus", and "n". No model parameters are involved.
struct PlanConfig {
  std::vector<double> x;
  std::vector<double> taus;
  std::size_t n = 0;

  StressPlan plan() const { return StressPlan(x, taus); }
};

PlanConfig parse_plan(const nlohmann::json& doc);
PlanConfig parse_plan_text(const std::string& text);

// Scenario documents reuse the config fields plus "id" and "replications".
Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);

// Dataset CSV: '#'-prefixed header lines embedding the resolved config and
// tool version, then "step,time,removed_after" rows (step 1-based, one row
// per observed failure, globally time-sorted, 17 significant digits).
void write_dataset_csv(std::ostream& os, const StepStressSample& sample,
                       const nlohmann::json& resolved_config);
std::string dataset_csv(const StepStressSample& sample,
                        const nlohmann::json& resolved_config);

// Reads the rows back and reassembles the sample; the plan and total unit
// count come from the caller (e.g. a plan/config file), the removals from the
// rows themselves.
StepStressSample read_dataset_csv(std::istream& is, const StressPlan& plan,
                                  std::size_t n);

std::string read_text_file(const std::string& path);   // throws on I/O failure
void write_text_file(const std::string& path, const std::string& content);

}  // namespace stepstress
