#include "stepstress/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace stepstress {

namespace {

using nlohmann::json;

std::vector<double> as_doubles(const json& arr, const std::string& key) {
  if (!arr.is_array())
    throw std::invalid_argument("config: \"" + key + "\" must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number())
      throw std::invalid_argument("config: \"" + key + "\" must be numeric");
    out.push_back(v.get<double>());
  }
  return out;
}

double require_number(const json& doc, const std::string& key) {
  if (!doc.contains(key) || !doc[key].is_number())
    throw std::invalid_argument("config: missing numeric field \"" + key + "\"");
  return doc[key].get<double>();
}

std::size_t require_count(const json& doc, const std::string& key) {
  const double n = require_number(doc, key);
  if (!(n >= 1.0) || n != std::floor(n))
    throw std::invalid_argument("config: \"" + key +
                                "\" must be a positive integer");
  return static_cast<std::size_t>(n);
}

}  // namespace

std::vector<double> resolve_levels(const json& doc) {
  const int level_keys = doc.contains("celsius") + doc.contains("x") +
                         doc.contains("inverse_power_v");
  if (level_keys != 1)
    throw std::invalid_argument(
        "config: exactly one of \"celsius\", \"x\", \"inverse_power_v\" required");
  std::vector<double> x;
  if (doc.contains("celsius")) {
    for (double c : as_doubles(doc["celsius"], "celsius"))
      x.push_back(arrhenius_x(c));
  } else if (doc.contains("inverse_power_v")) {
    for (double v : as_doubles(doc["inverse_power_v"], "inverse_power_v"))
      x.push_back(inverse_power_x(v));
  } else {
    x = as_doubles(doc["x"], "x");
  }
  return x;
}

ExperimentConfig parse_experiment_config(const json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("config: document must be a JSON object");

  ExperimentConfig cfg;
  cfg.params = ModelParams(require_number(doc, "gamma0"),
                           require_number(doc, "gamma1"),
                           require_number(doc, "sigma"));

  json resolved = doc;
  cfg.x = resolve_levels(doc);
  resolved["x"] = cfg.x;

  const bool has_taus = doc.contains("taus");
  const bool has_targets = doc.contains("target_cum_probs");
  if (has_taus == has_targets)
    throw std::invalid_argument(
        "config: exactly one of \"taus\", \"target_cum_probs\" required");
  if (has_taus) {
    cfg.taus = as_doubles(doc["taus"], "taus");
  } else {
    cfg.taus = design_taus(cfg.params, cfg.x,
                           as_doubles(doc["target_cum_probs"], "target_cum_probs"));
  }
  resolved["taus"] = cfg.taus;
  if (cfg.taus.size() + 1 != cfg.x.size())
    throw std::invalid_argument("config: need one fewer change time than levels");

  cfg.n = require_count(doc, "n");

  if (!doc.contains("scheme") || !doc["scheme"].is_string())
    throw std::invalid_argument("config: missing string field \"scheme\"");
  cfg.scheme = parse_scheme(doc["scheme"].get<std::string>(), cfg.n);

  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("B")) {
    const double b = require_number(doc, "B");
    if (!(b >= 0.0) || b != std::floor(b))
      throw std::invalid_argument("config: \"B\" must be a nonnegative integer");
    cfg.bootstrap_B = static_cast<int>(b);
  }
  if (doc.contains("conf_levels")) {
    cfg.conf_levels = as_doubles(doc["conf_levels"], "conf_levels");
    for (double l : cfg.conf_levels)
      if (!(l > 0.0 && l < 1.0))
        throw std::invalid_argument("config: confidence levels must be in (0,1)");
  }
  resolved["version"] = kToolVersion;
  cfg.resolved = std::move(resolved);
  cfg.plan();  // validate levels/taus jointly
  return cfg;
}

ExperimentConfig parse_experiment_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: JSON parse error: ") +
                                e.what());
  }
  return parse_experiment_config(doc);
}

PlanConfig parse_plan(const json& doc) {
  if (!doc.is_object())
    throw std::invalid_argument("plan: document must be a JSON object");
  PlanConfig plan;
  plan.x = resolve_levels(doc);
  if (!doc.contains("taus"))
    throw std::invalid_argument("plan: missing \"taus\"");
  plan.taus = as_doubles(doc["taus"], "taus");
  if (plan.taus.size() + 1 != plan.x.size())
    throw std::invalid_argument("plan: need one fewer change time than levels");
  plan.n = require_count(doc, "n");
  plan.plan();  // validate
  return plan;
}

PlanConfig parse_plan_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("plan: JSON parse error: ") + e.what());
  }
  return parse_plan(doc);
}

Scenario parse_scenario(const json& doc) {
  const ExperimentConfig cfg = parse_experiment_config(doc);
  Scenario sc;
  if (doc.contains("id")) {
    if (!doc["id"].is_string())
      throw std::invalid_argument("scenario: \"id\" must be a string");
    sc.id = doc["id"].get<std::string>();
  }
  const double reps = require_number(doc, "replications");
  if (!(reps >= 1.0) || reps != std::floor(reps))
    throw std::invalid_argument("scenario: \"replications\" must be a positive integer");
  sc.replications = static_cast<int>(reps);
  sc.truth = cfg.params;
  sc.plan = cfg.plan();
  sc.scheme = cfg.scheme;
  sc.bootstrap_B = cfg.bootstrap_B;
  sc.conf_levels = cfg.conf_levels;
  sc.seed = cfg.seed;
  return sc;
}

Scenario parse_scenario_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("scenario: JSON parse error: ") +
                                e.what());
  }
  return parse_scenario(doc);
}

namespace {

std::string num17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset_csv(std::ostream& os, const StepStressSample& sample,
                       const json& resolved_config) {
  os << "# stepstress dataset v" << kToolVersion << '\n';
  os << "# config: " << resolved_config.dump() << '\n';
  os << "step,time,removed_after\n";
  for (const auto& f : sample.flattened())
    os << (f.step + 1) << ',' << num17(f.time) << ',' << f.removed_after << '\n';
}

std::string dataset_csv(const StepStressSample& sample,
                        const json& resolved_config) {
  std::ostringstream os;
  write_dataset_csv(os, sample, resolved_config);
  return os.str();
}

StepStressSample read_dataset_csv(std::istream& is, const StressPlan& plan,
                                  std::size_t n) {
  std::vector<std::vector<double>> times(plan.num_steps());
  std::vector<int> removals;
  std::string line;
  bool seen_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!seen_header) {
      if (line != "step,time,removed_after")
        throw std::invalid_argument("dataset: unexpected header \"" + line + "\"");
      seen_header = true;
      continue;
    }
    std::istringstream row(line);
    std::string step_s, time_s, rem_s;
    if (!std::getline(row, step_s, ',') || !std::getline(row, time_s, ',') ||
        !std::getline(row, rem_s))
      throw std::invalid_argument("dataset: malformed row at line " +
                                  std::to_string(lineno));
    std::size_t pos = 0;
    const long step = std::stol(step_s, &pos);
    if (pos != step_s.size() || step < 1 ||
        static_cast<std::size_t>(step) > plan.num_steps())
      throw std::invalid_argument("dataset: bad step index at line " +
                                  std::to_string(lineno));
    const double t = std::stod(time_s, &pos);
    if (pos != time_s.size())
      throw std::invalid_argument("dataset: bad time at line " +
                                  std::to_string(lineno));
    const long rem = std::stol(rem_s, &pos);
    if (pos != rem_s.size() || rem < 0)
      throw std::invalid_argument("dataset: bad removal count at line " +
                                  std::to_string(lineno));
    times[static_cast<std::size_t>(step - 1)].push_back(t);
    removals.push_back(static_cast<int>(rem));
  }
  if (!seen_header)
    throw std::invalid_argument("dataset: missing step,time,removed_after header");
  return StepStressSample(plan, CensoringScheme(n, std::move(removals)),
                          std::move(times));
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  if (f.bad()) throw std::runtime_error("error reading " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw std::runtime_error("error writing " + path);
}

}  // namespace stepstress
