#include "stepstress/capi.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "stepstress/estimation.hpp"
#include "stepstress/inference.hpp"
#include "stepstress/io.hpp"
#include "stepstress/mcstudy.hpp"
#include "stepstress/model.hpp"
#include "stepstress/sampling.hpp"

namespace {

using nlohmann::json;
using namespace stepstress;

thread_local std::string g_last_error;

int fail(int status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, translating C++ exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return SSX_OK;
  } catch (const std::invalid_argument& e) {
    return fail(SSX_ERR_VALIDATION, e.what());
  } catch (const std::domain_error& e) {
    return fail(SSX_ERR_VALIDATION, e.what());
  } catch (const nlohmann::json::exception& e) {
    // missing keys / wrong types in request documents
    return fail(SSX_ERR_VALIDATION, e.what());
  } catch (const std::bad_alloc&) {
    return fail(SSX_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(SSX_ERR_NUMERIC, e.what());
  }
}

json interval_set_json(const IntervalSet& set) {
  json out = json::array();
  for (std::size_t l = 0; l < set.levels.size(); ++l) {
    json entry{{"method", set.method}, {"level", set.levels[l]}};
    for (int p = 0; p < 3; ++p)
      entry[kParamNames[p]] =
          json::array({set.bounds[l][p].lower, set.bounds[l][p].upper});
    out.push_back(entry);
  }
  return out;
}

}  // namespace

extern "C" {

const char* ssx_version(void) { return kToolVersion; }

const char* ssx_last_error(void) { return g_last_error.c_str(); }

void ssx_string_free(char* s) { std::free(s); }

int ssx_simulate(const char* config_json, char** out_csv,
                 char** out_sidecar_json) {
  if (config_json == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_simulate: config_json is NULL");
  return guarded([&] {
    const ExperimentConfig cfg = parse_experiment_config_text(config_json);
    RngStream rng(cfg.seed, 0);
    const StepStressSample sample =
        simulate_dataset(cfg.params, cfg.plan(), cfg.scheme, rng);
    if (out_csv != nullptr)
      *out_csv = dup_string(dataset_csv(sample, cfg.resolved));
    if (out_sidecar_json != nullptr)
      *out_sidecar_json = dup_string(cfg.resolved.dump(2) + "\n");
  });
}

int ssx_fit(const char* dataset_csv_text, const char* plan_json,
            const char* options_json, char** out_report_json) {
  if (dataset_csv_text == nullptr || plan_json == nullptr ||
      out_report_json == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_fit: NULL argument");
  return guarded([&] {
    const PlanConfig plan_cfg = parse_plan_text(plan_json);
    std::istringstream data_stream{std::string(dataset_csv_text)};
    const StepStressSample sample =
        read_dataset_csv(data_stream, plan_cfg.plan(), plan_cfg.n);

    json opts = json::object();
    if (options_json != nullptr && options_json[0] != '\0') {
      try {
        opts = json::parse(options_json);
      } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("options: JSON parse error: ") +
                                    e.what());
      }
      if (!opts.is_object())
        throw std::invalid_argument("options: document must be a JSON object");
    }
    FitOptions fit_opts;
    if (opts.contains("init")) {
      const auto init = opts["init"];
      if (!init.is_array() || init.size() != 3)
        throw std::invalid_argument("options: \"init\" must be [g0, g1, sigma]");
      fit_opts.init = ModelParams(init[0].get<double>(), init[1].get<double>(),
                                  init[2].get<double>());
    }
    const bool want_ci = opts.value("ci", false);
    const bool want_test = opts.value("test_gamma1", false);
    const int boot_B = opts.value("boot_B", 0);
    const std::uint64_t seed = opts.value("seed", std::uint64_t{1});
    std::vector<double> levels{0.90, 0.95, 0.99};
    if (opts.contains("conf_levels"))
      levels = opts["conf_levels"].get<std::vector<double>>();

    json report{{"version", kToolVersion}};
    FitResult fit_result;
    try {
      fit_result = fit(sample, fit_opts);
    } catch (const std::runtime_error& e) {
      // Statistical failure (e.g. singular information): report, don't error.
      report["converged"] = false;
      report["error"] = e.what();
      *out_report_json = dup_string(report.dump(2) + "\n");
      return;
    }
    report["converged"] = fit_result.converged;
    report["estimates"] = {{"gamma0", fit_result.params_hat.gamma0},
                           {"gamma1", fit_result.params_hat.gamma1},
                           {"sigma", fit_result.params_hat.sigma}};
    report["loglik"] = fit_result.loglik_at_max;
    report["iterations"] = fit_result.iterations;
    report["grad_norm"] = fit_result.grad_norm;
    if (fit_result.fisher.covariance) {
      const Mat3& V = *fit_result.fisher.covariance;
      report["se"] = {{"gamma0", std::sqrt(V[0][0])},
                      {"gamma1", std::sqrt(V[1][1])},
                      {"sigma", std::sqrt(V[2][2])}};
    }
    if (fit_result.converged) {
      json intervals = json::array();
      if (want_ci)
        for (const auto& e : interval_set_json(approx_ci(fit_result, levels)))
          intervals.push_back(e);
      const BootstrapResult* boot_ptr = nullptr;
      BootstrapResult boot;
      if (boot_B > 0) {
        boot = bootstrap_sample(fit_result, sample, boot_B, seed);
        boot_ptr = &boot;
        report["bootstrap"] = {{"B", boot.requested_B},
                               {"failed_refits", boot.failed_refits},
                               {"seed", boot.seed}};
        for (const auto& e : interval_set_json(percentile_ci(boot, levels)))
          intervals.push_back(e);
      }
      if (!intervals.empty()) report["intervals"] = intervals;
      if (want_test) {
        const Gamma1TestResult t = test_gamma1_positive(fit_result, boot_ptr);
        report["test_gamma1"] = {{"t_pvalue", t.t_pvalue}};
        if (t.boot_pvalue)
          report["test_gamma1"]["boot_pvalue"] = *t.boot_pvalue;
      }
    }
    *out_report_json = dup_string(report.dump(2) + "\n");
  });
}

int ssx_mc_run(const char* scenario_json, int jobs, char** out_report_csv) {
  if (scenario_json == nullptr || out_report_csv == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_mc_run: NULL argument");
  return guarded([&] {
    const Scenario sc = parse_scenario_text(scenario_json);
    const McReport report = run_scenario(sc, jobs <= 0 ? 1 : jobs);
    *out_report_csv = dup_string(render_table(report, TableFormat::kCsv));
  });
}

int ssx_design_taus(const char* request_json, char** out_json) {
  if (request_json == nullptr || out_json == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_design_taus: NULL argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(request_json);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("request: JSON parse error: ") +
                                  e.what());
    }
    const ModelParams params(doc.at("gamma0").get<double>(),
                             doc.at("gamma1").get<double>(),
                             doc.at("sigma").get<double>());
    const std::vector<double> x = resolve_levels(doc);
    if (!doc.contains("target_cum_probs"))
      throw std::invalid_argument("request: missing \"target_cum_probs\"");
    const std::vector<double> taus = design_taus(
        params, x, doc["target_cum_probs"].get<std::vector<double>>());
    *out_json = dup_string(json{{"taus", taus}, {"x", x}}.dump(2) + "\n");
  });
}

int ssx_calibrate(const char* request_json, char** out_json) {
  if (request_json == nullptr || out_json == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_calibrate: NULL argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(request_json);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("request: JSON parse error: ") +
                                  e.what());
    }
    const std::vector<double> x = resolve_levels(doc);
    const std::vector<double> means =
        doc.at("mean_lifetimes").get<std::vector<double>>();
    if (means.size() != x.size())
      throw std::invalid_argument(
          "request: \"mean_lifetimes\" must match the number of levels");
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < x.size(); ++i) pairs.emplace_back(x[i], means[i]);
    const ModelParams p = calibrate(pairs, doc.at("sd_first").get<double>());
    *out_json = dup_string(json{{"gamma0", p.gamma0},
                                {"gamma1", p.gamma1},
                                {"sigma", p.sigma}}
                               .dump(2) +
                           "\n");
  });
}

}  // extern "C"

struct ssx_model {
  stepstress::ModelParams params;
  stepstress::StressPlan plan;
};

extern "C" {

int ssx_model_new(const char* model_json, ssx_model** out_model) {
  if (model_json == nullptr || out_model == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_model_new: NULL argument");
  return guarded([&] {
    json doc;
    try {
      doc = json::parse(model_json);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("model: JSON parse error: ") +
                                  e.what());
    }
    const ModelParams params(doc.at("gamma0").get<double>(),
                             doc.at("gamma1").get<double>(),
                             doc.at("sigma").get<double>());
    const std::vector<double> x = resolve_levels(doc);
    if (!doc.contains("taus"))
      throw std::invalid_argument("model: missing \"taus\"");
    StressPlan plan(x, doc["taus"].get<std::vector<double>>());
    *out_model = new ssx_model{params, std::move(plan)};
  });
}

void ssx_model_free(ssx_model* model) { delete model; }

int ssx_model_cdf(const ssx_model* model, double t, double* out_p) {
  if (model == nullptr || out_p == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_model_cdf: NULL argument");
  return guarded([&] { *out_p = cdf(model->params, model->plan, t); });
}

int ssx_model_pdf(const ssx_model* model, double t, double* out_density) {
  if (model == nullptr || out_density == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_model_pdf: NULL argument");
  return guarded([&] { *out_density = pdf(model->params, model->plan, t); });
}

int ssx_model_quantile(const ssx_model* model, double p, double* out_t) {
  if (model == nullptr || out_t == nullptr)
    return fail(SSX_ERR_VALIDATION, "ssx_model_quantile: NULL argument");
  return guarded([&] { *out_t = quantile(model->params, model->plan, p); });
}

}  // extern "C"
