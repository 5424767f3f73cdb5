#include "stepstress/mcstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "stepstress/estimation.hpp"
#include "stepstress/inference.hpp"
#include "stepstress/sampling.hpp"

namespace stepstress {

namespace {

struct RepResult {
  bool ok = false;
  std::array<double, 3> theta{};
  // hit/length indexed as [level][param], approximate then bootstrap
  std::vector<std::array<bool, 3>> approx_hit;
  std::vector<std::array<double, 3>> approx_len;
  std::vector<std::array<bool, 3>> boot_hit;
  std::vector<std::array<double, 3>> boot_len;
};

RepResult run_one(const Scenario& sc, int rep) {
  RepResult out;
  const std::uint64_t base = static_cast<std::uint64_t>(rep) << 32;
  RngStream rng(sc.seed, base);
  try {
    const StepStressSample data =
        simulate_dataset(sc.truth, sc.plan, sc.scheme, rng);
    const FitResult f = fit(data);
    if (!f.converged || !f.fisher.covariance) return out;
    out.theta = {f.params_hat.gamma0, f.params_hat.gamma1, f.params_hat.sigma};
    const std::array<double, 3> truth{sc.truth.gamma0, sc.truth.gamma1,
                                      sc.truth.sigma};

    const IntervalSet app = approx_ci(f, sc.conf_levels);
    for (std::size_t l = 0; l < sc.conf_levels.size(); ++l) {
      std::array<bool, 3> hit;
      std::array<double, 3> len;
      for (int p = 0; p < 3; ++p) {
        const Interval& iv = app.bounds[l][p];
        hit[p] = iv.lower <= truth[p] && truth[p] <= iv.upper;
        len[p] = iv.upper - iv.lower;
      }
      out.approx_hit.push_back(hit);
      out.approx_len.push_back(len);
    }

    if (sc.bootstrap_B > 0) {
      const BootstrapResult boot =
          bootstrap_sample(f, data, sc.bootstrap_B, sc.seed, base);
      const IntervalSet pct = percentile_ci(boot, sc.conf_levels);
      for (std::size_t l = 0; l < sc.conf_levels.size(); ++l) {
        std::array<bool, 3> hit;
        std::array<double, 3> len;
        for (int p = 0; p < 3; ++p) {
          const Interval& iv = pct.bounds[l][p];
          hit[p] = iv.lower <= truth[p] && truth[p] <= iv.upper;
          len[p] = iv.upper - iv.lower;
        }
        out.boot_hit.push_back(hit);
        out.boot_len.push_back(len);
      }
    }
    out.ok = true;
  } catch (const std::exception&) {
    out.ok = false;
  }
  return out;
}

}  // namespace

McReport run_scenario(const Scenario& scenario, int jobs) {
  if (scenario.replications < 1)
    throw std::invalid_argument("run_scenario: replications must be >= 1");
  if (scenario.bootstrap_B < 0)
    throw std::invalid_argument("run_scenario: bootstrap_B must be >= 0");
  for (double l : scenario.conf_levels)
    if (!(l > 0.0 && l < 1.0))
      throw std::invalid_argument("run_scenario: confidence level outside (0,1)");
  if (jobs < 1) jobs = 1;

  const int R = scenario.replications;
  std::vector<RepResult> results(R);
  if (jobs == 1) {
    for (int i = 0; i < R; ++i) results[i] = run_one(scenario, i);
  } else {
    std::atomic<int> next{0};
    auto worker = [&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= R) return;
        results[i] = run_one(scenario, i);
      }
    };
    std::vector<std::thread> pool;
    const int nthreads = std::min(jobs, R);
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  McReport rep;
  rep.scenario_id = scenario.id;
  rep.replications = R;
  rep.bootstrap_B = scenario.bootstrap_B;
  rep.seed = scenario.seed;

  const std::size_t L = scenario.conf_levels.size();
  const std::array<double, 3> truth{scenario.truth.gamma0, scenario.truth.gamma1,
                                    scenario.truth.sigma};
  std::array<double, 3> sum{}, sumsq{};
  std::vector<std::array<long, 3>> app_hits(L, std::array<long, 3>{}),
      boot_hits(L, std::array<long, 3>{});
  std::vector<std::array<double, 3>> app_len(L, std::array<double, 3>{}),
      boot_len(L, std::array<double, 3>{});
  long kept = 0;
  for (const RepResult& r : results) {  // index order: deterministic reduction
    if (!r.ok) {
      ++rep.n_failed_fits;
      continue;
    }
    ++kept;
    for (int p = 0; p < 3; ++p) {
      const double d = r.theta[p] - truth[p];
      sum[p] += d;
      sumsq[p] += d * d;
    }
    for (std::size_t l = 0; l < L; ++l) {
      for (int p = 0; p < 3; ++p) {
        app_hits[l][p] += r.approx_hit[l][p] ? 1 : 0;
        app_len[l][p] += r.approx_len[l][p];
        if (scenario.bootstrap_B > 0) {
          boot_hits[l][p] += r.boot_hit[l][p] ? 1 : 0;
          boot_len[l][p] += r.boot_len[l][p];
        }
      }
    }
  }
  if (kept == 0) {
    rep.unreliable = true;
    return rep;
  }
  for (int p = 0; p < 3; ++p) {
    rep.bias[p] = sum[p] / kept;
    rep.mse[p] = sumsq[p] / kept;
  }
  for (std::size_t l = 0; l < L; ++l) {
    McReport::CoverageCell app;
    app.level = scenario.conf_levels[l];
    app.method = "approximate";
    for (int p = 0; p < 3; ++p) {
      app.coverage_pct[p] = 100.0 * app_hits[l][p] / kept;
      app.mean_length[p] = app_len[l][p] / kept;
    }
    rep.cells.push_back(app);
    if (scenario.bootstrap_B > 0) {
      McReport::CoverageCell bc;
      bc.level = scenario.conf_levels[l];
      bc.method = "percentile-bootstrap";
      for (int p = 0; p < 3; ++p) {
        bc.coverage_pct[p] = 100.0 * boot_hits[l][p] / kept;
        bc.mean_length[p] = boot_len[l][p] / kept;
      }
      rep.cells.push_back(bc);
    }
  }
  rep.unreliable = rep.n_failed_fits * 10 > R;
  return rep;
}

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string render_table(const McReport& report, TableFormat format) {
  std::ostringstream os;
  if (format == TableFormat::kCsv) {
    os << "scenario_id,param,bias,mse,level,method,coverage_pct,mean_length,"
          "n_failed_fits\n";
    for (int p = 0; p < 3; ++p) {
      for (const auto& cell : report.cells) {
        os << report.scenario_id << ',' << kParamNames[p] << ','
           << num(report.bias[p]) << ',' << num(report.mse[p]) << ','
           << num(cell.level) << ',' << cell.method << ','
           << num(cell.coverage_pct[p]) << ',' << num(cell.mean_length[p])
           << ',' << report.n_failed_fits << '\n';
      }
      if (report.cells.empty())
        os << report.scenario_id << ',' << kParamNames[p] << ','
           << num(report.bias[p]) << ',' << num(report.mse[p])
           << ",,,,," << report.n_failed_fits << '\n';
    }
    return os.str();
  }

  os << "scenario: " << report.scenario_id << "  reps: " << report.replications
     << "  B: " << report.bootstrap_B << "  seed: " << report.seed
     << "  failed fits: " << report.n_failed_fits
     << (report.unreliable ? "  [unreliable]" : "") << "\n";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-8s %12s %12s", "param", "bias", "mse");
  os << buf;
  for (const auto& cell : report.cells) {
    std::snprintf(buf, sizeof(buf), " %18s",
                  (std::to_string(static_cast<int>(std::lround(cell.level * 100))) +
                   "% " + (cell.method == "approximate" ? "app." : "boot."))
                      .c_str());
    os << buf;
  }
  os << '\n';
  for (int p = 0; p < 3; ++p) {
    std::snprintf(buf, sizeof(buf), "%-8s %12.5f %12.5f", kParamNames[p],
                  report.bias[p], report.mse[p]);
    os << buf;
    for (const auto& cell : report.cells) {
      std::snprintf(buf, sizeof(buf), " %11.1f (%4.2f)", cell.coverage_pct[p],
                    cell.mean_length[p]);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace stepstress
