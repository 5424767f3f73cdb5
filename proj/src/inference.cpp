#include "stepstress/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stepstress/normal.hpp"
#include "stepstress/sampling.hpp"

namespace stepstress {

namespace {

void check_levels(const std::vector<double>& levels) {
  if (levels.empty())
    throw std::invalid_argument("confidence levels: none given");
  for (double l : levels)
    if (!(l > 0.0 && l < 1.0))
      throw std::invalid_argument("confidence level " + std::to_string(l) +
                                  " outside (0,1)");
}

std::array<double, 3> params_as_array(const ModelParams& p) {
  return {p.gamma0, p.gamma1, p.sigma};
}

}  // namespace

IntervalSet approx_ci(const FitResult& fit, const std::vector<double>& levels) {
  check_levels(levels);
  if (!fit.converged)
    throw std::runtime_error("approx_ci: fit did not converge");
  if (!fit.fisher.covariance)
    throw std::runtime_error("singular information");
  const Mat3& V = *fit.fisher.covariance;
  const auto theta = params_as_array(fit.params_hat);
  for (int i = 0; i < 3; ++i)
    if (!(V[i][i] > 0.0))
      throw std::runtime_error(std::string("approx_ci: non-positive variance for ") +
                               kParamNames[i]);

  IntervalSet out;
  out.method = "approximate";
  out.levels = levels;
  for (double level : levels) {
    const double z = normal::quantile(1.0 - (1.0 - level) / 2.0);
    std::array<Interval, 3> row;
    for (int i = 0; i < 3; ++i) {
      const double half = z * std::sqrt(V[i][i]);
      row[i] = {theta[i] - half, theta[i] + half};
    }
    out.bounds.push_back(row);
  }
  return out;
}

BootstrapResult bootstrap_sample(const FitResult& fitted,
                                 const StepStressSample& sample, int B,
                                 std::uint64_t seed,
                                 std::uint64_t stream_base) {
  if (!fitted.converged)
    throw std::runtime_error("bootstrap_sample: fit did not converge");
  if (B < 1) throw std::invalid_argument("bootstrap_sample: B must be >= 1");

  BootstrapResult out;
  out.requested_B = B;
  out.seed = seed;
  for (int b = 0; b < B; ++b) {
    RngStream rng(seed, stream_base | static_cast<std::uint64_t>(b + 1));
    try {
      const StepStressSample boot_data =
          simulate_dataset(fitted.params_hat, sample.plan, sample.scheme, rng);
      FitOptions opts;
      opts.init = fitted.params_hat;
      const FitResult refit = fit(boot_data, opts);
      if (!refit.converged) {
        ++out.failed_refits;
        continue;
      }
      const auto theta = params_as_array(refit.params_hat);
      for (int i = 0; i < 3; ++i) out.sorted[i].push_back(theta[i]);
    } catch (const std::exception&) {
      ++out.failed_refits;
    }
  }
  if (out.failed_refits * 5 > B)
    throw std::runtime_error("bootstrap unstable: " +
                             std::to_string(out.failed_refits) + " of " +
                             std::to_string(B) + " refits failed");
  for (auto& v : out.sorted) std::sort(v.begin(), v.end());
  return out;
}

IntervalSet percentile_ci(const BootstrapResult& boot,
                          const std::vector<double>& levels) {
  check_levels(levels);
  const std::size_t B = boot.sorted[0].size();

  IntervalSet out;
  out.method = "percentile-bootstrap";
  out.levels = levels;
  out.bootstrap_B = static_cast<int>(B);
  out.seed = boot.seed;
  for (double level : levels) {
    const double alpha = 1.0 - level;
    const std::size_t min_B =
        static_cast<std::size_t>(std::ceil(2.0 / alpha));
    if (B < min_B)
      throw std::invalid_argument(
          "percentile_ci: need at least " + std::to_string(min_B) +
          " bootstrap estimates for level " + std::to_string(level));
    // 1-based order-statistic indices ceil(B*alpha/2), ceil(B*(1-alpha/2)).
    const std::size_t lo =
        static_cast<std::size_t>(std::ceil(B * alpha / 2.0));
    const std::size_t hi =
        static_cast<std::size_t>(std::ceil(B * (1.0 - alpha / 2.0)));
    std::array<Interval, 3> row;
    for (int i = 0; i < 3; ++i) {
      row[i] = {boot.sorted[i][lo - 1], boot.sorted[i][hi - 1]};
      if (row[i].lower == row[i].upper) out.degenerate = true;
    }
    out.bounds.push_back(row);
  }
  return out;
}

Gamma1TestResult test_gamma1_positive(const FitResult& fit,
                                      const BootstrapResult* boot) {
  if (!fit.converged)
    throw std::runtime_error("test_gamma1_positive: fit did not converge");
  if (!fit.fisher.covariance)
    throw std::runtime_error("singular information");
  const double v = (*fit.fisher.covariance)[1][1];
  if (!(v > 0.0))
    throw std::runtime_error("test_gamma1_positive: non-positive variance for gamma1");

  Gamma1TestResult out;
  out.t_pvalue = 1.0 - normal::cdf(fit.params_hat.gamma1 / std::sqrt(v));
  if (boot != nullptr) {
    const auto& g1 = boot->sorted[1];
    if (g1.empty())
      throw std::invalid_argument("test_gamma1_positive: empty bootstrap list");
    const std::size_t nonpos = static_cast<std::size_t>(
        std::upper_bound(g1.begin(), g1.end(), 0.0) - g1.begin());
    out.boot_pvalue = static_cast<double>(nonpos) / g1.size();
  }
  return out;
}

}  // namespace stepstress
