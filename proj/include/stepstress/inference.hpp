#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stepstress/estimation.hpp"
#include "stepstress/sample.hpp"

namespace stepstress {

inline constexpr std::array<const char*, 3> kParamNames{"gamma0", "gamma1",
                                                        "sigma"};

struct Interval {
  double lower;
  double upper;
};

// Two-sided intervals for (gamma0, gamma1, sigma) at one or more confidence
// levels, tagged with the method that produced them.
struct IntervalSet {
  std::string method;                 // "approximate" | "percentile-bootstrap"
  std::vector<double> levels;         // e.g. {0.90, 0.95, 0.99}
  // bounds[l][p]: interval for parameter p at levels[l]
  std::vector<std::array<Interval, 3>> bounds;
  int bootstrap_B = 0;                // bootstrap only
  std::uint64_t seed = 0;             // bootstrap only
  bool degenerate = false;            // some interval collapsed to a point
};

struct BootstrapResult {
  std::array<std::vector<double>, 3> sorted;  // ascending, per parameter
  int requested_B = 0;
  int failed_refits = 0;
  std::uint64_t seed = 0;
};

struct Gamma1TestResult {
  double t_pvalue = 1.0;
  std::optional<double> boot_pvalue;
};

// theta_i +/- z_{1-alpha/2} * sqrt(V_ii) from the observed-information
// covariance. Throws if the fit did not converge or a variance is
// non-positive (message names the parameter).
IntervalSet approx_ci(const FitResult& fit, const std::vector<double>& levels);

// Parametric bootstrap: simulate B datasets from the fitted parameters under
// the original plan and scheme, refit each, and collect the estimates sorted
// ascending per parameter. Replications whose refit does not converge are
// dropped and counted; more than 20% drops is a hard error ("bootstrap
// unstable"). Deterministic in (seed, stream_base, B): replication b uses
// stream stream_base | (b + 1).
BootstrapResult bootstrap_sample(const FitResult& fit,
                                 const StepStressSample& sample, int B,
                                 std::uint64_t seed,
                                 std::uint64_t stream_base = 0);

// Order-statistic percentile intervals with 1-based indices ceil(B*alpha/2)
// and ceil(B*(1-alpha/2)). Requires at least ceil(2/alpha) retained
// replications per level.
IntervalSet percentile_ci(const BootstrapResult& boot,
                          const std::vector<double>& levels);

// One-sided H0: gamma1 <= 0 vs H1: gamma1 > 0.
//   t_pvalue   = 1 - Phi(gamma1_hat / sqrt(V_22))
//   boot_pvalue = fraction of bootstrap gamma1* <= 0 (when boot supplied)
Gamma1TestResult test_gamma1_positive(const FitResult& fit,
                                      const BootstrapResult* boot = nullptr);

}  // namespace stepstress
