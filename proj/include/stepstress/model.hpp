#pragma once

#include <cstddef>
#include <utility>
#include <vector>

// Cumulative-exposure lognormal step-stress lifetime model: the global CDF
// G(t) is pieced together from lognormal CDFs whose location mu_i follows the
// linear link mu_i = gamma0 + gamma1 * x_i, with each piece shifted by an
// equivalent prior-exposure time s_{i-1} so that G stays continuous.

namespace stepstress {

// Stress levels x_1..x_m (link-scale covariates) and change times
// tau_1..tau_{m-1}. Levels need only be distinct: the Arrhenius transform
// 1/(kV) decreases in temperature, so no monotonicity is imposed here.
struct StressPlan {
  std::vector<double> levels;
  std::vector<double> change_times;

  StressPlan(std::vector<double> levels_, std::vector<double> change_times_);

  std::size_t num_steps() const { return levels.size(); }
  // tau_0 = 0 convention; tau_i for i = 1..m-1.
  double tau(std::size_t i) const { return i == 0 ? 0.0 : change_times[i - 1]; }
};

struct ModelParams {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double sigma = 1.0;

  ModelParams() = default;
  ModelParams(double g0, double g1, double sig);
};

// s_0..s_{m-1}, s_0 = 0.
struct ShiftTimes {
  std::vector<double> s;
};

double mu_of_level(const ModelParams& params, double x);

// Recursion s_{i-1} = (tau_{i-1} + s_{i-2} - tau_{i-2}) * exp(mu_i - mu_{i-1}).
ShiftTimes shift_times(const ModelParams& params, const StressPlan& plan);

// Closed-form sum s_{i-1} = sum_{h=2..i} (tau_{h-1}-tau_{h-2}) exp(mu_i - mu_{h-1}).
// Kept as the independent route for the recursion cross-check.
ShiftTimes shift_times_closed_form(const ModelParams& params,
                                   const StressPlan& plan);

double cdf(const ModelParams& params, const StressPlan& plan, double t);

// Right-piece value at a knot tau_i (pieces are half-open (tau_{i-1}, tau_i]
// for G; density at knots is a convention and this one is test-pinned).
double pdf(const ModelParams& params, const StressPlan& plan, double t);

double quantile(const ModelParams& params, const StressPlan& plan, double p);

// Arrhenius covariate x = 1/(k*V), V in Kelvin, k = 8.6173e-5 eV/K.
double arrhenius_x(double celsius);

// Inverse power law covariate x = log(v).
double inverse_power_x(double v);

inline constexpr double kBoltzmannEv = 8.6173e-5;
inline constexpr double kKelvinOffset = 273.15;

// Place tau_1..tau_{m-1} so that cdf(tau_j) hits the j-th cumulative target.
// Sequential inversion: tau_j depends on the earlier taus through the shifts.
std::vector<double> design_taus(const ModelParams& params,
                                const std::vector<double>& levels,
                                const std::vector<double>& target_cum_probs);

// (gamma0, gamma1, sigma) from (x, mean lifetime) pairs and the lifetime sd at
// the first level: sigma^2 = log(1+(sd/mean_1)^2), then OLS of
// log(mean_i) - sigma^2/2 on x_i.
ModelParams calibrate(const std::vector<std::pair<double, double>>& pairs,
                      double sd_first);

}  // namespace stepstress
