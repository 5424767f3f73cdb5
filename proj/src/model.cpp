#include "stepstress/model.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

#include "stepstress/normal.hpp"

namespace stepstress {

StressPlan::StressPlan(std::vector<double> levels_,
                       std::vector<double> change_times_)
    : levels(std::move(levels_)), change_times(std::move(change_times_)) {
  if (levels.empty()) throw std::invalid_argument("plan: need at least one stress level");
  if (change_times.size() + 1 != levels.size())
    throw std::invalid_argument("plan: need exactly m-1 change times for m levels");
  double prev = 0.0;
  for (double t : change_times) {
    if (!(t > prev))
      throw std::invalid_argument("plan: change times must be positive and strictly increasing");
    prev = t;
  }
  for (std::size_t i = 0; i < levels.size(); ++i)
    for (std::size_t j = i + 1; j < levels.size(); ++j)
      if (std::fabs(levels[i] - levels[j]) <= 1e-12)
        throw std::invalid_argument("plan: stress levels must be distinct");
}

ModelParams::ModelParams(double g0, double g1, double sig)
    : gamma0(g0), gamma1(g1), sigma(sig) {
  if (!(sigma > 0.0)) throw std::invalid_argument("params: sigma must be > 0");
}

double mu_of_level(const ModelParams& params, double x) {
  return params.gamma0 + params.gamma1 * x;
}

ShiftTimes shift_times(const ModelParams& params, const StressPlan& plan) {
  const std::size_t m = plan.num_steps();
  ShiftTimes out;
  out.s.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double dmu = mu_of_level(params, plan.levels[i]) -
                       mu_of_level(params, plan.levels[i - 1]);
    out.s[i] = (plan.tau(i) + out.s[i - 1] - plan.tau(i - 1)) * std::exp(dmu);
    if (!std::isfinite(out.s[i]))
      throw std::overflow_error("numeric overflow in shift times");
  }
  return out;
}

ShiftTimes shift_times_closed_form(const ModelParams& params,
                                   const StressPlan& plan) {
  const std::size_t m = plan.num_steps();
  ShiftTimes out;
  out.s.assign(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) {
    const double mu_i = mu_of_level(params, plan.levels[i]);
    double sum = 0.0;
    for (std::size_t h = 1; h <= i; ++h) {
      const double dtau = plan.tau(h) - plan.tau(h - 1);
      sum += dtau * std::exp(mu_i - mu_of_level(params, plan.levels[h - 1]));
    }
    out.s[i] = sum;
    if (!std::isfinite(out.s[i]))
      throw std::overflow_error("numeric overflow in shift times");
  }
  return out;
}

namespace {

// Piece index i with tau_{i-1} < t <= tau_i (last step unbounded above).
std::size_t piece_of(const StressPlan& plan, double t) {
  std::size_t i = 0;
  while (i + 1 < plan.num_steps() && t > plan.change_times[i]) ++i;
  return i;
}

}  // namespace

double cdf(const ModelParams& params, const StressPlan& plan, double t) {
  if (!(t > 0.0)) throw std::domain_error("cdf: t must be > 0");
  const ShiftTimes st = shift_times(params, plan);
  const std::size_t i = piece_of(plan, t);
  const double w = t + st.s[i] - plan.tau(i);
  const double mu = mu_of_level(params, plan.levels[i]);
  return normal::cdf((std::log(w) - mu) / params.sigma);
}

double pdf(const ModelParams& params, const StressPlan& plan, double t) {
  if (!(t > 0.0)) throw std::domain_error("pdf: t must be > 0");
  const ShiftTimes st = shift_times(params, plan);
  // Right-piece convention at knots: t == tau_i belongs to piece i here.
  std::size_t i = 0;
  while (i + 1 < plan.num_steps() && t >= plan.change_times[i]) ++i;
  const double w = t + st.s[i] - plan.tau(i);
  const double mu = mu_of_level(params, plan.levels[i]);
  const double z = (std::log(w) - mu) / params.sigma;
  return normal::pdf(z) / (params.sigma * w);
}

double quantile(const ModelParams& params, const StressPlan& plan, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile: p must lie in (0,1)");
  const ShiftTimes st = shift_times(params, plan);
  const std::size_t m = plan.num_steps();
  std::size_t i = 0;
  for (; i + 1 < m; ++i) {
    const double tau_i = plan.change_times[i];
    const double w = tau_i + st.s[i] - plan.tau(i);
    const double mu = mu_of_level(params, plan.levels[i]);
    if (p <= normal::cdf((std::log(w) - mu) / params.sigma)) break;
  }
  const double mu = mu_of_level(params, plan.levels[i]);
  return plan.tau(i) - st.s[i] +
         std::exp(mu + params.sigma * normal::quantile(p));
}

double arrhenius_x(double celsius) {
  const double kelvin = celsius + kKelvinOffset;
  if (!(kelvin > 0.0)) throw std::domain_error("arrhenius_x: temperature below absolute zero");
  return 1.0 / (kBoltzmannEv * kelvin);
}

double inverse_power_x(double v) {
  if (!(v > 0.0)) throw std::domain_error("inverse_power_x: stress must be > 0");
  return std::log(v);
}

std::vector<double> design_taus(const ModelParams& params,
                                const std::vector<double>& levels,
                                const std::vector<double>& target_cum_probs) {
  if (target_cum_probs.size() + 1 != levels.size())
    throw std::invalid_argument("design_taus: need m-1 cumulative targets for m levels");
  double prev = 0.0;
  for (double p : target_cum_probs) {
    if (!(p > prev && p < 1.0))
      throw std::invalid_argument("design_taus: targets must be strictly increasing in (0,1)");
    prev = p;
  }
  std::vector<double> taus;
  taus.reserve(target_cum_probs.size());
  for (std::size_t j = 0; j < target_cum_probs.size(); ++j) {
    // Plan with the taus fixed so far plus a dummy far-out knot for the rest;
    // tau_j lives in piece j, whose shift depends only on earlier taus.
    std::vector<double> partial_levels(levels.begin(), levels.begin() + j + 1);
    StressPlan partial(partial_levels,
                       std::vector<double>(taus.begin(), taus.end()));
    const ShiftTimes st = shift_times(params, partial);
    const double mu = mu_of_level(params, levels[j]);
    const double tau_j =
        partial.tau(j) - st.s[j] +
        std::exp(mu + params.sigma * normal::quantile(target_cum_probs[j]));
    if (!taus.empty() && !(tau_j > taus.back()))
      throw std::invalid_argument("design_taus: targets produce non-increasing change times");
    taus.push_back(tau_j);
  }
  return taus;
}

ModelParams calibrate(const std::vector<std::pair<double, double>>& pairs,
                      double sd_first) {
  if (pairs.size() < 2)
    throw std::invalid_argument("calibrate: need at least two (level, mean) pairs");
  if (!(sd_first > 0.0)) throw std::invalid_argument("calibrate: sd must be > 0");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs[i].second > 0.0))
      throw std::invalid_argument("calibrate: mean lifetimes must be > 0");
    for (std::size_t j = i + 1; j < pairs.size(); ++j)
      if (std::fabs(pairs[i].first - pairs[j].first) <= 1e-12)
        throw std::invalid_argument("calibrate: need at least two distinct levels");
  }
  const double cv = sd_first / pairs.front().second;
  const double sigma2 = std::log1p(cv * cv);
  // OLS of (log mean_i - sigma^2/2) on x_i.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(pairs.size());
  for (const auto& [x, mean] : pairs) {
    const double y = std::log(mean) - 0.5 * sigma2;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double gamma1 = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double gamma0 = (sy - gamma1 * sx) / n;
  return ModelParams(gamma0, gamma1, std::sqrt(sigma2));
}

}  // namespace stepstress
