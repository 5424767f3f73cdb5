#include "stepstress/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace stepstress {

namespace {

constexpr double kSigmaFloor = 1e-3;

double loglik_or_ninf(const StepStressSample& sample, const ModelParams& p) {
  try {
    const double ll = log_likelihood(p, sample);
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
  } catch (const std::exception&) {
    return -std::numeric_limits<double>::infinity();
  }
}

// Gradient/Hessian in the internal coordinates (gamma0, gamma1, eta=log sigma).
struct Internal {
  Vec3 grad;
  Mat3 hess;
};

Internal internal_derivatives(const StepStressSample& sample,
                              const ModelParams& p) {
  const Vec3 g = gradient(p, sample);
  const Mat3 H = hessian(p, sample);
  const double s = p.sigma;
  Internal out;
  out.grad = {g[0], g[1], s * g[2]};
  out.hess = H;
  out.hess[0][2] = out.hess[2][0] = s * H[0][2];
  out.hess[1][2] = out.hess[2][1] = s * H[1][2];
  out.hess[2][2] = s * s * H[2][2] + s * g[2];
  return out;
}

// Solve (-H + lambda I) d = g with lambda escalated until the system is
// positive definite; keeps the step an ascent direction near saddles.
Vec3 damped_newton_step(const Mat3& H, const Vec3& g) {
  double lambda = 0.0;
  for (int attempt = 0; attempt < 60; ++attempt) {
    Mat3 A;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) A[i][j] = -H[i][j] + (i == j ? lambda : 0.0);
    const double d1 = A[0][0];
    const double d2 = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    const double d3 = A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1]) -
                      A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0]) +
                      A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]);
    if (d1 > 0.0 && d2 > 0.0 && d3 > 0.0 && std::isfinite(d3)) {
      try {
        const Mat3 inv = invert3(A);
        Vec3 d{};
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) d[i] += inv[i][j] * g[j];
        if (std::isfinite(d[0]) && std::isfinite(d[1]) && std::isfinite(d[2]))
          return d;
      } catch (const std::runtime_error&) {
      }
    }
    lambda = lambda == 0.0 ? 1e-8 : lambda * 10.0;
  }
  // Last resort: scaled gradient ascent.
  return {g[0], g[1], g[2]};
}

struct NewtonOutcome {
  ModelParams params;
  double loglik;
  int iterations = 0;
  bool converged = false;
  double grad_norm = std::numeric_limits<double>::infinity();
};

NewtonOutcome newton(const StepStressSample& sample, const ModelParams& start,
                     double tol, int max_iter) {
  NewtonOutcome out{start, loglik_or_ninf(sample, start)};
  if (!std::isfinite(out.loglik)) return out;
  ModelParams cur = start;
  for (int iter = 0; iter <= max_iter; ++iter) {
    out.iterations = iter;
    Vec3 g;
    try {
      g = gradient(cur, sample);
    } catch (const std::exception&) {
      return out;
    }
    out.grad_norm = std::max({std::fabs(g[0]), std::fabs(g[1]), std::fabs(g[2])});
    out.params = cur;
    if (out.grad_norm <= tol) {
      out.converged = true;
      return out;
    }
    if (iter == max_iter) break;
    const Internal in = internal_derivatives(sample, cur);
    const Vec3 d = damped_newton_step(in.hess, in.grad);
    double alpha = 1.0;
    bool accepted = false;
    for (int half = 0; half < 30; ++half, alpha *= 0.5) {
      const double eta = std::log(cur.sigma) + alpha * d[2];
      if (eta > 700.0 || eta < -700.0) continue;
      ModelParams cand(cur.gamma0 + alpha * d[0], cur.gamma1 + alpha * d[1],
                       std::exp(eta));
      const double ll = loglik_or_ninf(sample, cand);
      if (ll >= out.loglik - 1e-12 && std::isfinite(ll)) {
        // Accept equal-or-better; strictly worse steps keep halving.
        cur = cand;
        out.loglik = ll;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no productive step left; report as-is
  }
  return out;
}

// Deterministic restart list: profile-style starts over a gamma1 grid scaled
// by the level range. Given gamma1 the shifts are fixed, so (gamma0, sigma)
// have closed-form complete-data estimates from the shifted log-lifetimes.
std::vector<ModelParams> fallback_starts(const StepStressSample& sample) {
  const auto& levels = sample.plan.levels;
  const double dx = *std::max_element(levels.begin(), levels.end()) -
                    *std::min_element(levels.begin(), levels.end());
  std::vector<double> g1s{0.0};
  for (double c : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    g1s.push_back(c / dx);
    g1s.push_back(-c / dx);
  }
  std::vector<ModelParams> starts;
  for (double g1 : g1s) {
    try {
      ModelParams probe(0.0, g1, 1.0);
      const ShiftTimes st = shift_times(probe, sample.plan);
      double sy = 0.0, syy = 0.0;
      std::size_t cnt = 0;
      bool ok = true;
      for (std::size_t i = 0; i < sample.num_steps() && ok; ++i) {
        for (double t : sample.times[i]) {
          const double w = t + st.s[i] - sample.plan.tau(i);
          if (!(w > 0.0)) {
            ok = false;
            break;
          }
          const double resid = std::log(w) - g1 * levels[i];
          sy += resid;
          syy += resid * resid;
          ++cnt;
        }
      }
      if (!ok || cnt < 2) continue;
      const double g0 = sy / cnt;
      const double var = std::max(syy / cnt - g0 * g0, kSigmaFloor * kSigmaFloor);
      starts.emplace_back(g0, g1, std::sqrt(var));
    } catch (const std::exception&) {
    }
  }
  return starts;
}

}  // namespace

ModelParams default_init(const StepStressSample& sample) {
  const auto& levels = sample.plan.levels;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t steps_with_data = 0, total = 0;
  for (std::size_t i = 0; i < sample.num_steps(); ++i) {
    if (sample.times[i].empty()) continue;
    ++steps_with_data;
    double mean = 0.0;
    for (double t : sample.times[i]) mean += std::log(t);
    mean /= static_cast<double>(sample.times[i].size());
    sx += levels[i];
    sy += mean;
    sxx += levels[i] * levels[i];
    sxy += levels[i] * mean;
    total += sample.times[i].size();
  }
  double gamma1 = 0.0;
  if (steps_with_data >= 2) {
    const double k = static_cast<double>(steps_with_data);
    const double denom = k * sxx - sx * sx;
    if (denom != 0.0) gamma1 = (k * sxy - sx * sy) / denom;
  }
  const double k = static_cast<double>(steps_with_data);
  const double gamma0 = k > 0 ? (sy - gamma1 * sx) / k : 0.0;
  // Pooled within-step sd of log-lifetimes.
  double ss = 0.0;
  for (std::size_t i = 0; i < sample.num_steps(); ++i) {
    if (sample.times[i].empty()) continue;
    double mean = 0.0;
    for (double t : sample.times[i]) mean += std::log(t);
    mean /= static_cast<double>(sample.times[i].size());
    for (double t : sample.times[i]) {
      const double d = std::log(t) - mean;
      ss += d * d;
    }
  }
  const double sigma =
      std::max(std::sqrt(ss / std::max<std::size_t>(total, 1)), kSigmaFloor);
  return ModelParams(gamma0, gamma1, sigma);
}

FitResult fit(const StepStressSample& sample, const FitOptions& options) {
  if (sample.num_steps() < 2)
    throw std::runtime_error("singular information: single-level design");
  if (sample.r() < 3)
    throw std::invalid_argument("fit: need at least 3 observed failures");

  std::vector<ModelParams> starts;
  starts.push_back(options.init ? *options.init : default_init(sample));
  NewtonOutcome best = newton(sample, starts.front(), options.tol, options.max_iter);
  if (!best.converged) {
    for (const ModelParams& s : fallback_starts(sample)) {
      const NewtonOutcome o = newton(sample, s, options.tol, options.max_iter);
      if (o.converged || o.loglik > best.loglik) best = o;
      if (best.converged) break;
    }
  }

  FitResult result;
  result.params_hat = best.params;
  result.loglik_at_max = best.loglik;
  result.iterations = best.iterations;
  result.grad_norm = best.grad_norm;
  result.fisher = observed_fisher(best.params, sample);
  if (best.converged &&
      (!result.fisher.positive_definite || !result.fisher.covariance))
    throw std::runtime_error("singular information");
  result.converged = best.converged;
  return result;
}

}  // namespace stepstress
