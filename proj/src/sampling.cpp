#include "stepstress/sampling.hpp"

#include <cmath>
#include <stdexcept>

#include "stepstress/normal.hpp"

namespace stepstress {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      engine_(splitmix64(seed ^ splitmix64(stream_id ^ 0xa02bdbf7bb3c0a7ULL))) {}

double RngStream::uniform() {
  // Strictly inside (0,1) so the inverse normal CDF stays finite.
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u;
  do {
    u = dist(engine_);
  } while (u <= 0.0 || u >= 1.0);
  return u;
}

std::vector<double> progressive_uniform_order_stats(const CensoringScheme& scheme,
                                                    RngStream& rng) {
  const std::size_t r = scheme.r();
  std::vector<double> v(r);
  long long tail = 0;
  for (std::size_t i = 1; i <= r; ++i) {
    tail += scheme.removals[r - i];  // R_r + R_{r-1} + ... + R_{r-i+1}
    const double w = rng.uniform();
    v[i - 1] = std::pow(w, 1.0 / (static_cast<double>(i) + tail));
  }
  std::vector<double> u(r);
  double prod = 1.0;
  for (std::size_t i = 1; i <= r; ++i) {
    prod *= v[r - i];  // V_r * V_{r-1} * ... * V_{r-i+1}
    u[i - 1] = 1.0 - prod;
  }
  return u;
}

std::vector<std::vector<double>> uniforms_to_lifetimes(
    const std::vector<double>& uniforms, const ModelParams& params,
    const StressPlan& plan) {
  const std::size_t m = plan.num_steps();
  const ShiftTimes st = shift_times(params, plan);
  // Cumulative failure probabilities at the change times.
  std::vector<double> g_tau(m - 1);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double w = plan.change_times[i] + st.s[i] - plan.tau(i);
    const double mu = mu_of_level(params, plan.levels[i]);
    g_tau[i] = normal::cdf((std::log(w) - mu) / params.sigma);
  }
  std::vector<std::vector<double>> times(m);
  double prev = 0.0;
  for (double u : uniforms) {
    if (!(u > 0.0 && u < 1.0))
      throw std::domain_error("uniforms_to_lifetimes: u outside (0,1)");
    if (!(u >= prev))
      throw std::invalid_argument("uniforms_to_lifetimes: uniforms must ascend");
    prev = u;
    std::size_t i = 0;
    while (i + 1 < m && u > g_tau[i]) ++i;  // tie u == G(tau_i): lower step
    const double mu = mu_of_level(params, plan.levels[i]);
    const double t =
        plan.tau(i) - st.s[i] + std::exp(mu + params.sigma * normal::quantile(u));
    times[i].push_back(t);
  }
  return times;
}

StepStressSample simulate_dataset(const ModelParams& params,
                                  const StressPlan& plan,
                                  const CensoringScheme& scheme,
                                  RngStream& rng) {
  const std::vector<double> u = progressive_uniform_order_stats(scheme, rng);
  return StepStressSample(plan, scheme, uniforms_to_lifetimes(u, params, plan));
}

}  // namespace stepstress
