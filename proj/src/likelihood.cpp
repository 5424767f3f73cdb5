#include "stepstress/likelihood.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stepstress/normal.hpp"

namespace stepstress {

namespace {

// Per-observation quantities shared by the score and information formulas:
//   t' = log(t + s_{i-1} - tau_{i-1}),  z = (t' - mu_i)/sigma,
//   beta2 = d t'/d gamma1,  beta1 = d z/d gamma1,
//   beta5 = d beta2/d gamma1,  beta4 = d beta1/d gamma1.
struct Workspace {
  struct Obs {
    double w;  // t + s_{i-1} - tau_{i-1}
    double tprime;
    double z;
    double beta1, beta2, beta4, beta5;
    int removed;
  };
  std::vector<Obs> obs;
  double sigma;
  std::size_t r;

  Workspace(const ModelParams& params, const StepStressSample& sample) {
    if (!(params.sigma > 0.0))
      throw std::domain_error("likelihood: sigma must be > 0");
    sigma = params.sigma;
    r = sample.r();
    const StressPlan& plan = sample.plan;
    const std::size_t m = plan.num_steps();
    const ShiftTimes st = shift_times(params, plan);

    // beta3_i = d s_{i-1}/d gamma1 and its own gamma1-derivative.
    std::vector<double> beta3(m, 0.0), beta3_prime(m, 0.0);
    for (std::size_t i = 1; i < m; ++i) {
      for (std::size_t h = 1; h <= i; ++h) {
        const double dtau = plan.tau(h) - plan.tau(h - 1);
        const double dx = plan.levels[i] - plan.levels[h - 1];
        const double e = std::exp(params.gamma1 * dx);
        beta3[i] += dtau * dx * e;
        beta3_prime[i] += dtau * dx * dx * e;
      }
    }

    obs.reserve(r);
    std::size_t k = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const double mu = mu_of_level(params, plan.levels[i]);
      for (double t : sample.times[i]) {
        Obs o;
        o.w = t + st.s[i] - plan.tau(i);
        if (!(o.w > 0.0))
          throw std::runtime_error("likelihood: infeasible shifted time");
        o.tprime = std::log(o.w);
        o.z = (o.tprime - mu) / sigma;
        o.beta2 = beta3[i] / o.w;
        o.beta1 = (o.beta2 - plan.levels[i]) / sigma;
        o.beta5 = beta3_prime[i] / o.w - (beta3[i] * beta3[i]) / (o.w * o.w);
        o.beta4 = o.beta5 / sigma;
        o.removed = sample.scheme.removals[k++];
        obs.push_back(o);
      }
    }
  }
};

}  // namespace

double log_likelihood(const ModelParams& params, const StepStressSample& sample) {
  const Workspace ws(params, sample);
  double ll = -static_cast<double>(ws.r) * std::log(ws.sigma);
  for (const auto& o : ws.obs) {
    ll += -0.5 * o.z * o.z - o.tprime;
    if (o.removed > 0) ll += o.removed * normal::log_sf(o.z);
  }
  return ll;
}

Vec3 gradient(const ModelParams& params, const StepStressSample& sample) {
  const Workspace ws(params, sample);
  double g0 = 0.0, g1 = 0.0, gs = -static_cast<double>(ws.r);
  for (const auto& o : ws.obs) {
    g0 += o.z;
    g1 += -o.z * o.beta1 - o.beta2;
    gs += o.z * o.z;
    if (o.removed > 0) {
      const double h = normal::hazard(o.z);
      g0 += o.removed * h;
      g1 -= o.removed * h * o.beta1;
      gs += o.removed * o.z * h;
    }
  }
  return {g0 / ws.sigma, g1, gs / ws.sigma};
}

Mat3 hessian(const ModelParams& params, const StepStressSample& sample) {
  const Workspace ws(params, sample);
  const double sigma = ws.sigma;
  const double r = static_cast<double>(ws.r);
  double sum_z = 0, sum_z2 = 0, sum_b1 = 0, sum_zb1 = 0, sum_22 = 0;
  double c00 = 0, c11 = 0, c22 = 0, c01 = 0, c02 = 0, c12 = 0;
  for (const auto& o : ws.obs) {
    sum_z += o.z;
    sum_z2 += o.z * o.z;
    sum_b1 += o.beta1;
    sum_zb1 += o.z * o.beta1;
    sum_22 += o.beta1 * o.beta1 + o.z * o.beta4 + o.beta5;
    if (o.removed > 0) {
      const double R = o.removed;
      const double h = normal::hazard(o.z);
      const double zh = o.z - h;  // h'(z) = -h*(z-h) appears as h*(z-h) blocks
      c00 += R * h * zh;
      c11 += R * h * (o.beta4 - o.beta1 * o.beta1 * zh);
      c22 += R * o.z * h * (2.0 - o.z * zh);
      c01 += R * o.beta1 * h * zh;
      c02 += R * h * (1.0 - o.z * zh);
      c12 += R * o.beta1 * h * (1.0 - o.z * zh);
    }
  }
  const double s2 = sigma * sigma;
  Mat3 H{};
  H[0][0] = (-r + c00) / s2;
  H[1][1] = -sum_22 - c11;
  H[2][2] = -(-r + 3.0 * sum_z2 + c22) / s2;
  H[0][1] = H[1][0] = (sum_b1 - c01) / sigma;
  H[0][2] = H[2][0] = -(2.0 * sum_z + c02) / s2;
  H[1][2] = H[2][1] = (2.0 * sum_zb1 + c12) / sigma;
  return H;
}

namespace {

bool is_positive_definite(const Mat3& m) {
  const double d1 = m[0][0];
  const double d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double d3 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                    m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                    m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  return d1 > 0.0 && d2 > 0.0 && d3 > 0.0;
}

}  // namespace

Mat3 invert3(const Mat3& m) {
  Mat3 adj;
  adj[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  adj[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
  adj[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
  adj[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  adj[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
  adj[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
  adj[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  adj[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
  adj[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double det =
      m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
  if (det == 0.0 || !std::isfinite(det))
    throw std::runtime_error("singular information");
  Mat3 inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv[i][j] = adj[i][j] / det;
  return inv;
}

FisherMatrix observed_fisher(const ModelParams& params,
                             const StepStressSample& sample) {
  const Mat3 H = hessian(params, sample);
  FisherMatrix out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.observed[i][j] = -H[i][j];
  out.positive_definite = is_positive_definite(out.observed);
  try {
    out.covariance = invert3(out.observed);
  } catch (const std::runtime_error&) {
    out.covariance.reset();
  }
  return out;
}

namespace {

void require_type2(const StepStressSample& sample) {
  if (!sample.scheme.is_type2())
    throw std::invalid_argument("type2 likelihood: scheme is not Type-II");
}

}  // namespace

double type2_log_likelihood(const ModelParams& params,
                            const StepStressSample& sample) {
  require_type2(sample);
  const Workspace ws(params, sample);
  const double nr = static_cast<double>(sample.n() - sample.r());
  double ll = -static_cast<double>(ws.r) * std::log(ws.sigma);
  for (const auto& o : ws.obs) ll += -0.5 * o.z * o.z - o.tprime;
  if (nr > 0.0) ll += nr * normal::log_sf(ws.obs.back().z);
  return ll;
}

Vec3 type2_gradient(const ModelParams& params, const StepStressSample& sample) {
  require_type2(sample);
  const Workspace ws(params, sample);
  const double nr = static_cast<double>(sample.n() - sample.r());
  double g0 = 0.0, g1 = 0.0, gs = -static_cast<double>(ws.r);
  for (const auto& o : ws.obs) {
    g0 += o.z;
    g1 += -o.z * o.beta1 - o.beta2;
    gs += o.z * o.z;
  }
  if (nr > 0.0) {
    const auto& o = ws.obs.back();
    const double h = normal::hazard(o.z);
    g0 += nr * h;
    g1 -= nr * h * o.beta1;
    gs += nr * o.z * h;
  }
  return {g0 / ws.sigma, g1, gs / ws.sigma};
}

Mat3 type2_hessian(const ModelParams& params, const StepStressSample& sample) {
  require_type2(sample);
  const Workspace ws(params, sample);
  const double sigma = ws.sigma;
  const double r = static_cast<double>(ws.r);
  const double nr = static_cast<double>(sample.n() - sample.r());
  double sum_z = 0, sum_z2 = 0, sum_b1 = 0, sum_zb1 = 0, sum_22 = 0;
  for (const auto& o : ws.obs) {
    sum_z += o.z;
    sum_z2 += o.z * o.z;
    sum_b1 += o.beta1;
    sum_zb1 += o.z * o.beta1;
    sum_22 += o.beta1 * o.beta1 + o.z * o.beta4 + o.beta5;
  }
  double c00 = 0, c11 = 0, c22 = 0, c01 = 0, c02 = 0, c12 = 0;
  if (nr > 0.0) {
    const auto& o = ws.obs.back();
    const double h = normal::hazard(o.z);
    const double zh = o.z - h;
    c00 = nr * h * zh;
    c11 = nr * h * (o.beta4 - o.beta1 * o.beta1 * zh);
    c22 = nr * o.z * h * (2.0 - o.z * zh);
    c01 = nr * o.beta1 * h * zh;
    c02 = nr * h * (1.0 - o.z * zh);
    c12 = nr * o.beta1 * h * (1.0 - o.z * zh);
  }
  const double s2 = sigma * sigma;
  Mat3 H{};
  H[0][0] = (-r + c00) / s2;
  H[1][1] = -sum_22 - c11;
  H[2][2] = -(-r + 3.0 * sum_z2 + c22) / s2;
  H[0][1] = H[1][0] = (sum_b1 - c01) / sigma;
  H[0][2] = H[2][0] = -(2.0 * sum_z + c02) / s2;
  H[1][2] = H[2][1] = (2.0 * sum_zb1 + c12) / sigma;
  return H;
}

}  // namespace stepstress
