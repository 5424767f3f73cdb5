#pragma once

#include <array>
#include <optional>

#include "stepstress/model.hpp"
#include "stepstress/sample.hpp"

// Log-likelihood, analytic score and observed Fisher information for
// progressively Type-II censored step-stress data, plus the dedicated
// Type-II formulas as an independent route for the reduction check.
// All values exclude the theta-independent normalization constant log C.

namespace stepstress {

using Vec3 = std::array<double, 3>;          // ordering (gamma0, gamma1, sigma)
using Mat3 = std::array<std::array<double, 3>, 3>;

struct FisherMatrix {
  Mat3 observed{};                 // O = -Hessian of the log-likelihood
  bool positive_definite = false;
  std::optional<Mat3> covariance;  // V = O^{-1} when O is invertible
};

// General progressive path (Type-II and complete samples are special cases).
double log_likelihood(const ModelParams& params, const StepStressSample& sample);
Vec3 gradient(const ModelParams& params, const StepStressSample& sample);
Mat3 hessian(const ModelParams& params, const StepStressSample& sample);
FisherMatrix observed_fisher(const ModelParams& params,
                             const StepStressSample& sample);

// Dedicated Type-II formulas: censored mass (n-r) attached to the globally
// last observed failure. Requires an (effectively) Type-II scheme.
double type2_log_likelihood(const ModelParams& params,
                            const StepStressSample& sample);
Vec3 type2_gradient(const ModelParams& params, const StepStressSample& sample);
Mat3 type2_hessian(const ModelParams& params, const StepStressSample& sample);

Mat3 invert3(const Mat3& m);  // throws std::runtime_error if singular

}  // namespace stepstress
