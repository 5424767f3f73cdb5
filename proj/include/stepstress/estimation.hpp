#pragma once

#include <optional>

#include "stepstress/likelihood.hpp"
#include "stepstress/sample.hpp"

namespace stepstress {

struct FitOptions {
  std::optional<ModelParams> init;
  double tol = 1e-8;       // convergence: max-norm of the gradient
  int max_iter = 200;
};

struct FitResult {
  ModelParams params_hat;
  FisherMatrix fisher;      // in the original (gamma0, gamma1, sigma) coords
  double loglik_at_max = 0.0;
  int iterations = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

// Safeguarded Newton-Raphson on the log-likelihood, optimized internally in
// (gamma0, gamma1, log sigma) so sigma stays positive, with backtracking
// halving and diagonal damping when the information matrix is indefinite.
// Throws std::runtime_error("singular information") on non-identifiable
// designs (m = 1, or information singular at the optimum).
FitResult fit(const StepStressSample& sample, const FitOptions& options = {});

// The default starting point when options.init is absent: gamma1 from the
// slope of step means of log-lifetimes on x, gamma0 the mean residual, sigma
// the pooled within-step sd of log-lifetimes (floored at 1e-3).
ModelParams default_init(const StepStressSample& sample);

}  // namespace stepstress
