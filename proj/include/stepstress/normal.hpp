#pragma once

// Standard normal kit: CDF, PDF, stable log survival, inverse CDF and the
// hazard ratio phi(z)/(1-Phi(z)). Everything here is branch-stable for the
// extreme z values that show up in censored-likelihood tails.

namespace stepstress::normal {

double pdf(double z);
double log_pdf(double z);
double cdf(double z);

// log(1 - Phi(z)). Accurate through z ~ 37 via erfc; beyond that an
// asymptotic expansion takes over so bootstrap tails never produce -inf.
double log_sf(double z);

// phi(z) / (1 - Phi(z)); finite and increasing for all finite z.
double hazard(double z);

// Phi^{-1}(p), p in (0,1). Wichura's AS241 double-precision rational fits.
double quantile(double p);

}  // namespace stepstress::normal
