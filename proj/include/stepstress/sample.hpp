#pragma once

#include <cstddef>
#include <vector>

#include "stepstress/model.hpp"
#include "stepstress/schemes.hpp"

namespace stepstress {

// Observed step-stress failure data: per-step ordered failure times t_{i,j}
// with tau_{i-1} < t_{i,j} <= tau_i (last step unbounded above). The removal
// applied at each failure is scheme.removals[k(i,j)] where the global order
// k(i,j) = n_1 + ... + n_{i-1} + j.
struct StepStressSample {
  StressPlan plan;
  CensoringScheme scheme;
  std::vector<std::vector<double>> times;  // one vector per step, may be empty

  StepStressSample(StressPlan plan_, CensoringScheme scheme_,
                   std::vector<std::vector<double>> times_);

  std::size_t num_steps() const { return plan.num_steps(); }
  std::size_t step_count(std::size_t i) const { return times[i].size(); }
  std::size_t r() const { return scheme.r(); }
  std::size_t n() const { return scheme.n; }

  // Flattened (step index, time, removal) triples in global failure order.
  struct Failure {
    std::size_t step;
    double time;
    int removed_after;
  };
  std::vector<Failure> flattened() const;
};

}  // namespace stepstress
