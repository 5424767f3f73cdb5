#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stepstress/model.hpp"
#include "stepstress/sample.hpp"
#include "stepstress/schemes.hpp"

namespace stepstress {

// Reproducible counter-based stream: identical (seed, stream_id) pairs give
// identical draws; distinct stream ids are independent streams, so one
// stream per replication keeps parallel runs schedule-independent.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  double uniform();  // open (0,1)

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Progressively Type-II censored uniform order statistics U_{1:r}<...<U_{r:r}
// via the Balakrishnan-Sandhu transformation:
//   V_i = W_i^{1/(i + R_r + ... + R_{r-i+1})},  U_{i:r} = 1 - prod_{j=r-i+1..r} V_j.
std::vector<double> progressive_uniform_order_stats(const CensoringScheme& scheme,
                                                    RngStream& rng);

// Inverse-CDF transform of ascending uniforms into step-stress lifetimes,
// partitioned into steps by the G(tau_i) thresholds (ties go to the lower
// step). Elementwise identical to model::quantile.
std::vector<std::vector<double>> uniforms_to_lifetimes(
    const std::vector<double>& uniforms, const ModelParams& params,
    const StressPlan& plan);

StepStressSample simulate_dataset(const ModelParams& params,
                                  const StressPlan& plan,
                                  const CensoringScheme& scheme,
                                  RngStream& rng);

}  // namespace stepstress
