#include "stepstress/sample.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace stepstress {

StepStressSample::StepStressSample(StressPlan plan_, CensoringScheme scheme_,
                                   std::vector<std::vector<double>> times_)
    : plan(std::move(plan_)), scheme(std::move(scheme_)), times(std::move(times_)) {
  if (times.size() != plan.num_steps())
    throw std::invalid_argument("sample: need one time list per step");
  std::size_t total = 0;
  double prev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double lo = plan.tau(i);
    const bool last = i + 1 == times.size();
    const double hi = last ? 0.0 : plan.change_times[i];
    for (double t : times[i]) {
      if (!(t > lo) || (!last && !(t <= hi)))
        throw std::invalid_argument("sample: time " + std::to_string(t) +
                                    " outside step " + std::to_string(i + 1) +
                                    " interval");
      if (!(t >= prev))
        throw std::invalid_argument("sample: times must be globally sorted");
      prev = t;
      ++total;
    }
  }
  if (total != scheme.r())
    throw std::invalid_argument("sample: total failures (" +
                                std::to_string(total) +
                                ") must equal scheme r (" +
                                std::to_string(scheme.r()) + ")");
}

std::vector<StepStressSample::Failure> StepStressSample::flattened() const {
  std::vector<Failure> out;
  out.reserve(r());
  std::size_t k = 0;
  for (std::size_t i = 0; i < times.size(); ++i)
    for (double t : times[i]) out.push_back({i, t, scheme.removals[k++]});
  return out;
}

}  // namespace stepstress
