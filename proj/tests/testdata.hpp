#pragma once

// Shared fixture: the simulated 3-step demo dataset (n = 35, 20% censored,
// temperatures 50/150/300 C, changes at 95 and 97.5) used across the test
// suite, plus small helpers for building samples.

#include <string>
#include <vector>

#include "stepstress/model.hpp"
#include "stepstress/sample.hpp"
#include "stepstress/schemes.hpp"

namespace testdata {

inline const std::vector<double> kStep1{89.406, 92.317, 92.651,
                                        93.755, 94.483, 94.985};
inline const std::vector<double> kStep2{95.018, 95.218, 95.352, 95.441, 95.461,
                                        95.835, 95.854, 95.903, 96.321, 96.430,
                                        96.508, 96.568, 97.206, 97.463};
inline const std::vector<double> kStep3{97.509, 97.604, 97.971, 98.070,
                                        98.104, 98.202, 98.278, 98.507};

inline const double kTrueGamma0 = 0.76;
inline const double kTrueGamma1 = 0.107;
inline const double kTrueSigma = 0.05;

inline stepstress::StressPlan demo_plan() {
  return stepstress::StressPlan(
      {stepstress::arrhenius_x(50.0), stepstress::arrhenius_x(150.0),
       stepstress::arrhenius_x(300.0)},
      {95.0, 97.5});
}

inline stepstress::StepStressSample demo_sample(const std::string& scheme) {
  return stepstress::StepStressSample(demo_plan(),
                                      stepstress::parse_scheme(scheme, 35),
                                      {kStep1, kStep2, kStep3});
}

}  // namespace testdata
