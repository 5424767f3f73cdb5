#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "stepstress/model.hpp"
#include "stepstress/normal.hpp"
#include "testdata.hpp"

using namespace stepstress;

namespace {

ModelParams demo_params() {
  return ModelParams(testdata::kTrueGamma0, testdata::kTrueGamma1,
                     testdata::kTrueSigma);
}

// Random-but-reproducible configurations for the property suites.
struct RandomConfig {
  ModelParams params;
  StressPlan plan;
};

RandomConfig random_config(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> m_dist(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int m = m_dist(gen);
  std::vector<double> levels, taus;
  double x = 10.0 + 30.0 * u(gen);
  for (int i = 0; i < m; ++i) {
    levels.push_back(x);
    x -= 1.0 + 10.0 * u(gen);
  }
  double tau = 20.0 + 60.0 * u(gen);
  for (int i = 0; i + 1 < m; ++i) {
    taus.push_back(tau);
    tau += 1.0 + 20.0 * u(gen);
  }
  ModelParams p(4.0 * u(gen) - 1.0, 0.02 + 0.2 * u(gen), 0.03 + 0.4 * u(gen));
  return {p, StressPlan(levels, taus)};
}

}  // namespace

TEST_CASE("plan validation") {
  CHECK_THROWS_AS(StressPlan({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(StressPlan({1.0, 2.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(StressPlan({1.0, 2.0}, {5.0, 4.0}), std::invalid_argument);
  CHECK_THROWS_AS(StressPlan({1.0, 1.0}, {5.0}), std::invalid_argument);
  CHECK_THROWS_AS(StressPlan({1.0, 2.0}, {-1.0}), std::invalid_argument);
  CHECK_NOTHROW(StressPlan({2.0, 1.0}, {5.0}));  // decreasing levels are fine
  CHECK_THROWS_AS(ModelParams(0, 0, 0.0), std::invalid_argument);
}

TEST_CASE("mu_of_level") {
  CHECK(mu_of_level(ModelParams(0.76, 0.107, 1.0), 0.0) == doctest::Approx(0.76));
  CHECK(mu_of_level(ModelParams(0.76, 0.107, 1.0), arrhenius_x(50.0)) ==
        doctest::Approx(4.602).epsilon(0.002));
  CHECK(mu_of_level(ModelParams(0.71, 0.108, 1.0), arrhenius_x(50.0)) ==
        doctest::Approx(4.588).epsilon(0.002));
}

TEST_CASE("arrhenius and inverse power transforms") {
  CHECK(arrhenius_x(50.0) == doctest::Approx(35.91).epsilon(3e-4));
  CHECK(arrhenius_x(150.0) == doctest::Approx(27.42).epsilon(4e-4));
  CHECK(arrhenius_x(300.0) == doctest::Approx(20.25).epsilon(5e-4));
  CHECK_THROWS_AS(arrhenius_x(-274.0), std::domain_error);
  CHECK(inverse_power_x(1.0) == doctest::Approx(0.0));
  CHECK(inverse_power_x(std::exp(1.0)) == doctest::Approx(1.0));
  CHECK(inverse_power_x(10.0) == doctest::Approx(2.302585).epsilon(1e-6));
  CHECK_THROWS_AS(inverse_power_x(0.0), std::domain_error);
}

TEST_CASE("shift times") {
  ModelParams p = demo_params();
  SUBCASE("single step") {
    StressPlan one({1.0}, {});
    auto st = shift_times(p, one);
    REQUIRE(st.s.size() == 1);
    CHECK(st.s[0] == 0.0);
  }
  SUBCASE("demo value") {
    auto st = shift_times(p, testdata::demo_plan());
    CHECK(st.s[0] == 0.0);
    CHECK(st.s[1] == doctest::Approx(38.3).epsilon(0.005));
  }
  SUBCASE("flat link collapses to tau") {
    ModelParams flat(0.9, 0.0, 0.1);
    StressPlan plan = testdata::demo_plan();
    auto st = shift_times(flat, plan);
    CHECK(st.s[1] == doctest::Approx(95.0).epsilon(1e-14));
    CHECK(st.s[2] == doctest::Approx(97.5).epsilon(1e-14));
  }
}

TEST_CASE("shift time recursion equals closed form (property)") {
  std::mt19937_64 gen(2024);
  for (int rep = 0; rep < 300; ++rep) {
    auto cfg = random_config(gen);
    auto a = shift_times(cfg.params, cfg.plan);
    auto b = shift_times_closed_form(cfg.params, cfg.plan);
    REQUIRE(a.s.size() == b.s.size());
    for (std::size_t i = 0; i < a.s.size(); ++i) {
      CHECK(a.s[i] == doctest::Approx(b.s[i]).epsilon(1e-12));
      CHECK(a.s[i] >= 0.0);
    }
  }
}

TEST_CASE("cdf basics") {
  ModelParams p = demo_params();
  StressPlan plan = testdata::demo_plan();
  SUBCASE("single step is plain lognormal") {
    StressPlan one({plan.levels[0]}, {});
    const double mu = mu_of_level(p, plan.levels[0]);
    for (double t : {10.0, 50.0, 90.0, 99.0}) {
      CHECK(cdf(p, one, t) ==
            doctest::Approx(normal::cdf((std::log(t) - mu) / p.sigma))
                .epsilon(1e-14));
    }
  }
  SUBCASE("near the 20% design point") {
    // evaluated on the unrounded design plan, 95.57 sits just below tau_1
    StressPlan designed(plan.levels, design_taus(p, plan.levels, {0.2, 0.6}));
    CHECK(cdf(p, designed, 95.57) == doctest::Approx(0.20).epsilon(0.02));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(cdf(p, plan, 0.0), std::domain_error);
    CHECK_THROWS_AS(cdf(p, plan, -5.0), std::domain_error);
  }
  SUBCASE("limits and monotonicity") {
    CHECK(cdf(p, plan, 1e-6) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(cdf(p, plan, 1e6) == doctest::Approx(1.0).epsilon(1e-12));
    double prev = 0.0;
    for (double t = 80.0; t <= 110.0; t += 0.1) {
      const double v = cdf(p, plan, t);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("cdf continuity at knots (property)") {
  std::mt19937_64 gen(7);
  for (int rep = 0; rep < 200; ++rep) {
    auto cfg = random_config(gen);
    for (double tau : cfg.plan.change_times) {
      const double left = cdf(cfg.params, cfg.plan, tau);
      const double right =
          cdf(cfg.params, cfg.plan, std::nextafter(tau, 2.0 * tau));
      CHECK(std::fabs(left - right) <= 1e-12);
    }
  }
}

TEST_CASE("gamma1 = 0 collapses to one lognormal") {
  ModelParams p(0.9, 0.0, 0.12);
  StressPlan plan = testdata::demo_plan();
  StressPlan one({plan.levels[0]}, {});
  for (double t = 0.5; t < 40.0; t += 0.7) {
    CHECK(cdf(p, plan, t) == doctest::Approx(cdf(p, one, t)).epsilon(1e-13));
  }
}

TEST_CASE("pdf") {
  ModelParams p = demo_params();
  StressPlan plan = testdata::demo_plan();
  SUBCASE("single step mode height") {
    StressPlan one({plan.levels[0]}, {});
    const double mu = mu_of_level(p, plan.levels[0]);
    const double t = std::exp(mu);
    CHECK(pdf(p, one, t) ==
          doctest::Approx(1.0 / (p.sigma * t * std::sqrt(2.0 * M_PI)))
              .epsilon(1e-12));
  }
  SUBCASE("left tail vanishes") {
    CHECK(pdf(p, plan, 1e-8) == doctest::Approx(0.0).scale(1.0).epsilon(1e-300));
  }
  SUBCASE("knot returns the right piece") {
    const double tau = plan.change_times[0];
    const double right = pdf(p, plan, std::nextafter(tau, tau + 1.0));
    CHECK(pdf(p, plan, tau) == doctest::Approx(right).epsilon(1e-9));
  }
  SUBCASE("domain") { CHECK_THROWS_AS(pdf(p, plan, 0.0), std::domain_error); }
}

TEST_CASE("pdf is the derivative of cdf (property)") {
  std::mt19937_64 gen(99);
  for (int rep = 0; rep < 100; ++rep) {
    auto cfg = random_config(gen);
    // probe quantiles well inside pieces, away from knots
    for (double prob : {0.1, 0.35, 0.65, 0.9}) {
      const double t = quantile(cfg.params, cfg.plan, prob);
      bool near_knot = false;
      for (double tau : cfg.plan.change_times)
        if (std::fabs(t - tau) < 1e-3 * tau) near_knot = true;
      if (near_knot) continue;
      const double h = 1e-6 * t;
      const double fd =
          (cdf(cfg.params, cfg.plan, t + h) - cdf(cfg.params, cfg.plan, t - h)) /
          (2.0 * h);
      CHECK(pdf(cfg.params, cfg.plan, t) == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("quantile") {
  ModelParams p = demo_params();
  StressPlan plan = testdata::demo_plan();
  SUBCASE("round trip") {
    for (double prob : {0.01, 0.2, 0.5, 0.95}) {
      CHECK(cdf(p, plan, quantile(p, plan, prob)) ==
            doctest::Approx(prob).epsilon(1e-9));
    }
  }
  SUBCASE("design point at p = 0.6") {
    CHECK(quantile(p, plan, 0.6) == doctest::Approx(97.4).epsilon(0.002));
  }
  SUBCASE("single step median") {
    StressPlan one({plan.levels[0]}, {});
    CHECK(quantile(p, one, 0.5) ==
          doctest::Approx(std::exp(mu_of_level(p, plan.levels[0])))
              .epsilon(1e-12));
  }
  SUBCASE("domain") {
    CHECK_THROWS_AS(quantile(p, plan, 0.0), std::domain_error);
    CHECK_THROWS_AS(quantile(p, plan, 1.0), std::domain_error);
  }
}

TEST_CASE("quantile round trip (property)") {
  std::mt19937_64 gen(4242);
  for (int rep = 0; rep < 100; ++rep) {
    auto cfg = random_config(gen);
    for (double prob = 0.02; prob < 1.0; prob += 0.06) {
      const double t = quantile(cfg.params, cfg.plan, prob);
      CHECK(cdf(cfg.params, cfg.plan, t) == doctest::Approx(prob).epsilon(1e-9));
    }
  }
}

TEST_CASE("design_taus") {
  ModelParams p = demo_params();
  std::vector<double> levels{arrhenius_x(50.0), arrhenius_x(150.0),
                             arrhenius_x(300.0)};
  SUBCASE("single level gives empty list") {
    CHECK(design_taus(p, {levels[0]}, {}).empty());
  }
  SUBCASE("hits the cumulative targets") {
    auto taus = design_taus(p, levels, {0.2, 0.6});
    REQUIRE(taus.size() == 2);
    StressPlan plan(levels, taus);
    CHECK(cdf(p, plan, taus[0]) == doctest::Approx(0.2).epsilon(1e-9));
    CHECK(cdf(p, plan, taus[1]) == doctest::Approx(0.6).epsilon(1e-9));
    CHECK(taus[0] == doctest::Approx(95.62).epsilon(0.001));
  }
  SUBCASE("two-level variant") {
    ModelParams q(0.71, 0.108, 0.2);
    auto taus = design_taus(q, {arrhenius_x(50.0), arrhenius_x(150.0)}, {0.2});
    REQUIRE(taus.size() == 1);
    CHECK(taus[0] == doctest::Approx(83.1).epsilon(0.3 / 83.1));
  }
  SUBCASE("non-increasing targets rejected") {
    CHECK_THROWS_AS(design_taus(p, levels, {0.6, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(design_taus(p, levels, {0.2, 0.2}), std::invalid_argument);
  }
}

TEST_CASE("calibrate") {
  std::vector<std::pair<double, double>> pairs{
      {arrhenius_x(50.0), 100.0}, {arrhenius_x(150.0), 40.0},
      {arrhenius_x(300.0), 20.0}};
  SUBCASE("sigma from the first-level spread") {
    CHECK(calibrate(pairs, 5.0).sigma == doctest::Approx(0.05).epsilon(0.01));
    CHECK(calibrate(pairs, 20.0).sigma == doctest::Approx(0.198).epsilon(0.01));
  }
  SUBCASE("two pairs interpolate exactly") {
    std::vector<std::pair<double, double>> two{{30.0, 80.0}, {20.0, 25.0}};
    ModelParams p = calibrate(two, 8.0);
    const double s2 = p.sigma * p.sigma;
    CHECK(p.gamma0 + p.gamma1 * 30.0 + s2 / 2.0 ==
          doctest::Approx(std::log(80.0)).epsilon(1e-12));
    CHECK(p.gamma0 + p.gamma1 * 20.0 + s2 / 2.0 ==
          doctest::Approx(std::log(25.0)).epsilon(1e-12));
  }
  SUBCASE("degenerate input rejected") {
    std::vector<std::pair<double, double>> one{{30.0, 80.0}};
    CHECK_THROWS_AS(calibrate(one, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(calibrate(pairs, -1.0), std::invalid_argument);
  }
}
