#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "fowt/dpim.hpp"
#include "oracles.hpp"

using namespace fowt;

TEST_CASE("single-point ensemble reconstructs one Gaussian kernel") {
  ResponseEnsemble e{{2.0}, {1.0}, "single"};
  const auto est = estimate_pdf(e, {512, 6.0}, 0.25);
  CHECK(est.bandwidth == 0.25);
  double best = est.grid[0];
  double best_density = 0.0;
  for (std::size_t i = 0; i < est.grid.size(); ++i) {
    if (est.density[i] > best_density) {
      best_density = est.density[i];
      best = est.grid[i];
    }
  }
  CHECK_THAT(best, Catch::Matchers::WithinAbs(2.0, 0.01));
  CHECK_THAT(best_density, Catch::Matchers::WithinRel(1.0 / (0.25 * std::sqrt(kTwoPi)), 1e-3));
}

TEST_CASE("two symmetric points give symmetric density") {
  ResponseEnsemble e{{0.0, 1.0}, {0.5, 0.5}, "pair"};
  const auto est = estimate_pdf(e, {1024, 6.0}, 0.1);
  const auto density_at = [&](double y) {
    double best = 1e300;
    double val = 0.0;
    for (std::size_t i = 0; i < est.grid.size(); ++i) {
      if (std::abs(est.grid[i] - y) < best) {
        best = std::abs(est.grid[i] - y);
        val = est.density[i];
      }
    }
    return val;
  };
  CHECK_THAT(density_at(0.0), Catch::Matchers::WithinRel(density_at(1.0), 1e-6));
}

TEST_CASE("pdf estimates integrate to one") {
  std::mt19937_64 rng(5);
  std::vector<double> values(200);
  std::vector<double> probs(200);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = std::sin(static_cast<double>(i)) * 3.0 + uniform01(rng);
    probs[i] = 0.5 + uniform01(rng);
    sum += probs[i];
  }
  for (auto& p : probs) p /= sum;
  ResponseEnsemble e{values, probs, "mixed"};
  const auto est = estimate_pdf(e);
  CHECK(std::abs(est.trapezoid_integral() - 1.0) <= 1e-3);
  for (double d : est.density) CHECK(d >= 0.0);
}

TEST_CASE("bandwidth errors and the degenerate ensemble") {
  ResponseEnsemble e{{1.0, 1.0}, {0.5, 0.5}, "flat"};
  CHECK_THROWS_AS(estimate_pdf(e, {}, 0.0), std::domain_error);
  CHECK_THROWS_AS(estimate_pdf(e, {}, -1.0), std::domain_error);
  std::ostringstream warn;
  const auto est = estimate_pdf(e, {}, std::nullopt, &warn);
  CHECK(warn.str().find("near-delta") != std::string::npos);
  CHECK(est.bandwidth > 0.0);
  CHECK(std::abs(est.trapezoid_integral() - 1.0) <= 1e-3);
}

TEST_CASE("silverman bandwidth follows the weighted spread") {
  ResponseEnsemble e{{0.0, 2.0}, {0.5, 0.5}, "spread"};
  CHECK_THAT(silverman_bandwidth(e),
             Catch::Matchers::WithinRel(1.06 * 1.0 * std::pow(2.0, -0.2), 1e-12));
}

TEST_CASE("performance values and limit-state boundary") {
  const auto z0 = performance_values({1e-9, 3e-9}, {0.5, 0.5}, 0.0, 1.0);
  CHECK(z0.values == std::vector<double>{1.0, 1.0});

  const auto zb = performance_values({2e-9}, {1.0}, 5e8, 1e-9 * 5e8);
  CHECK_THAT(zb.values[0], Catch::Matchers::WithinAbs(1e-9 * 5e8 - 2e-9 * 5e8, 1e-15));

  // Hand arithmetic: rates (1e-9, 3e-9)/s over 20 years, B = 1.
  const double t20 = 20.0 * kSecondsPerYear;
  const auto z = performance_values({1e-9, 3e-9}, {0.5, 0.5}, t20, 1.0);
  CHECK_THAT(z.values[0], Catch::Matchers::WithinRel(1.0 - 0.631152, 1e-9));
  CHECK_THAT(z.values[1], Catch::Matchers::WithinRel(1.0 - 1.893456, 1e-9));
}

TEST_CASE("heaviside reliability sums the safe probabilities") {
  ResponseEnsemble all_safe{{0.5, 0.2, 0.9}, {0.3, 0.3, 0.4}, "safe"};
  CHECK(reliability(all_safe) == 1.0);

  ResponseEnsemble half{{1.0, -1.0, 2.0, -2.0}, {0.25, 0.25, 0.25, 0.25}, "half"};
  CHECK(reliability(half) == 0.5);

  ResponseEnsemble hand{{1.0, -1.0, 1.0, -1.0}, {0.1, 0.2, 0.3, 0.4}, "hand"};
  CHECK_THAT(reliability(hand), Catch::Matchers::WithinRel(0.4, 1e-15));

  // Z = 0 counts as failure.
  ResponseEnsemble boundary{{0.0, 1.0}, {0.6, 0.4}, "boundary"};
  CHECK_THAT(reliability(boundary), Catch::Matchers::WithinRel(0.4, 1e-15));
}

TEST_CASE("reliability curve is monotone and bounded") {
  const std::vector<double> times{5, 10, 15, 20, 25};
  const auto zero = reliability_curve(std::vector<double>(50, 0.0),
                                      std::vector<double>(50, 0.02), times);
  for (double r : zero.r) CHECK(r == 1.0);
  zero.validate();

  std::mt19937_64 rng(11);
  std::vector<double> rates(200);
  std::vector<double> probs(200, 1.0 / 200.0);
  for (auto& dr : rates) dr = 3e-9 * uniform01(rng);
  const auto curve = reliability_curve(rates, probs, times);
  curve.validate();
  for (std::size_t i = 1; i < curve.r.size(); ++i) CHECK(curve.r[i] <= curve.r[i - 1]);
  CHECK(curve.r[4] <= curve.r[3]);  // R(25) <= R(20)

  // Nondecreasing in the threshold.
  const auto z1 = performance_values(rates, probs, 20.0 * kSecondsPerYear, 1.0);
  const auto z2 = performance_values(rates, probs, 20.0 * kSecondsPerYear, 1.5);
  CHECK(reliability(z2) >= reliability(z1));

  CHECK_THROWS_AS(reliability_curve(rates, probs, {10.0, 5.0}), std::invalid_argument);
}

TEST_CASE("monte carlo reliability with binomial error") {
  const std::vector<double> all_safe(200, 1e-12);
  const auto safe = mcs_reliability(all_safe, 1e8, 1.0);
  CHECK(safe.r_hat == 1.0);
  CHECK(safe.standard_error == 0.0);

  // Synthetic law with known failure probability 0.2.
  std::mt19937_64 rng(21);
  std::vector<double> rates(10000);
  for (auto& dr : rates) dr = uniform01(rng) < 0.2 ? 2.0 : 0.5;  // D at t=1, B=1
  const auto est = mcs_reliability(rates, 1.0, 1.0);
  CHECK(std::abs(est.r_hat - 0.8) <= 3.0 * est.standard_error);
  CHECK(est.n == 10000);

  CHECK_THROWS_AS(mcs_reliability({}, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("kernel limit: mixture cdf converges to the weighted empirical cdf") {
  std::mt19937_64 rng(31);
  const std::size_t n = 64;
  std::vector<double> values(n);
  std::vector<double> probs(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = uniform01(rng) * 4.0 - 2.0;
    probs[i] = 0.5 + uniform01(rng);
    sum += probs[i];
  }
  for (auto& p : probs) p /= sum;
  ResponseEnsemble e{values, probs, "kernel-limit"};

  const auto weighted_ecdf = [&](double y) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (values[i] <= y) c += probs[i];
    }
    return c;
  };

  double prev = 1e300;
  for (double bw : {0.1, 0.01, 0.001}) {
    const double d = oracles::cdf_distance(
        [&](double y) { return mixture_cdf(e, bw, y); }, weighted_ecdf, -2.5, 2.5, 4000);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 0.02);
}
