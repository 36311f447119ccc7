#include <doctest.h>

#include <cmath>

#include "dirollout/bench.hpp"

using namespace dirollout;

TEST_CASE("loglog_slope recovers exact power laws") {
  const std::vector<double> x{10, 20, 40};
  std::vector<double> quadratic, linear;
  for (double v : x) {
    quadratic.push_back(3.0 * v * v);
    linear.push_back(0.25 * v);
  }
  CHECK(loglog_slope(x, quadratic) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(loglog_slope(x, linear) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("slope fits reject undersized sweeps") {
  CHECK_THROWS_AS(loglog_slope({1, 2}, {1, 2}), BenchFitError);
  CHECK_THROWS_AS(loglog_slope({1, 2, 3}, {1, 2}), BenchFitError);
}

TEST_CASE("slope fits tolerate noise around the trend") {
  const std::vector<double> x{10, 20, 40, 80};
  std::vector<double> y;
  for (size_t i = 0; i < x.size(); ++i)
    y.push_back(2.0 * x[i] * x[i] * (1.0 + (i % 2 ? 0.05 : -0.05)));
  const double slope = loglog_slope(x, y);
  CHECK(slope > 1.9);
  CHECK(slope < 2.1);
}

TEST_CASE("bench specs with short sweeps are rejected up front") {
  ProblemInstance inst = ProblemInstance::binary_symmetric(
      0.4, 0.8, 10, -1.0, 0.0, Simplex::uniform(2), Policy::uniform(0, 1, 2, 2));
  SolverSettings settings;
  BenchSpec spec;
  spec.n_values = {10, 20};
  CHECK_THROWS_AS(run_bench(inst, settings, spec, "fp"), BenchFitError);
}
