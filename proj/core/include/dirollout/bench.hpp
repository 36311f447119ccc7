#pragma once

#include <string>
#include <vector>

#include "dirollout/problem.hpp"

namespace dirollout {

struct BenchPoint {
  double x = 0.0;  // swept parameter value
  std::vector<double> samples_seconds;
  double median_seconds = 0.0;
};

struct BenchSweep {
  std::string name;        // "offline_vs_n", ...
  std::vector<BenchPoint> points;
  double slope = 0.0;      // fitted log-log slope
};

struct BenchReport {
  std::vector<BenchSweep> sweeps;
  double offline_rollout_seconds = 0.0;   // at the config's own scale
  double offline_baseline_seconds = 0.0;  // full-horizon training
  int workers = 0;
  std::string fingerprint;
};

struct BenchSpec {
  std::vector<int> n_values = {10, 20, 40};
  std::vector<int> rolling_values = {2, 4, 8};
  std::vector<int> horizon_values = {25, 50, 100};
  int warmup = 1;
  int repeats = 3;
};

// Least-squares slope of log(y) against log(x). Throws BenchFitError with
// fewer than 3 points.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Times offline training and the online pass across the sweeps, medians of
// `repeats` after `warmup`, and fits the scaling slopes. Requires a
// time-invariant kernel so horizons can be stretched.
BenchReport run_bench(const ProblemInstance& base,
                      const SolverSettings& settings, const BenchSpec& spec,
                      const std::string& fingerprint);

std::string bench_timings_csv(const BenchReport& report);
void write_bench_report(const std::string& path, const BenchReport& report);

}  // namespace dirollout
