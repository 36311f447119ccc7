#include "dirollout/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "dirollout/grid.hpp"
#include "dirollout/rollout.hpp"
#include "dirollout/trainer.hpp"

namespace dirollout {

using nlohmann::json;

double loglog_slope(const std::vector<double>& x,
                    const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw BenchFitError("loglog_slope: need at least 3 sweep points");
  double mx = 0.0, my = 0.0;
  const double count = static_cast<double>(x.size());
  std::vector<double> lx(x.size()), ly(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= count;
  my /= count;
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  if (den == 0.0) throw BenchFitError("loglog_slope: degenerate sweep");
  return num / den;
}

namespace {

// Rebuild the instance with a different horizon; needs the time-invariant
// kernel form.
ProblemInstance with_horizon(const ProblemInstance& base, int horizon) {
  for (int t = 2; t <= base.horizon; ++t)
    if (!(base.kernel(t) == base.kernel(1)))
      throw UnsupportedError(
          "bench: horizon sweeps need a time-invariant kernel");
  ProblemInstance inst = base;
  inst.horizon = horizon;
  inst.kernels.assign(static_cast<size_t>(horizon) + 1, base.kernel(1));
  inst.kernels[0] = Kernel::from_initial(base.initial_state, base.u_size);
  inst.rho.assign(static_cast<size_t>(horizon) + 1, base.distortion(0));
  inst.lagrange.s.assign(static_cast<size_t>(horizon) + 1, base.lagrange.s[0]);
  inst.lagrange.D.assign(static_cast<size_t>(horizon) + 1, base.lagrange.D[0]);
  return inst;
}

template <typename Fn>
BenchPoint time_point(double x, int warmup, int repeats, Fn&& fn) {
  BenchPoint point;
  point.x = x;
  for (int i = 0; i < warmup; ++i) fn();
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    point.samples_seconds.push_back(
        std::chrono::duration<double>(t1 - t0).count());
  }
  std::vector<double> sorted = point.samples_seconds;
  std::sort(sorted.begin(), sorted.end());
  point.median_seconds = sorted[sorted.size() / 2];
  return point;
}

double fit_sweep(BenchSweep& sweep) {
  std::vector<double> x, y;
  for (const auto& p : sweep.points) {
    x.push_back(p.x);
    y.push_back(p.median_seconds);
  }
  sweep.slope = loglog_slope(x, y);
  return sweep.slope;
}

}  // namespace

BenchReport run_bench(const ProblemInstance& base,
                      const SolverSettings& settings, const BenchSpec& spec,
                      const std::string& fingerprint) {
  if (spec.n_values.size() < 3 || spec.rolling_values.size() < 3 ||
      spec.horizon_values.size() < 3)
    throw BenchFitError("run_bench: each sweep needs at least 3 points");
  const int workers = resolve_workers(settings.workers);

  BenchReport report;
  report.workers = workers;
  report.fingerprint = fingerprint;

  // Offline wall time against the quantization level n.
  BenchSweep vs_n;
  vs_n.name = "offline_vs_n";
  for (int n : spec.n_values) {
    const BeliefGrid grid = build_uniform_grid(n, base.x_size, base.u_size);
    vs_n.points.push_back(time_point(n, spec.warmup, spec.repeats, [&] {
      train(base, grid, settings.rolling_horizon, settings.baa, workers);
    }));
  }
  fit_sweep(vs_n);
  report.sweeps.push_back(std::move(vs_n));

  // Offline wall time against the rolling horizon N_s.
  BenchSweep vs_ns;
  vs_ns.name = "offline_vs_rolling_horizon";
  const BeliefGrid grid_fixed =
      build_uniform_grid(settings.quantization, base.x_size, base.u_size);
  for (int ns : spec.rolling_values) {
    if (ns > base.horizon)
      throw BenchFitError("run_bench: rolling-horizon sweep exceeds horizon");
    vs_ns.points.push_back(time_point(ns, spec.warmup, spec.repeats, [&] {
      train(base, grid_fixed, ns, settings.baa, workers);
    }));
  }
  fit_sweep(vs_ns);
  report.sweeps.push_back(std::move(vs_ns));

  // Online wall time against the horizon N (training excluded).
  BenchSweep vs_horizon;
  vs_horizon.name = "online_vs_horizon";
  RolloutConfig rcfg;
  rcfg.baa = settings.baa;
  for (int N : spec.horizon_values) {
    const ProblemInstance inst = with_horizon(base, N);
    const OfflineArtifact artifact = train(
        inst, grid_fixed, std::min(settings.rolling_horizon, N), settings.baa,
        workers, fingerprint);
    vs_horizon.points.push_back(time_point(N, spec.warmup, spec.repeats, [&] {
      run_online(inst, artifact, rcfg);
    }));
  }
  fit_sweep(vs_horizon);
  report.sweeps.push_back(std::move(vs_horizon));

  // Paired offline comparison at the configured scale: rolling horizon
  // versus full-horizon training.
  {
    const auto t0 = std::chrono::steady_clock::now();
    train(base, grid_fixed, settings.rolling_horizon, settings.baa, workers);
    const auto t1 = std::chrono::steady_clock::now();
    train(base, grid_fixed, base.horizon, settings.baa, workers);
    const auto t2 = std::chrono::steady_clock::now();
    report.offline_rollout_seconds =
        std::chrono::duration<double>(t1 - t0).count();
    report.offline_baseline_seconds =
        std::chrono::duration<double>(t2 - t1).count();
  }
  return report;
}

std::string bench_timings_csv(const BenchReport& report) {
  std::string out = "sweep,x,median_seconds,samples\n";
  for (const auto& sweep : report.sweeps) {
    for (const auto& p : sweep.points) {
      out += sweep.name + "," + std::to_string(p.x) + "," +
             std::to_string(p.median_seconds) + ",";
      for (size_t i = 0; i < p.samples_seconds.size(); ++i) {
        if (i) out += ";";
        out += std::to_string(p.samples_seconds[i]);
      }
      out += "\n";
    }
  }
  return out;
}

void write_bench_report(const std::string& path, const BenchReport& report) {
  json j;
  j["workers"] = report.workers;
  j["fingerprint"] = report.fingerprint;
  j["offline_rollout_seconds"] = report.offline_rollout_seconds;
  j["offline_baseline_seconds"] = report.offline_baseline_seconds;
  json sweeps = json::array();
  for (const auto& sweep : report.sweeps) {
    json points = json::array();
    for (const auto& p : sweep.points)
      points.push_back(json{{"x", p.x},
                            {"median_seconds", p.median_seconds},
                            {"samples_seconds", p.samples_seconds}});
    sweeps.push_back(json{
        {"name", sweep.name}, {"slope", sweep.slope}, {"points", points}});
  }
  j["sweeps"] = std::move(sweeps);
  std::ofstream out(path);
  if (!out) throw Error("write_bench_report: cannot open " + path);
  out << j.dump(1, '\t') << "\n";
}

}  // namespace dirollout
