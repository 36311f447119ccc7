// dirollout: offline base-policy training and online truncated-rollout
// evaluation for directed-information-constrained control problems.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dirollout/bench.hpp"
#include "dirollout/config.hpp"
#include "dirollout/oracle.hpp"
#include "dirollout/report.hpp"
#include "dirollout/rollout.hpp"
#include "dirollout/trainer.hpp"

#include <json.hpp>

namespace {

using namespace dirollout;
namespace fs = std::filesystem;

// Exit codes, also listed in --help:
//   0 success, 1 internal error, 2 configuration error, 3 training failure,
//   4 propagation / numerical error, 5 bench fit failure.
enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kConfig = 2,
  kTraining = 3,
  kPropagation = 4,
  kBenchFit = 5,
};

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::string artifact_path;  // rollout: reuse an existing artifact
  int seed_override = -1;
  int workers_override = -1;
  double epsilon_override = -1.0;
  std::vector<int> bench_n = {10, 20, 40};
  std::vector<int> bench_rolling = {2, 4, 8};
  std::vector<int> bench_horizons = {25, 50, 100};
};

ProblemConfig load_config(const CliOptions& opts) {
  ProblemConfig cfg = parse_config(opts.config_path);
  bool changed = false;
  if (opts.seed_override >= 0) {
    cfg.settings.seed = static_cast<unsigned long long>(opts.seed_override);
    changed = true;
  }
  if (opts.workers_override >= 0) {
    cfg.settings.workers = opts.workers_override;
  }
  if (opts.epsilon_override > 0.0) {
    cfg.settings.baa.epsilon = opts.epsilon_override;
    changed = true;
  }
  if (changed) cfg.fingerprint = config_fingerprint(cfg);
  return cfg;
}

std::string out_path(const CliOptions& opts, const std::string& name) {
  fs::create_directories(opts.out_dir);
  return (fs::path(opts.out_dir) / name).string();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

int cmd_train(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  const int workers = resolve_workers(cfg.settings.workers);
  const BeliefGrid grid = build_uniform_grid(
      cfg.settings.quantization, cfg.instance.x_size, cfg.instance.u_size);
  const auto start = std::chrono::steady_clock::now();
  const OfflineArtifact artifact =
      train(cfg.instance, grid, cfg.settings.rolling_horizon, cfg.settings.baa,
            workers, cfg.fingerprint);
  const double offline_s = seconds_since(start);
  save_artifact(artifact, out_path(opts, "artifact.json"));

  RolloutTrajectory empty;  // summary without an online pass
  const RunReport report = make_report(empty, cfg.fingerprint, offline_s, 0.0,
                                       workers);
  write_run_summary(out_path(opts, "run_summary.json"), report);
  std::printf("trained stages %d..%d on %d grid points (%.3f s, %d workers)\n",
              artifact.last_stage(), artifact.first_stage(), grid.size(),
              offline_s, workers);
  std::printf("artifact: %s\n", out_path(opts, "artifact.json").c_str());
  return kOk;
}

int cmd_rollout(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  const int workers = resolve_workers(cfg.settings.workers);
  RolloutConfig rcfg;
  rcfg.baa = cfg.settings.baa;

  OfflineArtifact artifact;
  double offline_s = 0.0;
  if (!opts.artifact_path.empty()) {
    artifact = load_artifact(opts.artifact_path, cfg.fingerprint);
  } else {
    const BeliefGrid grid = build_uniform_grid(
        cfg.settings.quantization, cfg.instance.x_size, cfg.instance.u_size);
    const auto start = std::chrono::steady_clock::now();
    artifact = train(cfg.instance, grid, cfg.settings.rolling_horizon,
                     cfg.settings.baa, workers, cfg.fingerprint);
    offline_s = seconds_since(start);
    save_artifact(artifact, out_path(opts, "artifact.json"));
  }

  const auto start = std::chrono::steady_clock::now();
  const RolloutTrajectory traj = run_online(cfg.instance, artifact, rcfg);
  const double online_s = seconds_since(start);

  write_trajectory_csv(out_path(opts, "trajectory.csv"), traj);
  const RunReport report =
      make_report(traj, cfg.fingerprint, offline_s, online_s, workers);
  write_run_summary(out_path(opts, "run_summary.json"), report);
  std::printf("rollout: total DI %.6f nats, Lagrangian %.6f "
              "(offline %.3f s, online %.3f s)\n",
              traj.total_di_nats, traj.total_lagrangian, offline_s, online_s);
  return kOk;
}

int cmd_repeat(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  const int workers = resolve_workers(cfg.settings.workers);
  RolloutConfig rcfg;
  rcfg.baa = cfg.settings.baa;
  rcfg.rounds = cfg.settings.rounds;
  const auto rounds = run_repeated(cfg.instance, cfg.settings, rcfg,
                                   cfg.fingerprint);
  for (size_t r = 0; r < rounds.size(); ++r) {
    const std::string tag = "_round" + std::to_string(r + 1);
    save_artifact(rounds[r].artifact, out_path(opts, "artifact" + tag + ".json"));
    write_trajectory_csv(out_path(opts, "trajectory" + tag + ".csv"),
                         rounds[r].trajectory);
    const RunReport report =
        make_report(rounds[r].trajectory, cfg.fingerprint,
                    rounds[r].offline_seconds, rounds[r].online_seconds,
                    workers);
    write_run_summary(out_path(opts, "run_summary" + tag + ".json"), report);
    std::printf("round %zu: total DI %.6f nats, Lagrangian %.6f\n", r + 1,
                rounds[r].trajectory.total_di_nats,
                rounds[r].trajectory.total_lagrangian);
  }
  return kOk;
}

int cmd_baseline(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  const int workers = resolve_workers(cfg.settings.workers);
  RolloutConfig rcfg;
  rcfg.baa = cfg.settings.baa;
  OfflineArtifact artifact;
  const auto start = std::chrono::steady_clock::now();
  const RolloutTrajectory traj =
      run_baseline(cfg.instance, cfg.settings, rcfg, &artifact,
                   cfg.fingerprint);
  const double total_s = seconds_since(start);
  save_artifact(artifact, out_path(opts, "baseline_artifact.json"));
  write_trajectory_csv(out_path(opts, "baseline_trajectory.csv"), traj);
  double offline_s = 0.0;
  for (double v : artifact.stage_train_seconds) offline_s += v;
  const RunReport report = make_report(traj, cfg.fingerprint, offline_s,
                                       total_s - offline_s, workers);
  write_run_summary(out_path(opts, "baseline_summary.json"), report);
  std::printf("baseline: total DI %.6f nats, Lagrangian %.6f\n",
              traj.total_di_nats, traj.total_lagrangian);
  return kOk;
}

int cmd_oracle(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  const ProblemInstance& inst = cfg.instance;
  OracleReport report;
  report.instance_descriptor = "fingerprint " + cfg.fingerprint;

  // One-stage scan against the solver at the uniform belief, per context.
  BAAConfig baa = cfg.settings.baa;
  baa.epsilon = std::min(baa.epsilon, 1e-8);
  ZeroContinuation cont;
  const int N = inst.horizon;
  InformationState b = InformationState::uniform(N, inst.u_size, inst.x_size);
  for (int c = 0; c < inst.u_size; ++c) {
    const StageSolution sol =
        solve_stage(b, inst.kernel(N), inst.lagrange.s[static_cast<size_t>(N)],
                    inst.lagrange.D[static_cast<size_t>(N)],
                    inst.distortion(N), cont, c, baa);
    const double scanned = brute_force_stage(
        b, inst.kernel(N), inst.lagrange.s[static_cast<size_t>(N)],
        inst.lagrange.D[static_cast<size_t>(N)], inst.distortion(N), cont, c,
        200);
    report.checks.push_back(make_check(
        "stage_scan_context_" + std::to_string(c), scanned, sol.q_value, 1e-3));
  }

  // Parametric rate-distortion point for Hamming instances with a constant
  // negative multiplier.
  const bool is_hamming = inst.distortion(N) == DistortionFn::hamming(2);
  const double s_const = inst.lagrange.s[static_cast<size_t>(N)];
  if (is_hamming && s_const < 0.0) {
    const RDPoint rd = analytic_rd_point(s_const);
    const StageSolution sol = solve_stage(
        b, inst.kernel(N), s_const, rd.distortion, inst.distortion(N), cont, 0,
        baa);
    report.checks.push_back(
        make_check("analytic_distortion", rd.distortion, sol.distortion, 1e-4));
    report.checks.push_back(
        make_check("analytic_rate_nats", rd.rate_nats, sol.mi_nats, 1e-4));
  }

  // Exact horizon scan on tiny instances: the online total can never beat it.
  if (inst.horizon <= 2) {
    const double exact_min = brute_force_horizon(inst, 10);
    SolverSettings settings = cfg.settings;
    RolloutConfig rcfg;
    rcfg.baa = cfg.settings.baa;
    const auto rounds = run_repeated(inst, settings, rcfg, cfg.fingerprint);
    const double total = rounds[0].trajectory.total_lagrangian;
    OracleCheck check;
    check.name = "horizon_scan_lower_bound";
    check.oracle_value = exact_min;
    check.solver_value = total;
    check.gap = total - exact_min;
    check.tolerance = 1e-6;
    check.pass = total >= exact_min - 1e-6;
    report.checks.push_back(check);
  }

  nlohmann::json j;
  j["instance"] = report.instance_descriptor;
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    checks.push_back(nlohmann::json{{"name", c.name},
                                    {"oracle", c.oracle_value},
                                    {"solver", c.solver_value},
                                    {"gap", c.gap},
                                    {"tolerance", c.tolerance},
                                    {"pass", c.pass}});
    std::printf("%-28s oracle %.9g solver %.9g gap %.3g %s\n", c.name.c_str(),
                c.oracle_value, c.solver_value, c.gap,
                c.pass ? "PASS" : "FAIL");
  }
  j["checks"] = std::move(checks);
  j["all_pass"] = report.all_pass();
  std::ofstream out(out_path(opts, "oracle_report.json"));
  out << j.dump(1, '\t') << "\n";
  return report.all_pass() ? kOk : kInternal;
}

int cmd_bench(const CliOptions& opts) {
  const ProblemConfig cfg = load_config(opts);
  BenchSpec spec;
  spec.n_values = opts.bench_n;
  spec.rolling_values = opts.bench_rolling;
  spec.horizon_values = opts.bench_horizons;
  const BenchReport report =
      run_bench(cfg.instance, cfg.settings, spec, cfg.fingerprint);
  write_bench_report(out_path(opts, "bench_report.json"), report);
  std::ofstream csv(out_path(opts, "bench_timings.csv"));
  csv << bench_timings_csv(report);
  for (const auto& sweep : report.sweeps)
    std::printf("%-28s slope %.3f\n", sweep.name.c_str(), sweep.slope);
  std::printf("offline at configured scale: rolling %.3f s, full horizon %.3f s\n",
              report.offline_rollout_seconds, report.offline_baseline_seconds);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dirollout - truncated-rollout solver for directed-information-"
      "constrained Markov decision problems.\n"
      "Exit codes: 0 ok, 1 internal error, 2 config error, 3 training "
      "failure, 4 propagation/numerical error, 5 bench fit failure."};
  app.require_subcommand(1);

  CliOptions opts;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.config_path, "Path to the config JSON")
        ->required();
    cmd->add_option("--out", opts.out_dir, "Output directory")->required();
    cmd->add_option("--seed", opts.seed_override, "Override the config seed");
    cmd->add_option("--workers", opts.workers_override,
                    "Worker threads (DIROLLOUT_WORKERS is the fallback)");
    cmd->add_option("--epsilon", opts.epsilon_override,
                    "Override the stopping gap (nats)");
  };

  CLI::App* train_cmd =
      app.add_subcommand("train", "Offline base-policy training");
  add_common(train_cmd);
  CLI::App* rollout_cmd = app.add_subcommand(
      "rollout", "Online truncated-rollout pass (trains if no artifact)");
  add_common(rollout_cmd);
  rollout_cmd->add_option("--artifact", opts.artifact_path,
                          "Reuse an existing artifact file");
  CLI::App* repeat_cmd = app.add_subcommand(
      "repeat", "Repeated rollout with empirical grid refinement");
  add_common(repeat_cmd);
  CLI::App* baseline_cmd = app.add_subcommand(
      "baseline", "Full-horizon training with nearest-point execution");
  add_common(baseline_cmd);
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "Independent exhaustive and analytic verifiers");
  add_common(oracle_cmd);
  CLI::App* bench_cmd =
      app.add_subcommand("bench", "Scaling sweeps with fitted slopes");
  add_common(bench_cmd);
  bench_cmd
      ->add_option("--bench-n", opts.bench_n,
                   "Quantization sweep (default 10,20,40)")
      ->delimiter(',');
  bench_cmd
      ->add_option("--bench-rolling", opts.bench_rolling,
                   "Rolling-horizon sweep (default 2,4,8)")
      ->delimiter(',');
  bench_cmd
      ->add_option("--bench-horizons", opts.bench_horizons,
                   "Horizon sweep for the online pass (default 25,50,100)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) return cmd_train(opts);
    if (rollout_cmd->parsed()) return cmd_rollout(opts);
    if (repeat_cmd->parsed()) return cmd_repeat(opts);
    if (baseline_cmd->parsed()) return cmd_baseline(opts);
    if (oracle_cmd->parsed()) return cmd_oracle(opts);
    if (bench_cmd->parsed()) return cmd_bench(opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    for (const auto& v : e.violations) std::cerr << "  - " << v << "\n";
    return kConfig;
  } catch (const TrainingFailureError& e) {
    std::cerr << "training failure: " << e.what() << "\n";
    return kTraining;
  } catch (const StaleArtifactError& e) {
    std::cerr << "stale artifact: " << e.what() << "\n";
    return kConfig;
  } catch (const PropagationError& e) {
    std::cerr << "propagation error: " << e.what() << "\n";
    return kPropagation;
  } catch (const NumericalConsistencyError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kPropagation;
  } catch (const BenchFitError& e) {
    std::cerr << "bench fit error: " << e.what() << "\n";
    return kBenchFit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
