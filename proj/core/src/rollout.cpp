#include "dirollout/rollout.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dirollout/grid.hpp"

namespace dirollout {

namespace {

constexpr double kContextWeightFloor = 1e-12;

// Continuation for online stage t: zero at the terminal stage, the
// stage-(t+1) table inside the trained window, and the deepest trained
// table (the rolling-horizon value) for every earlier stage.
const QTable* online_continuation_table(const OfflineArtifact& artifact,
                                        int t, int horizon) {
  if (t == horizon) return nullptr;
  return &artifact.table_for_stage(std::max(t + 1, artifact.first_stage()));
}

// The base policy at stage t: its own table inside the trained window, the
// deepest trained table before it.
const QTable& base_policy_table(const OfflineArtifact& artifact, int t) {
  return artifact.table_for_stage(std::max(t, artifact.first_stage()));
}

// Stage value of a fixed policy block at a given belief, with the output
// distribution set to the induced marginal (the inner minimizer).
double evaluate_block(const InformationState& b, const Kernel& w,
                      const PolicyBlock& mu, const ContinuationLookup& cont,
                      double s_t, double D_t, const DistortionFn& rho,
                      int u_prev, double floor) {
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  std::vector<double> matched(static_cast<size_t>(mu.u_size), 0.0);
  for (int u = 0; u < mu.u_size; ++u)
    for (int x = 0; x < mu.x_size; ++x)
      matched[static_cast<size_t>(u)] += pred[x] * mu(u, x);
  const Simplex nu = floored(normalize(matched), floor);
  return q_evaluate(b, w, mu, nu, cont, s_t, D_t, rho, u_prev, floor);
}

StageSolution solution_from_block(const InformationState& b, const Kernel& w,
                                  const PolicyBlock& mu, double q,
                                  const DistortionFn& rho, int u_prev,
                                  double floor) {
  StageSolution sol;
  sol.mu = mu;
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  std::vector<double> matched(static_cast<size_t>(mu.u_size), 0.0);
  for (int u = 0; u < mu.u_size; ++u)
    for (int x = 0; x < mu.x_size; ++x)
      matched[static_cast<size_t>(u)] += pred[x] * mu(u, x);
  sol.nu = floored(normalize(matched), floor);
  sol.q_value = q;
  double mi = 0.0, dist = 0.0;
  for (int x = 0; x < mu.x_size; ++x) {
    const Simplex row = floored(mu.row(x), floor);
    for (int u = 0; u < mu.u_size; ++u) {
      mi += pred[x] * row[u] * std::log(row[u] / sol.nu[u]);
      dist += pred[x] * mu(u, x) * rho(x, u);
    }
  }
  sol.mi_nats = mi;
  sol.distortion = dist;
  sol.converged = true;
  sol.fortified = true;
  return sol;
}

}  // namespace

void RolloutConfig::validate() const {
  if (rounds < 1) throw Error("RolloutConfig: rounds must be >= 1");
  baa.validate();
}

ContextSolutions lookahead_q(const InformationState& b,
                             const OfflineArtifact& artifact, int t,
                             const ProblemInstance& instance,
                             const RolloutConfig& cfg) {
  const int N = instance.horizon;
  if (t < 1 || t > N) throw Error("lookahead_q: stage out of range");
  const Kernel& w = instance.kernel(t);
  const double s_t = instance.lagrange.s[static_cast<size_t>(t)];
  const double D_t = instance.lagrange.D[static_cast<size_t>(t)];
  const DistortionFn& rho = instance.distortion(t);

  ZeroContinuation zero;
  const QTable* cont_table = online_continuation_table(artifact, t, N);
  TableContinuation table_cont(cont_table ? *cont_table
                                          : artifact.tables.front(),
                               artifact.grid);
  const ContinuationLookup& cont =
      cont_table ? static_cast<const ContinuationLookup&>(table_cont)
                 : static_cast<const ContinuationLookup&>(zero);

  const QTable& base_table = base_policy_table(artifact, t);
  const int gi = nearest(artifact.grid, b);

  ContextSolutions out;
  out.per_context.resize(static_cast<size_t>(b.contexts));
  out.base_q.resize(static_cast<size_t>(b.contexts));
  for (int c = 0; c < b.contexts; ++c) {
    const PolicyBlock& base_mu = base_table.at(gi, c).mu;
    const double base_q = evaluate_block(b, w, base_mu, cont, s_t, D_t, rho, c,
                                         cfg.baa.prob_floor);
    out.base_q[static_cast<size_t>(c)] = base_q;
    if (cfg.grid_policy_mode) {
      out.per_context[static_cast<size_t>(c)] = solution_from_block(
          b, w, base_mu, base_q, rho, c, cfg.baa.prob_floor);
      continue;
    }
    StageSolution sol =
        solve_stage(b, w, s_t, D_t, rho, cont, c, cfg.baa);
    if (base_q < sol.q_value) {
      // The stored base policy is inside the feasible set of the online
      // minimization; keep it when the inner loop stopped above it.
      sol = solution_from_block(b, w, base_mu, base_q, rho, c,
                                cfg.baa.prob_floor);
    }
    out.per_context[static_cast<size_t>(c)] = std::move(sol);
  }
  return out;
}

SelectedPolicy rollout_policy_select(const ContextSolutions& solutions,
                                     const ControlMarginal& m, int stage,
                                     int x_size, int u_size) {
  const int contexts = static_cast<int>(solutions.per_context.size());
  if (m.size() != contexts)
    throw Error("rollout_policy_select: one solution per context required");
  SelectedPolicy out;
  out.policy = Policy::uniform(stage, contexts, x_size, u_size);
  for (int c = 0; c < contexts; ++c) {
    if (m[c] < kContextWeightFloor) continue;  // keep uniform placeholder
    const PolicyBlock& blk = solutions.per_context[static_cast<size_t>(c)].mu;
    for (int x = 0; x < x_size; ++x) out.policy.set_row(c, x, blk.row(x));
    out.averaged_q += m[c] * solutions.per_context[static_cast<size_t>(c)].q_value;
    out.averaged_base_q += m[c] * solutions.base_q[static_cast<size_t>(c)];
  }
  return out;
}

namespace {

struct StageCosts {
  double mi = 0.0;
  double dist = 0.0;
  double lagrangian = 0.0;
};

StageCosts stage_costs(const InformationState& b, const Policy& mu,
                       const Kernel& w, const OutputDistribution& nu,
                       const ControlMarginal& m, const DistortionFn& rho,
                       double s_t, double D_t, double floor) {
  StageCosts out;
  out.mi = stage_mutual_information(b, mu, w, nu, m, floor);
  out.dist = expected_distortion(b, mu, w, rho, m);
  out.lagrangian = lagrangian_stage_cost(out.mi, out.dist, s_t, D_t);
  return out;
}

StageRecord stage0_record(const ProblemInstance& instance, double floor) {
  StageRecord rec;
  rec.t = 0;
  rec.belief = instance.stage0_belief();
  rec.policy = instance.initial_policy;
  rec.nu = instance.initial_output();
  rec.marginal = instance.stage0_marginal();
  const StageCosts costs = stage_costs(
      rec.belief, rec.policy, instance.kernel(0), rec.nu, rec.marginal,
      instance.distortion(0), instance.lagrange.s[0], instance.lagrange.D[0],
      floor);
  rec.mi_nats = costs.mi;
  rec.distortion = costs.dist;
  rec.lagrangian_cost = costs.lagrangian;
  rec.cumulative_di_nats = costs.mi;
  return rec;
}

void finish_totals(RolloutTrajectory& traj) {
  traj.total_di_nats = 0.0;
  traj.total_distortion = 0.0;
  traj.total_lagrangian = 0.0;
  for (const auto& rec : traj.stages) {
    traj.total_di_nats += rec.mi_nats;
    traj.total_distortion += rec.distortion;
    traj.total_lagrangian += rec.lagrangian_cost;
  }
}

}  // namespace

RolloutTrajectory run_online(const ProblemInstance& instance,
                             const OfflineArtifact& artifact,
                             const RolloutConfig& cfg) {
  instance.validate();
  cfg.validate();
  const int N = instance.horizon;
  const double floor = cfg.baa.prob_floor;

  RolloutTrajectory traj;
  traj.stages.reserve(static_cast<size_t>(N) + 1);
  traj.stages.push_back(stage0_record(instance, floor));

  InformationState b = instance.initial_belief();
  ControlMarginal m = instance.initial_marginal();
  double cumulative = traj.stages.front().mi_nats;

  for (int t = 1; t <= N; ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      b.stage = t;
      m.stage = t;
      const Kernel& w = instance.kernel(t);
      const ContextSolutions sols = lookahead_q(b, artifact, t, instance, cfg);
      const SelectedPolicy sel = rollout_policy_select(
          sols, m, t, instance.x_size, instance.u_size);
      const OutputDistribution nu = output_distribution_all(b, sel.policy, w);
      const StageCosts costs = stage_costs(
          b, sel.policy, w, nu, m, instance.distortion(t),
          instance.lagrange.s[static_cast<size_t>(t)],
          instance.lagrange.D[static_cast<size_t>(t)], floor);

      StageRecord rec;
      rec.t = t;
      rec.belief = b;
      rec.policy = sel.policy;
      rec.nu = nu;
      rec.marginal = m;
      rec.mi_nats = costs.mi;
      rec.distortion = costs.dist;
      rec.lagrangian_cost = costs.lagrangian;
      cumulative += costs.mi;
      rec.cumulative_di_nats = cumulative;
      if (cfg.improvement_diagnostics) {
        rec.rollout_q_avg = sel.averaged_q;
        rec.base_q_avg = sel.averaged_base_q;
      }

      const InformationState b_next =
          t < N ? propagate_information_state(b, sel.policy, w, m)
                : InformationState{};
      const ControlMarginal m_next =
          t < N ? control_marginal_update(m, nu) : ControlMarginal{};

      const auto stop = std::chrono::steady_clock::now();
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
      traj.stages.push_back(std::move(rec));
      if (t < N) {
        b = b_next;
        m = m_next;
      }
    } catch (const UnreachableOutputError& e) {
      throw PropagationError("run_online: stage " + std::to_string(t) + ": " +
                             e.what());
    }
  }
  finish_totals(traj);
  return traj;
}

std::vector<RoundResult> run_repeated(const ProblemInstance& instance,
                                      const SolverSettings& settings,
                                      const RolloutConfig& cfg,
                                      const std::string& fingerprint) {
  cfg.validate();
  const int workers = resolve_workers(settings.workers);
  std::vector<RoundResult> rounds;
  BeliefGrid grid =
      build_uniform_grid(settings.quantization, instance.x_size, instance.u_size);
  for (int round = 1; round <= cfg.rounds; ++round) {
    if (round > 1)
      grid = refine_from_trajectory(rounds.back().trajectory,
                                    settings.quantization);
    RoundResult result;
    auto t0 = std::chrono::steady_clock::now();
    result.artifact = train(instance, grid, settings.rolling_horizon, cfg.baa,
                            workers, fingerprint);
    auto t1 = std::chrono::steady_clock::now();
    result.trajectory = run_online(instance, result.artifact, cfg);
    auto t2 = std::chrono::steady_clock::now();
    result.offline_seconds = std::chrono::duration<double>(t1 - t0).count();
    result.online_seconds = std::chrono::duration<double>(t2 - t1).count();
    rounds.push_back(std::move(result));
  }
  return rounds;
}

RolloutTrajectory run_baseline(const ProblemInstance& instance,
                               const SolverSettings& settings,
                               const RolloutConfig& cfg,
                               OfflineArtifact* out_artifact,
                               const std::string& fingerprint) {
  instance.validate();
  cfg.validate();
  const int N = instance.horizon;
  const double floor = cfg.baa.prob_floor;
  const int workers = resolve_workers(settings.workers);

  const BeliefGrid grid =
      build_uniform_grid(settings.quantization, instance.x_size, instance.u_size);
  OfflineArtifact artifact =
      train(instance, grid, N, cfg.baa, workers, fingerprint);

  RolloutTrajectory traj;
  traj.stages.reserve(static_cast<size_t>(N) + 1);
  traj.stages.push_back(stage0_record(instance, floor));

  InformationState b = instance.initial_belief();
  ControlMarginal m = instance.initial_marginal();
  double cumulative = traj.stages.front().mi_nats;

  for (int t = 1; t <= N; ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      b.stage = t;
      m.stage = t;
      const Kernel& w = instance.kernel(t);
      const QTable& table = artifact.table_for_stage(t);
      const int gi = nearest(grid, b);
      Policy mu = Policy::uniform(t, b.contexts, instance.x_size,
                                  instance.u_size);
      for (int c = 0; c < b.contexts; ++c) {
        const PolicyBlock& blk = table.at(gi, c).mu;
        for (int x = 0; x < instance.x_size; ++x) mu.set_row(c, x, blk.row(x));
      }
      const OutputDistribution nu = output_distribution_all(b, mu, w);
      const StageCosts costs = stage_costs(
          b, mu, w, nu, m, instance.distortion(t),
          instance.lagrange.s[static_cast<size_t>(t)],
          instance.lagrange.D[static_cast<size_t>(t)], floor);

      StageRecord rec;
      rec.t = t;
      rec.belief = b;
      rec.policy = mu;
      rec.nu = nu;
      rec.marginal = m;
      rec.mi_nats = costs.mi;
      rec.distortion = costs.dist;
      rec.lagrangian_cost = costs.lagrangian;
      cumulative += costs.mi;
      rec.cumulative_di_nats = cumulative;

      const InformationState b_next =
          t < N ? propagate_information_state(b, mu, w, m) : InformationState{};
      const ControlMarginal m_next =
          t < N ? control_marginal_update(m, nu) : ControlMarginal{};

      const auto stop = std::chrono::steady_clock::now();
      rec.wall_ms =
          std::chrono::duration<double, std::milli>(stop - start).count();
      traj.stages.push_back(std::move(rec));
      if (t < N) {
        b = b_next;
        m = m_next;
      }
    } catch (const UnreachableOutputError& e) {
      throw PropagationError("run_baseline: stage " + std::to_string(t) +
                             ": " + e.what());
    }
  }
  finish_totals(traj);
  if (out_artifact) *out_artifact = std::move(artifact);
  return traj;
}

}  // namespace dirollout
