#pragma once

#include <vector>

#include "dirollout/trainer.hpp"

namespace dirollout {

struct StageRecord {
  int t = 0;
  InformationState belief;
  Policy policy;
  OutputDistribution nu;
  ControlMarginal marginal;
  double mi_nats = 0.0;
  double distortion = 0.0;
  double lagrangian_cost = 0.0;
  double cumulative_di_nats = 0.0;
  double wall_ms = 0.0;
  // Filled when improvement diagnostics are enabled: the averaged lookahead
  // value of the selected policy and of the stored base policy.
  double rollout_q_avg = 0.0;
  double base_q_avg = 0.0;
};

struct RolloutTrajectory {
  std::vector<StageRecord> stages;  // t = 0..N
  double total_di_nats = 0.0;
  double total_distortion = 0.0;
  double total_lagrangian = 0.0;

  const StageRecord& stage(int t) const {
    return stages[static_cast<size_t>(t)];
  }
};

struct RolloutConfig {
  int rounds = 1;
  bool baseline = false;  // harness selector: run the prior-method pass
  BAAConfig baa;
  // Select among stored grid policies only, instead of a fresh inner-loop
  // minimization at the online belief. Comparison mode.
  bool grid_policy_mode = false;
  // Record per-stage rollout vs base-policy averaged lookahead values.
  bool improvement_diagnostics = false;

  void validate() const;
};

struct ContextSolutions {
  std::vector<StageSolution> per_context;
  std::vector<double> base_q;  // stored base policy evaluated at the belief
};

// One-step truncated-rollout lookahead at the online belief: per context, a
// fresh inner-loop minimization against the stage's continuation table. The
// stored base-policy block at the nearest grid point is always evaluated as
// a candidate and kept when it scores lower, so the minimization never does
// worse than the base policy.
ContextSolutions lookahead_q(const InformationState& b,
                             const OfflineArtifact& artifact, int t,
                             const ProblemInstance& instance,
                             const RolloutConfig& cfg);

// Assembles the stage policy from the per-context minimizers; contexts with
// marginal weight below 1e-12 inherit the uniform policy. The averaged
// values weight each context's stage value by its marginal.
struct SelectedPolicy {
  Policy policy;
  double averaged_q = 0.0;
  double averaged_base_q = 0.0;
};
SelectedPolicy rollout_policy_select(const ContextSolutions& solutions,
                                     const ControlMarginal& m, int stage,
                                     int x_size, int u_size);

// Algorithm: forward pass t = 1..N with lookahead minimization, policy
// selection averaged over the control marginal, and belief propagation.
// Stage 0 executes the given initial policy.
RolloutTrajectory run_online(const ProblemInstance& instance,
                             const OfflineArtifact& artifact,
                             const RolloutConfig& cfg);

struct RoundResult {
  OfflineArtifact artifact;
  RolloutTrajectory trajectory;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
};

// Repeated rollout: round 1 trains on the uniform grid; each later round
// refines the grid to the previously visited range, retrains, and re-rolls.
std::vector<RoundResult> run_repeated(const ProblemInstance& instance,
                                      const SolverSettings& settings,
                                      const RolloutConfig& cfg,
                                      const std::string& fingerprint = "");

// Prior-method baseline: trains backward over the full horizon on the
// uniform grid, then executes forward by looking up the stored policy at
// the nearest grid point per stage, with no online minimization.
RolloutTrajectory run_baseline(const ProblemInstance& instance,
                               const SolverSettings& settings,
                               const RolloutConfig& cfg,
                               OfflineArtifact* out_artifact = nullptr,
                               const std::string& fingerprint = "");

}  // namespace dirollout
