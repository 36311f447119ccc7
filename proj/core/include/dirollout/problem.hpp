#pragma once

#include <vector>

#include "dirollout/costs.hpp"
#include "dirollout/model.hpp"

namespace dirollout {

// A fully resolved problem: alphabets, horizon, per-stage kernels and
// distortions, Lagrange schedule, and the fixed stage-0 data (initial state
// distribution and given initial policy).
struct ProblemInstance {
  int x_size = 2;
  int u_size = 2;
  int horizon = 0;  // N; stages run t = 0..N

  Simplex initial_state;   // P_0(x_0)
  Policy initial_policy;   // mu_0 = P_0(u_0 | x_0), single dummy context
  std::vector<Kernel> kernels;      // index by stage; [0] is the stage-0 surrogate
  std::vector<DistortionFn> rho;    // size N+1
  LagrangeSchedule lagrange;        // s, D of size N+1

  const Kernel& kernel(int t) const { return kernels[static_cast<size_t>(t)]; }
  const DistortionFn& distortion(int t) const {
    return rho[static_cast<size_t>(t)];
  }

  // Stage-0 objects with a single dummy context, reused by every stage-wise
  // cost routine.
  InformationState stage0_belief() const;
  ControlMarginal stage0_marginal() const;

  // nu_0(u) = sum_x mu_0(u | x) P_0(x).
  OutputDistribution initial_output() const;

  // b~_1(x_0 | u_0) and m_1(u_0) = nu_0(u_0), the online starting point.
  InformationState initial_belief() const;
  ControlMarginal initial_marginal() const;

  void validate() const;

  // Time-invariant binary instance in the controlled-BSC form.
  static ProblemInstance binary_symmetric(double a0, double a1, int horizon,
                                          double s, double D,
                                          const Simplex& p0, const Policy& mu0);
};

// Everything about *how* to solve an instance, as opposed to what it is.
struct BAAConfig {
  double epsilon = 1e-6;       // stopping gap, nats
  int max_iterations = 100000;
  double prob_floor = kDefaultProbFloor;
  double exponent_cap = 700.0;

  void validate() const;
};

struct SolverSettings {
  int quantization = 10;     // grid level n per context
  int rolling_horizon = 1;   // N_s
  BAAConfig baa;
  int rounds = 1;            // repeated-rollout rounds
  unsigned long long seed = 0;
  int workers = 0;           // 0 = resolve from env / hardware
};

int resolve_workers(int requested);

}  // namespace dirollout
