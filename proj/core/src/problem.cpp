#include "dirollout/problem.hpp"

#include <cstdlib>
#include <string>
#include <thread>

namespace dirollout {

InformationState ProblemInstance::stage0_belief() const {
  return InformationState::uniform(0, 1, x_size);
}

ControlMarginal ProblemInstance::stage0_marginal() const {
  ControlMarginal m;
  m.stage = 0;
  m.p = {1.0};
  return m;
}

OutputDistribution ProblemInstance::initial_output() const {
  OutputDistribution nu;
  nu.stage = 0;
  nu.contexts = 1;
  nu.u_size = u_size;
  nu.p.resize(static_cast<size_t>(u_size));
  nu.set_row(0, output_distribution(stage0_belief(), initial_policy, kernel(0), 0));
  return nu;
}

InformationState ProblemInstance::initial_belief() const {
  return propagate_information_state(stage0_belief(), initial_policy,
                                     kernel(0), stage0_marginal());
}

ControlMarginal ProblemInstance::initial_marginal() const {
  return control_marginal_update(stage0_marginal(), initial_output());
}

void ProblemInstance::validate() const {
  if (horizon < 0) throw Error("ProblemInstance: negative horizon");
  if (initial_state.size() != x_size)
    throw Error("ProblemInstance: initial state size mismatch");
  if (initial_policy.contexts != 1 || initial_policy.x_size != x_size ||
      initial_policy.u_size != u_size)
    throw Error("ProblemInstance: initial policy shape mismatch");
  if (kernels.size() != static_cast<size_t>(horizon) + 1)
    throw Error("ProblemInstance: need one kernel per stage 0..N");
  for (const auto& k : kernels) {
    if (k.x_size != x_size || k.u_size != u_size)
      throw Error("ProblemInstance: kernel alphabet mismatch");
    k.validate();
  }
  if (rho.size() != static_cast<size_t>(horizon) + 1)
    throw Error("ProblemInstance: need one distortion table per stage");
  for (const auto& r : rho) {
    if (r.x_size != x_size || r.u_size != u_size)
      throw Error("ProblemInstance: distortion alphabet mismatch");
    r.validate();
  }
  lagrange.validate(horizon);
}

ProblemInstance ProblemInstance::binary_symmetric(double a0, double a1,
                                                  int horizon, double s,
                                                  double D, const Simplex& p0,
                                                  const Policy& mu0) {
  ProblemInstance inst;
  inst.x_size = 2;
  inst.u_size = 2;
  inst.horizon = horizon;
  inst.initial_state = p0;
  inst.initial_policy = mu0;
  inst.kernels.resize(static_cast<size_t>(horizon) + 1);
  inst.kernels[0] = Kernel::from_initial(p0, 2);
  for (int t = 1; t <= horizon; ++t)
    inst.kernels[static_cast<size_t>(t)] = Kernel::binary_symmetric(a0, a1);
  inst.rho.assign(static_cast<size_t>(horizon) + 1, DistortionFn::hamming(2));
  inst.lagrange.s.assign(static_cast<size_t>(horizon) + 1, s);
  inst.lagrange.D.assign(static_cast<size_t>(horizon) + 1, D);
  inst.validate();
  return inst;
}

void BAAConfig::validate() const {
  if (!(epsilon > 0.0)) throw Error("BAAConfig: epsilon must be positive");
  if (max_iterations < 1) throw Error("BAAConfig: max_iterations must be >= 1");
  if (!(prob_floor > 0.0)) throw Error("BAAConfig: prob_floor must be positive");
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DIROLLOUT_WORKERS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace dirollout
