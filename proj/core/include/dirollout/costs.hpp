#pragma once

#include <vector>

#include "dirollout/model.hpp"

namespace dirollout {

// State-dependent cost table rho(x, u) >= 0.
struct DistortionFn {
  int x_size = 0;
  int u_size = 0;
  std::vector<double> rho;  // [x][u]

  double operator()(int x, int u) const {
    return rho[static_cast<size_t>(x * u_size + u)];
  }
  void validate() const;

  static DistortionFn hamming(int size);

  bool operator==(const DistortionFn& other) const = default;
};

// Per-stage Lagrange multipliers s_t <= 0 and constraint thresholds D_t >= 0,
// both of length N+1.
struct LagrangeSchedule {
  std::vector<double> s;
  std::vector<double> D;

  void validate(int horizon) const;
};

// Stage conditional mutual information in nats:
//   sum log(mu/nu) mu w b m over (x_prev, x, u_prev, u).
// nu is not required to match (b, mu, w); evaluating a mismatched output
// distribution is how the inner minimization gets probed. With a matched nu
// the result is nonnegative; anything below -1e-9 throws.
double stage_mutual_information(const InformationState& b, const Policy& mu,
                                const Kernel& w, const OutputDistribution& nu,
                                const ControlMarginal& m,
                                double floor = kDefaultProbFloor);

// Sum of per-stage costs (the directed-information total when the entries
// are stage mutual informations).
double directed_information(const std::vector<double>& stage_costs);

// sum rho(x, u) mu w b m over all indices.
double expected_distortion(const InformationState& b, const Policy& mu,
                           const Kernel& w, const DistortionFn& rho,
                           const ControlMarginal& m);

// g_t = mi - s_t (dist - D_t).
double lagrangian_stage_cost(double mi, double dist, double s_t, double D_t);

}  // namespace dirollout
