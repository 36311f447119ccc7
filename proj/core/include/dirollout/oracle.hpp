#pragma once

#include <string>
#include <vector>

#include "dirollout/baa.hpp"
#include "dirollout/problem.hpp"

namespace dirollout {

// Exhaustive one-stage verifier: scans policy rows over an endpoint-
// inclusive m-point grid per simplex coordinate (m^2 candidates for binary
// states), sets the output distribution to the induced marginal (the inner
// minimizer), and returns the minimum stage value. Binary alphabets only.
double brute_force_stage(const InformationState& b, const Kernel& w,
                         double s_t, double D_t, const DistortionFn& rho,
                         const ContinuationLookup& cont, int u_prev,
                         int resolution);

// Exact minimum over full-history policies on the m-grid for tiny horizons
// (N <= 3). Evaluates the policy tree exactly, without memory truncation.
// Throws BudgetError, naming the enumeration count, when the scan is too
// large.
double brute_force_horizon(const ProblemInstance& instance, int resolution,
                           long long budget = 200'000'000);

// Enumeration count the horizon scan would perform.
long long brute_force_horizon_count(const ProblemInstance& instance,
                                    int resolution);

// Parametric binary Hamming rate-distortion point at slope s < 0:
//   D = e^s / (1 + e^s),  R = ln 2 - H_b(D)  (natural-log entropy).
// Valid for the one-stage uniform symmetric instance; used as an oracle.
struct RDPoint {
  double distortion = 0.0;
  double rate_nats = 0.0;
};
RDPoint analytic_rd_point(double s);

struct OracleCheck {
  std::string name;
  double oracle_value = 0.0;
  double solver_value = 0.0;
  double gap = 0.0;  // |oracle - solver|
  double tolerance = 0.0;
  bool pass = false;
};

struct OracleReport {
  std::string instance_descriptor;
  std::vector<OracleCheck> checks;
  bool all_pass() const;
};

OracleCheck make_check(const std::string& name, double oracle_value,
                       double solver_value, double tolerance);

}  // namespace dirollout
