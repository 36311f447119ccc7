#pragma once

#include <functional>
#include <string>
#include <vector>

#include "dirollout/costs.hpp"
#include "dirollout/model.hpp"
#include "dirollout/problem.hpp"

namespace dirollout {

// Continuation values Q_{t+1} looked up at a successor information state,
// one value per realized control. Total over all reachable successors;
// identically zero at the terminal stage.
class ContinuationLookup {
 public:
  virtual ~ContinuationLookup() = default;
  virtual double value(const InformationState& successor, int u) const = 0;
  // Batched form; overridden where one lookup serves every control.
  virtual void values(const InformationState& successor,
                      std::vector<double>& out) const;
};

class ZeroContinuation final : public ContinuationLookup {
 public:
  double value(const InformationState&, int) const override { return 0.0; }
  void values(const InformationState&,
              std::vector<double>& out) const override {
    for (auto& v : out) v = 0.0;
  }
};

// Policy rows over x for a single context: mu(u | x).
struct PolicyBlock {
  int x_size = 0;
  int u_size = 0;
  std::vector<double> p;  // [x][u]

  double operator()(int u, int x) const {
    return p[static_cast<size_t>(x * u_size + u)];
  }
  Simplex row(int x) const;
  void set_row(int x, const Simplex& r);

  static PolicyBlock constant(int x_size, const Simplex& row);

  bool operator==(const PolicyBlock& other) const = default;
};

// A(x, u) = exp(s rho(x,u) - Q_next(u)), with Q_next the continuation at the
// successor belief reached under control u from the current policy iterate.
struct ExponentTable {
  int x_size = 0;
  int u_size = 0;
  std::vector<double> a;       // [x][u]
  std::vector<double> q_cont;  // per u, the continuation folded into a
  bool capped = false;         // exponent magnitude hit the cap

  double operator()(int x, int u) const {
    return a[static_cast<size_t>(x * u_size + u)];
  }
};

ExponentTable exponent_factor(const InformationState& b, const Kernel& w,
                              double s_t, const DistortionFn& rho,
                              const ContinuationLookup& cont,
                              const PolicyBlock& mu_current, int u_prev,
                              const BAAConfig& cfg);

// mu(u | x) = nu(u) A(x,u) / sum_u' nu(u') A(x,u'). Requires nu > 0.
PolicyBlock policy_update(const Simplex& nu_k, const ExponentTable& A);

// nu'(u) = nu(u) sum_x P(x) A(x,u) / sum_u' nu(u') A(x,u'), renormalized.
Simplex output_update(const Simplex& nu_k, const ExponentTable& A,
                      const InformationState& b, const Kernel& w, int u_prev,
                      double floor = kDefaultProbFloor);

// Stage value of the iterate:
//   sum_{x,u} (b w)(x) mu(u|x) [log(mu/nu) - s rho(x,u) + cont(succ, u)]
//   + s_t D_t,
// with successor beliefs recomputed from mu_k.
double q_evaluate(const InformationState& b, const Kernel& w,
                  const PolicyBlock& mu_k, const Simplex& nu_k,
                  const ContinuationLookup& cont, double s_t, double D_t,
                  const DistortionFn& rho, int u_prev,
                  double floor = kDefaultProbFloor);

// The stopping-criterion bounds. Both bounds carry s * D_s where D_s is the
// achieved distortion of the current iterate; the gap is independent of it.
struct StageBounds {
  double upper = 0.0;
  double lower = 0.0;
  double gap = 0.0;  // T_U - T_L
};

StageBounds bounds(const Simplex& nu_k, const ExponentTable& A,
                   const InformationState& b, const Kernel& w, int u_prev,
                   double s_t, double D_s);

// One row of the optional per-iteration trace.
struct BAAIterate {
  int iteration = 0;
  double gap = 0.0;
  double objective = 0.0;
  double upper = 0.0;
  double lower = 0.0;
};
using IterationSink = std::function<void(const BAAIterate&)>;

struct StageSolution {
  PolicyBlock mu;
  Simplex nu;
  double q_value = 0.0;
  double mi_nats = 0.0;     // at the matched output distribution
  double distortion = 0.0;
  int iterations = 0;
  double final_gap = 0.0;
  bool converged = false;
  bool exponent_capped = false;
  bool continuation_pinned = false;  // cycle across grid cells was broken
  bool negative_gap = false;         // a bound gap fell below -1e-9
  bool fortified = false;            // a supplied candidate policy won
};

// Alternating minimization for one (belief row, context): rebuilds the
// exponent table from the current policy iterate each iteration, sweeps the
// policy and output updates, and stops once the bound gap falls to
// cfg.epsilon or the iteration cap is hit (then flagged, last iterate kept).
StageSolution solve_stage(const InformationState& b, const Kernel& w,
                          double s_t, double D_t, const DistortionFn& rho,
                          const ContinuationLookup& cont, int u_prev,
                          const BAAConfig& cfg,
                          const IterationSink& sink = nullptr,
                          const Simplex* nu0 = nullptr);

}  // namespace dirollout
