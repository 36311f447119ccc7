#include "dirollout/oracle.hpp"

#include <cmath>
#include <limits>

namespace dirollout {

namespace {

// Endpoint-inclusive uniform grid on [floor, 1-floor]; the true optimum may
// sit near the boundary, so the endpoints stay in.
std::vector<double> coordinate_grid(int m, double floor) {
  std::vector<double> g(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i)
    g[static_cast<size_t>(i)] = floor + (1.0 - 2.0 * floor) * i / (m - 1);
  return g;
}

PolicyBlock block_from_levels(double p0, double p1) {
  PolicyBlock blk;
  blk.x_size = 2;
  blk.u_size = 2;
  blk.p = {p0, 1.0 - p0, p1, 1.0 - p1};
  return blk;
}

}  // namespace

double brute_force_stage(const InformationState& b, const Kernel& w,
                         double s_t, double D_t, const DistortionFn& rho,
                         const ContinuationLookup& cont, int u_prev,
                         int resolution) {
  if (w.x_size != 2 || w.u_size != 2)
    throw UnsupportedError("brute_force_stage: binary alphabets only");
  if (resolution < 10)
    throw Error("brute_force_stage: resolution must be >= 10");
  const std::vector<double> g = coordinate_grid(resolution, kDefaultProbFloor);

  double best = std::numeric_limits<double>::infinity();
  for (double p0 : g)
    for (double p1 : g) {
      const PolicyBlock mu = block_from_levels(p0, p1);
      // The output distribution enters at its inner minimizer, the induced
      // marginal.
      const Simplex pred = predicted_state_marginal(b, w, u_prev);
      std::vector<double> matched(2, 0.0);
      for (int u = 0; u < 2; ++u)
        for (int x = 0; x < 2; ++x) matched[static_cast<size_t>(u)] += pred[x] * mu(u, x);
      const Simplex nu = normalize(matched);
      const double q =
          q_evaluate(b, w, mu, nu, cont, s_t, D_t, rho, u_prev);
      if (q < best) best = q;
    }
  return best;
}

namespace {

struct HorizonScan {
  const ProblemInstance* instance = nullptr;
  std::vector<double> grid;

  // Minimum subtree cost from stage t onward, starting from the belief over
  // x_{t-1} reached along one control history ending in u_prev.
  double value(int t, const Simplex& belief, int u_prev) const {
    const Kernel& w = instance->kernel(t);
    std::vector<double> pred(2, 0.0);
    for (int x = 0; x < 2; ++x)
      for (int xp = 0; xp < 2; ++xp)
        pred[static_cast<size_t>(x)] += w(x, xp, u_prev) * belief[xp];
    return value_from_pred(t, Simplex(pred));
  }

  double value_from_pred(int t, const Simplex& pred) const {
    const double s = instance->lagrange.s[static_cast<size_t>(t)];
    const double D = instance->lagrange.D[static_cast<size_t>(t)];
    const DistortionFn& rho = instance->distortion(t);
    const int N = instance->horizon;

    double best = std::numeric_limits<double>::infinity();
    for (double p0 : grid)
      for (double p1 : grid) {
        const PolicyBlock mu = block_from_levels(p0, p1);
        std::vector<double> nu(2, 0.0);
        for (int u = 0; u < 2; ++u)
          for (int x = 0; x < 2; ++x) nu[static_cast<size_t>(u)] += pred[x] * mu(u, x);
        double q = s * D;
        for (int x = 0; x < 2; ++x)
          for (int u = 0; u < 2; ++u) {
            const double weight = pred[x] * mu(u, x);
            if (weight <= 0.0) continue;
            q += weight * (std::log(mu(u, x) / nu[static_cast<size_t>(u)]) -
                           s * rho(x, u));
          }
        if (t < N) {
          for (int u = 0; u < 2; ++u) {
            if (nu[static_cast<size_t>(u)] <= 0.0) continue;
            std::vector<double> post(2, 0.0);
            for (int x = 0; x < 2; ++x)
              post[static_cast<size_t>(x)] =
                  pred[x] * mu(u, x) / nu[static_cast<size_t>(u)];
            q += nu[static_cast<size_t>(u)] * value(t + 1, Simplex(post), u);
          }
        }
        if (q < best) best = q;
      }
    return best;
  }
};

}  // namespace

long long brute_force_horizon_count(const ProblemInstance& instance,
                                    int resolution) {
  const long long candidates =
      static_cast<long long>(resolution) * resolution;
  long long count = candidates;  // stage N
  for (int t = instance.horizon - 1; t >= 0; --t)
    count = candidates + candidates * instance.u_size * count;
  return count;
}

double brute_force_horizon(const ProblemInstance& instance, int resolution,
                           long long budget) {
  if (instance.x_size != 2 || instance.u_size != 2)
    throw UnsupportedError("brute_force_horizon: binary alphabets only");
  if (instance.horizon > 3)
    throw UnsupportedError("brute_force_horizon: N <= 3 only");
  const long long count = brute_force_horizon_count(instance, resolution);
  if (count > budget)
    throw BudgetError("brute_force_horizon: " + std::to_string(count) +
                      " candidate evaluations exceed the budget of " +
                      std::to_string(budget));
  HorizonScan scan;
  scan.instance = &instance;
  scan.grid = coordinate_grid(resolution, kDefaultProbFloor);
  return scan.value_from_pred(0, instance.initial_state);
}

RDPoint analytic_rd_point(double s) {
  if (!(s < 0.0)) throw Error("analytic_rd_point: s must be negative");
  RDPoint out;
  out.distortion = std::exp(s) / (1.0 + std::exp(s));
  const double d = out.distortion;
  const double hb = -d * std::log(d) - (1.0 - d) * std::log(1.0 - d);
  out.rate_nats = std::log(2.0) - hb;
  return out;
}

OracleCheck make_check(const std::string& name, double oracle_value,
                       double solver_value, double tolerance) {
  OracleCheck check;
  check.name = name;
  check.oracle_value = oracle_value;
  check.solver_value = solver_value;
  check.gap = std::abs(oracle_value - solver_value);
  check.tolerance = tolerance;
  check.pass = check.gap <= tolerance;
  return check;
}

bool OracleReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace dirollout
