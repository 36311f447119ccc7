#include "dirollout/costs.hpp"

#include <cmath>

namespace dirollout {

void DistortionFn::validate() const {
  if (rho.size() != static_cast<size_t>(x_size) * u_size)
    throw Error("DistortionFn: table size mismatch");
  for (double v : rho)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error("DistortionFn: entries must be finite and nonnegative");
}

DistortionFn DistortionFn::hamming(int size) {
  DistortionFn d;
  d.x_size = size;
  d.u_size = size;
  d.rho.resize(static_cast<size_t>(size) * size);
  for (int x = 0; x < size; ++x)
    for (int u = 0; u < size; ++u)
      d.rho[static_cast<size_t>(x * size + u)] = (x == u) ? 0.0 : 1.0;
  return d;
}

void LagrangeSchedule::validate(int horizon) const {
  const size_t want = static_cast<size_t>(horizon) + 1;
  if (s.size() != want || D.size() != want)
    throw Error("LagrangeSchedule: schedules must have length N+1");
  for (double v : s)
    if (!(v <= 0.0)) throw Error("LagrangeSchedule: s_t must be <= 0");
  for (double v : D)
    if (!(v >= 0.0)) throw Error("LagrangeSchedule: D_t must be >= 0");
}

namespace {

// Whether nu equals the output distribution induced by (b, mu, w).
bool output_matched(const InformationState& b, const Policy& mu,
                    const Kernel& w, const OutputDistribution& nu) {
  for (int c = 0; c < nu.contexts; ++c) {
    const Simplex induced = output_distribution(b, mu, w, c);
    for (int u = 0; u < nu.u_size; ++u)
      if (std::abs(induced[u] - nu(u, c)) > 1e-9) return false;
  }
  return true;
}

}  // namespace

double stage_mutual_information(const InformationState& b, const Policy& mu,
                                const Kernel& w, const OutputDistribution& nu,
                                const ControlMarginal& m, double floor) {
  double mi = 0.0;
  for (int c = 0; c < b.contexts; ++c) {
    const double weight = m[c];
    if (weight <= 0.0) continue;
    Simplex nu_row = floored(nu.row(c), floor);
    for (int x = 0; x < w.x_size; ++x) {
      Simplex mu_row = floored(mu.row(c, x), floor);
      double pred = 0.0;
      for (int xp = 0; xp < w.x_size; ++xp) pred += w(x, xp, c) * b(xp, c);
      if (pred <= 0.0) continue;
      for (int u = 0; u < mu.u_size; ++u)
        mi += weight * pred * mu_row[u] * std::log(mu_row[u] / nu_row[u]);
    }
  }
  if (mi < -1e-9 && output_matched(b, mu, w, nu))
    throw NumericalConsistencyError(
        "stage_mutual_information: negative value " + std::to_string(mi) +
        " with a matched output distribution");
  return mi;
}

double directed_information(const std::vector<double>& stage_costs) {
  double total = 0.0;
  for (double v : stage_costs) total += v;
  return total;
}

double expected_distortion(const InformationState& b, const Policy& mu,
                           const Kernel& w, const DistortionFn& rho,
                           const ControlMarginal& m) {
  double dist = 0.0;
  for (int c = 0; c < b.contexts; ++c) {
    const double weight = m[c];
    if (weight <= 0.0) continue;
    for (int x = 0; x < w.x_size; ++x) {
      double pred = 0.0;
      for (int xp = 0; xp < w.x_size; ++xp) pred += w(x, xp, c) * b(xp, c);
      for (int u = 0; u < mu.u_size; ++u)
        dist += weight * pred * mu(u, c, x) * rho(x, u);
    }
  }
  return dist;
}

double lagrangian_stage_cost(double mi, double dist, double s_t, double D_t) {
  return mi - s_t * (dist - D_t);
}

}  // namespace dirollout
