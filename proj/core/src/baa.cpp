#include "dirollout/baa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dirollout {

void ContinuationLookup::values(const InformationState& successor,
                                std::vector<double>& out) const {
  for (size_t u = 0; u < out.size(); ++u)
    out[u] = value(successor, static_cast<int>(u));
}

Simplex PolicyBlock::row(int x) const {
  std::vector<double> r(static_cast<size_t>(u_size));
  for (int u = 0; u < u_size; ++u) r[static_cast<size_t>(u)] = (*this)(u, x);
  return Simplex(std::move(r));
}

void PolicyBlock::set_row(int x, const Simplex& r) {
  for (int u = 0; u < u_size; ++u)
    p[static_cast<size_t>(x * u_size + u)] = r[u];
}

PolicyBlock PolicyBlock::constant(int x_size, const Simplex& row) {
  PolicyBlock blk;
  blk.x_size = x_size;
  blk.u_size = row.size();
  blk.p.resize(static_cast<size_t>(x_size) * row.size());
  for (int x = 0; x < x_size; ++x) blk.set_row(x, row);
  return blk;
}

namespace {

// Successor information state from one source context: the row for the new
// context u is mu(u|.) (b w) normalized. Controls with zero probability get
// the predicted marginal as a placeholder; on product grids the placeholder
// digit is never read for a control that carries weight.
InformationState successor_state(const Simplex& pred, const PolicyBlock& mu,
                                 int next_stage) {
  InformationState succ;
  succ.stage = next_stage;
  succ.contexts = mu.u_size;
  succ.x_size = mu.x_size;
  succ.p.resize(static_cast<size_t>(succ.contexts) * succ.x_size);
  std::vector<double> row(static_cast<size_t>(mu.x_size));
  for (int u = 0; u < mu.u_size; ++u) {
    double norm = 0.0;
    for (int x = 0; x < mu.x_size; ++x) {
      row[static_cast<size_t>(x)] = mu(u, x) * pred[x];
      norm += row[static_cast<size_t>(x)];
    }
    if (norm > 0.0) {
      std::vector<double> r = row;
      for (double& v : r) v /= norm;
      succ.set_row(u, Simplex(std::move(r)));
    } else {
      succ.set_row(u, pred);
    }
  }
  return succ;
}

ExponentTable build_exponent(double s_t, const DistortionFn& rho,
                             const std::vector<double>& q_cont,
                             const BAAConfig& cfg) {
  ExponentTable A;
  A.x_size = rho.x_size;
  A.u_size = rho.u_size;
  A.q_cont = q_cont;
  A.a.resize(static_cast<size_t>(A.x_size) * A.u_size);
  for (int x = 0; x < A.x_size; ++x)
    for (int u = 0; u < A.u_size; ++u) {
      double e = s_t * rho(x, u) - q_cont[static_cast<size_t>(u)];
      if (e > cfg.exponent_cap) {
        e = cfg.exponent_cap;
        A.capped = true;
      } else if (e < -cfg.exponent_cap) {
        e = -cfg.exponent_cap;
        A.capped = true;
      }
      A.a[static_cast<size_t>(x * A.u_size + u)] = std::exp(e);
    }
  return A;
}

}  // namespace

ExponentTable exponent_factor(const InformationState& b, const Kernel& w,
                              double s_t, const DistortionFn& rho,
                              const ContinuationLookup& cont,
                              const PolicyBlock& mu_current, int u_prev,
                              const BAAConfig& cfg) {
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  const InformationState succ =
      successor_state(pred, mu_current, b.stage >= 0 ? b.stage + 1 : -1);
  std::vector<double> q_cont(static_cast<size_t>(mu_current.u_size), 0.0);
  cont.values(succ, q_cont);
  return build_exponent(s_t, rho, q_cont, cfg);
}

PolicyBlock policy_update(const Simplex& nu_k, const ExponentTable& A) {
  for (int u = 0; u < nu_k.size(); ++u)
    if (nu_k[u] <= 0.0)
      throw DegenerateDistributionError(
          "policy_update: output distribution must have non-zero components");
  PolicyBlock mu;
  mu.x_size = A.x_size;
  mu.u_size = A.u_size;
  mu.p.resize(static_cast<size_t>(A.x_size) * A.u_size);
  for (int x = 0; x < A.x_size; ++x) {
    double z = 0.0;
    for (int u = 0; u < A.u_size; ++u) z += nu_k[u] * A(x, u);
    for (int u = 0; u < A.u_size; ++u)
      mu.p[static_cast<size_t>(x * A.u_size + u)] = nu_k[u] * A(x, u) / z;
  }
  return mu;
}

Simplex output_update(const Simplex& nu_k, const ExponentTable& A,
                      const InformationState& b, const Kernel& w, int u_prev,
                      double floor) {
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  std::vector<double> next(static_cast<size_t>(A.u_size), 0.0);
  for (int u = 0; u < A.u_size; ++u) {
    double c = 0.0;
    for (int x = 0; x < A.x_size; ++x) {
      double z = 0.0;
      for (int up = 0; up < A.u_size; ++up) z += nu_k[up] * A(x, up);
      c += pred[x] * A(x, u) / z;
    }
    next[static_cast<size_t>(u)] = nu_k[u] * c;
  }
  return floored(normalize(next), floor);
}

double q_evaluate(const InformationState& b, const Kernel& w,
                  const PolicyBlock& mu_k, const Simplex& nu_k,
                  const ContinuationLookup& cont, double s_t, double D_t,
                  const DistortionFn& rho, int u_prev, double floor) {
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  const InformationState succ =
      successor_state(pred, mu_k, b.stage >= 0 ? b.stage + 1 : -1);
  std::vector<double> q_cont(static_cast<size_t>(mu_k.u_size), 0.0);
  cont.values(succ, q_cont);

  const Simplex nu_f = floored(nu_k, floor);
  double q = s_t * D_t;
  for (int x = 0; x < mu_k.x_size; ++x) {
    const Simplex mu_row = floored(mu_k.row(x), floor);
    for (int u = 0; u < mu_k.u_size; ++u) {
      const double weight = pred[x] * mu_row[u];
      if (weight <= 0.0) continue;
      q += weight * (std::log(mu_row[u] / nu_f[u]) - s_t * rho(x, u) +
                     q_cont[static_cast<size_t>(u)]);
    }
  }
  return q;
}

StageBounds bounds(const Simplex& nu_k, const ExponentTable& A,
                   const InformationState& b, const Kernel& w, int u_prev,
                   double s_t, double D_s) {
  const Simplex pred = predicted_state_marginal(b, w, u_prev);

  std::vector<double> z(static_cast<size_t>(A.x_size));
  for (int x = 0; x < A.x_size; ++x) {
    double acc = 0.0;
    for (int u = 0; u < A.u_size; ++u) acc += nu_k[u] * A(x, u);
    z[static_cast<size_t>(x)] = acc;
  }
  double first = 0.0;
  for (int x = 0; x < A.x_size; ++x)
    first -= pred[x] * std::log(z[static_cast<size_t>(x)]);

  std::vector<double> c(static_cast<size_t>(A.u_size), 0.0);
  for (int u = 0; u < A.u_size; ++u) {
    double acc = 0.0;
    for (int x = 0; x < A.x_size; ++x)
      acc += pred[x] * A(x, u) / z[static_cast<size_t>(x)];
    c[static_cast<size_t>(u)] = acc;
  }

  double t_upper = 0.0;
  for (int u = 0; u < A.u_size; ++u)
    if (c[static_cast<size_t>(u)] > 0.0)
      t_upper -= nu_k[u] * c[static_cast<size_t>(u)] *
                 std::log(c[static_cast<size_t>(u)]);
  // max over u, ties resolved toward the lowest symbol index
  double c_max = c[0];
  for (int u = 1; u < A.u_size; ++u)
    if (c[static_cast<size_t>(u)] > c_max) c_max = c[static_cast<size_t>(u)];
  const double t_lower = -std::log(c_max);

  StageBounds out;
  out.upper = first + t_upper + s_t * D_s;
  out.lower = first + t_lower + s_t * D_s;
  out.gap = t_upper - t_lower;
  return out;
}

StageSolution solve_stage(const InformationState& b, const Kernel& w,
                          double s_t, double D_t, const DistortionFn& rho,
                          const ContinuationLookup& cont, int u_prev,
                          const BAAConfig& cfg, const IterationSink& sink,
                          const Simplex* nu0) {
  cfg.validate();
  const Simplex pred = predicted_state_marginal(b, w, u_prev);
  const int u_size = rho.u_size;
  const int x_size = rho.x_size;
  const int next_stage = b.stage >= 0 ? b.stage + 1 : -1;

  Simplex nu = nu0 ? floored(*nu0, cfg.prob_floor) : Simplex::uniform(u_size);
  PolicyBlock mu = PolicyBlock::constant(x_size, nu);

  StageSolution sol;
  sol.mu = mu;
  sol.nu = nu;

  std::vector<double> q_cont(static_cast<size_t>(u_size), 0.0);
  std::vector<double> q_cont_prev(static_cast<size_t>(u_size), 0.0);
  std::vector<double> q_cont_prev2(static_cast<size_t>(u_size), 0.0);
  bool pinned = false;
  int flip_count = 0;
  double prev_objective = std::numeric_limits<double>::infinity();
  bool prev_cont_same = false;

  for (int k = 1; k <= cfg.max_iterations; ++k) {
    if (!pinned) {
      const InformationState succ = successor_state(pred, mu, next_stage);
      q_cont_prev2 = q_cont_prev;
      q_cont_prev = q_cont;
      cont.values(succ, q_cont);
      // Grid-cell lookups can alternate between two assignments once the
      // iterate straddles a cell boundary; pin the cheaper one so the
      // inner minimization can close its gap.
      const bool changed = k > 1 && q_cont != q_cont_prev;
      if (k > 2 && changed && q_cont == q_cont_prev2) {
        ++flip_count;
      } else if (changed) {
        flip_count = 0;
      }
      if (flip_count >= 4 || (k > 1000 && changed)) {
        double sum_now = 0.0, sum_prev = 0.0;
        for (int u = 0; u < u_size; ++u) {
          sum_now += nu[u] * q_cont[static_cast<size_t>(u)];
          sum_prev += nu[u] * q_cont_prev[static_cast<size_t>(u)];
        }
        if (sum_prev < sum_now) q_cont = q_cont_prev;
        pinned = true;
        sol.continuation_pinned = true;
      }
      prev_cont_same = k > 1 && q_cont == q_cont_prev;
    } else {
      prev_cont_same = true;
    }
    const ExponentTable A = build_exponent(s_t, rho, q_cont, cfg);
    if (A.capped) sol.exponent_capped = true;

    const PolicyBlock mu_next = policy_update(nu, A);
    const Simplex nu_next = output_update(nu, A, b, w, u_prev, cfg.prob_floor);
    const StageBounds bd = bounds(nu, A, b, w, u_prev, s_t, 0.0);
    if (bd.gap < -1e-9) sol.negative_gap = true;

    // Achieved distortion of the fresh iterate; enters both the bounds'
    // s*D_s term and the logged objective.
    double dist = 0.0;
    for (int x = 0; x < x_size; ++x)
      for (int u = 0; u < u_size; ++u) dist += pred[x] * mu_next(u, x) * rho(x, u);

    const double upper = bd.upper + s_t * dist;
    const double lower = bd.lower + s_t * dist;

    // Frozen-continuation objective of the post-sweep pair:
    //   sum P mu [log(mu/nu) - log A] + s * D_s.
    double objective = s_t * dist;
    double after_mu_step = s_t * dist;  // value right after the policy update
    for (int x = 0; x < x_size; ++x) {
      double z = 0.0;
      for (int u = 0; u < u_size; ++u) z += nu[u] * A(x, u);
      after_mu_step -= pred[x] * std::log(z);
      for (int u = 0; u < u_size; ++u) {
        const double weight = pred[x] * mu_next(u, x);
        if (weight <= 0.0) continue;
        objective +=
            weight * (std::log(mu_next(u, x) / nu_next[u]) - std::log(A(x, u)));
      }
    }

    if (objective > after_mu_step + 1e-9)
      throw NumericalConsistencyError(
          "solve_stage: objective rose across the output-update sub-step by " +
          std::to_string(objective - after_mu_step));
    // The alternating minimization descends on the stage value with the
    // thresholds held fixed; the achieved-distortion term of the logged
    // objective moves with the iterate and is excluded here.
    const double j_value = objective - s_t * dist;
    if (prev_cont_same && j_value > prev_objective + 1e-6)
      throw NumericalConsistencyError(
          "solve_stage: objective rose between iterations by " +
          std::to_string(j_value - prev_objective) +
          " with an unchanged continuation");
    prev_objective = j_value;

    if (sink) sink({k, bd.gap, objective, upper, lower});

    mu = mu_next;
    nu = nu_next;
    sol.iterations = k;
    sol.final_gap = bd.gap;
    if (bd.gap <= cfg.epsilon) {
      sol.converged = true;
      break;
    }
  }

  sol.mu = mu;
  sol.nu = nu;
  sol.q_value =
      q_evaluate(b, w, mu, nu, cont, s_t, D_t, rho, u_prev, cfg.prob_floor);

  // Diagnostics at the matched output distribution.
  std::vector<double> matched(static_cast<size_t>(u_size), 0.0);
  for (int u = 0; u < u_size; ++u)
    for (int x = 0; x < x_size; ++x) matched[static_cast<size_t>(u)] += pred[x] * mu(u, x);
  const Simplex nu_matched = floored(normalize(matched), cfg.prob_floor);
  double mi = 0.0, dist = 0.0;
  for (int x = 0; x < x_size; ++x) {
    const Simplex mu_row = floored(mu.row(x), cfg.prob_floor);
    for (int u = 0; u < u_size; ++u) {
      mi += pred[x] * mu_row[u] * std::log(mu_row[u] / nu_matched[u]);
      dist += pred[x] * mu(u, x) * rho(x, u);
    }
  }
  sol.mi_nats = mi;
  sol.distortion = dist;
  return sol;
}

}  // namespace dirollout
