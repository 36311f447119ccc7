#include "dirollout/model.hpp"

#include <cmath>

namespace dirollout {

namespace {

void check_stage(int a, int b, const char* what) {
  if (a >= 0 && b >= 0 && a != b)
    throw Error(std::string(what) + ": stage mismatch");
}

}  // namespace

// --- Kernel -----------------------------------------------------------------

Simplex Kernel::row(int x_prev, int u_prev) const {
  std::vector<double> r(static_cast<size_t>(x_size));
  for (int x = 0; x < x_size; ++x) r[static_cast<size_t>(x)] = (*this)(x, x_prev, u_prev);
  return Simplex(std::move(r));
}

void Kernel::validate() const {
  if (x_size < 2 || u_size < 1) throw Error("Kernel: bad alphabet sizes");
  if (w.size() != static_cast<size_t>(x_size) * u_size * x_size)
    throw Error("Kernel: table size mismatch");
  for (int xp = 0; xp < x_size; ++xp)
    for (int up = 0; up < u_size; ++up) row(xp, up);  // each row a simplex
}

Kernel Kernel::binary_symmetric(double a0, double a1) {
  Kernel k;
  k.x_size = 2;
  k.u_size = 2;
  k.w.resize(8);
  const double flip[2] = {a0, a1};
  for (int xp = 0; xp < 2; ++xp)
    for (int up = 0; up < 2; ++up)
      for (int x = 0; x < 2; ++x)
        k.w[static_cast<size_t>((xp * 2 + up) * 2 + x)] =
            (x == xp) ? 1.0 - flip[up] : flip[up];
  return k;
}

Kernel Kernel::from_initial(const Simplex& p0, int u_size) {
  Kernel k;
  k.x_size = p0.size();
  k.u_size = u_size;
  k.w.resize(static_cast<size_t>(k.x_size) * u_size * k.x_size);
  for (int xp = 0; xp < k.x_size; ++xp)
    for (int up = 0; up < u_size; ++up)
      for (int x = 0; x < k.x_size; ++x)
        k.w[static_cast<size_t>((xp * u_size + up) * k.x_size + x)] = p0[x];
  return k;
}

// --- Policy -----------------------------------------------------------------

Simplex Policy::row(int u_prev, int x) const {
  std::vector<double> r(static_cast<size_t>(u_size));
  for (int u = 0; u < u_size; ++u) r[static_cast<size_t>(u)] = (*this)(u, u_prev, x);
  return Simplex(std::move(r));
}

void Policy::set_row(int u_prev, int x, const Simplex& r) {
  for (int u = 0; u < u_size; ++u)
    p[static_cast<size_t>((u_prev * x_size + x) * u_size + u)] = r[u];
}

void Policy::validate() const {
  if (p.size() != static_cast<size_t>(contexts) * x_size * u_size)
    throw Error("Policy: table size mismatch");
  for (int c = 0; c < contexts; ++c)
    for (int x = 0; x < x_size; ++x) row(c, x);
}

Policy Policy::uniform(int stage, int contexts, int x_size, int u_size) {
  Policy mu;
  mu.stage = stage;
  mu.contexts = contexts;
  mu.x_size = x_size;
  mu.u_size = u_size;
  mu.p.assign(static_cast<size_t>(contexts) * x_size * u_size, 1.0 / u_size);
  return mu;
}

// --- OutputDistribution -----------------------------------------------------

Simplex OutputDistribution::row(int u_prev) const {
  std::vector<double> r(static_cast<size_t>(u_size));
  for (int u = 0; u < u_size; ++u) r[static_cast<size_t>(u)] = (*this)(u, u_prev);
  return Simplex(std::move(r));
}

void OutputDistribution::set_row(int u_prev, const Simplex& r) {
  for (int u = 0; u < u_size; ++u)
    p[static_cast<size_t>(u_prev * u_size + u)] = r[u];
}

void OutputDistribution::validate() const {
  if (p.size() != static_cast<size_t>(contexts) * u_size)
    throw Error("OutputDistribution: table size mismatch");
  for (int c = 0; c < contexts; ++c) row(c);
}

// --- InformationState -------------------------------------------------------

Simplex InformationState::row(int u_prev) const {
  std::vector<double> r(static_cast<size_t>(x_size));
  for (int x = 0; x < x_size; ++x) r[static_cast<size_t>(x)] = (*this)(x, u_prev);
  return Simplex(std::move(r));
}

void InformationState::set_row(int u_prev, const Simplex& r) {
  for (int x = 0; x < x_size; ++x)
    p[static_cast<size_t>(u_prev * x_size + x)] = r[x];
}

void InformationState::validate() const {
  if (p.size() != static_cast<size_t>(contexts) * x_size)
    throw Error("InformationState: table size mismatch");
  for (int c = 0; c < contexts; ++c) row(c);
}

InformationState InformationState::uniform(int stage, int contexts,
                                           int x_size) {
  InformationState b;
  b.stage = stage;
  b.contexts = contexts;
  b.x_size = x_size;
  b.p.assign(static_cast<size_t>(contexts) * x_size, 1.0 / x_size);
  return b;
}

// --- ControlMarginal ---------------------------------------------------------

void ControlMarginal::validate() const {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw Error("ControlMarginal: negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexSumTolerance)
    throw Error("ControlMarginal: entries sum to " + std::to_string(sum));
}

// --- Operations ---------------------------------------------------------------

Simplex predicted_state_marginal(const InformationState& b, const Kernel& w,
                                 int u_prev) {
  std::vector<double> out(static_cast<size_t>(w.x_size), 0.0);
  for (int x = 0; x < w.x_size; ++x) {
    double acc = 0.0;
    for (int xp = 0; xp < w.x_size; ++xp) acc += w(x, xp, u_prev) * b(xp, u_prev);
    out[static_cast<size_t>(x)] = acc;
  }
  return normalize(out);
}

Simplex belief_update(const InformationState& b, const Policy& mu,
                      const Kernel& w, int u_prev, int u) {
  check_stage(b.stage, mu.stage, "belief_update");
  std::vector<double> post(static_cast<size_t>(w.x_size), 0.0);
  double norm = 0.0;
  for (int x = 0; x < w.x_size; ++x) {
    double pred = 0.0;
    for (int xp = 0; xp < w.x_size; ++xp) pred += w(x, xp, u_prev) * b(xp, u_prev);
    const double joint = mu(u, u_prev, x) * pred;
    post[static_cast<size_t>(x)] = joint;
    norm += joint;
  }
  if (norm <= 0.0)
    throw UnreachableOutputError(
        "belief_update: control " + std::to_string(u) + " in context " +
        std::to_string(u_prev) + " has probability zero");
  for (double& v : post) v /= norm;
  return Simplex(std::move(post));
}

SuccessorBeliefs successor_beliefs(const InformationState& b, const Policy& mu,
                                   const Kernel& w, int u_prev) {
  SuccessorBeliefs out;
  out.by_control.resize(static_cast<size_t>(mu.u_size));
  for (int u = 0; u < mu.u_size; ++u) {
    try {
      out.by_control[static_cast<size_t>(u)] = belief_update(b, mu, w, u_prev, u);
    } catch (const UnreachableOutputError&) {
      out.by_control[static_cast<size_t>(u)] = std::nullopt;
    }
  }
  return out;
}

Simplex output_distribution(const InformationState& b, const Policy& mu,
                            const Kernel& w, int u_prev) {
  check_stage(b.stage, mu.stage, "output_distribution");
  std::vector<double> nu(static_cast<size_t>(mu.u_size), 0.0);
  for (int u = 0; u < mu.u_size; ++u) {
    double acc = 0.0;
    for (int x = 0; x < w.x_size; ++x) {
      double pred = 0.0;
      for (int xp = 0; xp < w.x_size; ++xp) pred += w(x, xp, u_prev) * b(xp, u_prev);
      acc += mu(u, u_prev, x) * pred;
    }
    nu[static_cast<size_t>(u)] = acc;
  }
  return normalize(nu);
}

OutputDistribution output_distribution_all(const InformationState& b,
                                           const Policy& mu, const Kernel& w) {
  OutputDistribution nu;
  nu.stage = mu.stage;
  nu.contexts = mu.contexts;
  nu.u_size = mu.u_size;
  nu.p.resize(static_cast<size_t>(nu.contexts) * nu.u_size);
  for (int c = 0; c < nu.contexts; ++c)
    nu.set_row(c, output_distribution(b, mu, w, c));
  return nu;
}

ControlMarginal control_marginal_update(const ControlMarginal& m,
                                        const OutputDistribution& nu) {
  check_stage(m.stage, nu.stage, "control_marginal_update");
  ControlMarginal out;
  out.stage = nu.stage >= 0 ? nu.stage + 1 : -1;
  out.p.assign(static_cast<size_t>(nu.u_size), 0.0);
  for (int u = 0; u < nu.u_size; ++u) {
    double acc = 0.0;
    for (int up = 0; up < m.size(); ++up) acc += nu(u, up) * m[up];
    out.p[static_cast<size_t>(u)] = acc;
  }
  return out;
}

InformationState propagate_information_state(const InformationState& b,
                                             const Policy& mu, const Kernel& w,
                                             const ControlMarginal& m) {
  InformationState next;
  next.stage = b.stage >= 0 ? b.stage + 1 : -1;
  next.contexts = mu.u_size;
  next.x_size = w.x_size;
  next.p.resize(static_cast<size_t>(next.contexts) * next.x_size);
  for (int u = 0; u < mu.u_size; ++u) {
    // unnormalized joint P(x_t, u_t = u), mixed over the current contexts
    std::vector<double> joint(static_cast<size_t>(w.x_size), 0.0);
    double norm = 0.0;
    for (int up = 0; up < b.contexts; ++up) {
      const double weight = m[up];
      if (weight <= 0.0) continue;
      for (int x = 0; x < w.x_size; ++x) {
        double pred = 0.0;
        for (int xp = 0; xp < w.x_size; ++xp) pred += w(x, xp, up) * b(xp, up);
        const double v = weight * mu(u, up, x) * pred;
        joint[static_cast<size_t>(x)] += v;
        norm += v;
      }
    }
    if (norm > 0.0) {
      for (double& v : joint) v /= norm;
      next.set_row(u, Simplex(joint));
    } else {
      next.set_row(u, Simplex::uniform(w.x_size));  // zero-weight context
    }
  }
  return next;
}

}  // namespace dirollout
