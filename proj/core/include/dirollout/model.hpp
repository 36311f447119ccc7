#pragma once

#include <optional>
#include <vector>

#include "dirollout/simplex.hpp"

namespace dirollout {

// One stage of the transition model: w(x | x_prev, u_prev). Each
// (x_prev, u_prev) row is a distribution over the state alphabet.
struct Kernel {
  int x_size = 0;
  int u_size = 0;
  std::vector<double> w;  // [x_prev][u_prev][x], row-major

  double operator()(int x, int x_prev, int u_prev) const {
    return w[static_cast<size_t>((x_prev * u_size + u_prev) * x_size + x)];
  }
  Simplex row(int x_prev, int u_prev) const;
  void validate() const;

  // Controlled binary symmetric chain: under u_prev = 0 the state flips
  // with probability a0, under u_prev = 1 with probability a1.
  static Kernel binary_symmetric(double a0, double a1);

  // Stage-0 surrogate: every row equals the initial state distribution, so
  // the predicted marginal is p0 regardless of the incoming belief.
  static Kernel from_initial(const Simplex& p0, int u_size);

  bool operator==(const Kernel& other) const = default;
};

// Randomized control policy mu_t = P_t(u_t | u_prev, x_t). Stage 0 uses a
// single dummy context.
struct Policy {
  int stage = -1;
  int contexts = 0;
  int x_size = 0;
  int u_size = 0;
  std::vector<double> p;  // [u_prev][x][u], row-major

  double operator()(int u, int u_prev, int x) const {
    return p[static_cast<size_t>((u_prev * x_size + x) * u_size + u)];
  }
  Simplex row(int u_prev, int x) const;
  void set_row(int u_prev, int x, const Simplex& r);
  void validate() const;

  static Policy uniform(int stage, int contexts, int x_size, int u_size);

  bool operator==(const Policy& other) const = default;
};

// nu_t = P_t(u_t | u_prev), the control distribution induced by belief,
// kernel and policy.
struct OutputDistribution {
  int stage = -1;
  int contexts = 0;
  int u_size = 0;
  std::vector<double> p;  // [u_prev][u]

  double operator()(int u, int u_prev) const {
    return p[static_cast<size_t>(u_prev * u_size + u)];
  }
  Simplex row(int u_prev) const;
  void set_row(int u_prev, const Simplex& r);
  void validate() const;

  bool operator==(const OutputDistribution& other) const = default;
};

// The information state b_t = P_t(x_{t-1} | u_prev): one belief over the
// previous state per previous-control context.
struct InformationState {
  int stage = -1;
  int contexts = 0;
  int x_size = 0;
  std::vector<double> p;  // [u_prev][x]

  double operator()(int x, int u_prev) const {
    return p[static_cast<size_t>(u_prev * x_size + x)];
  }
  Simplex row(int u_prev) const;
  void set_row(int u_prev, const Simplex& r);
  void validate() const;

  static InformationState uniform(int stage, int contexts, int x_size);

  bool operator==(const InformationState& other) const = default;
};

// P_t(u_prev): the weight attached to each context when stage quantities
// are averaged.
struct ControlMarginal {
  int stage = -1;
  std::vector<double> p;

  int size() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<size_t>(i)]; }
  void validate() const;

  bool operator==(const ControlMarginal& other) const = default;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// P(x_t | u_prev) = sum_{x_prev} w(x_t | x_prev, u_prev) b(x_prev | u_prev).
Simplex predicted_state_marginal(const InformationState& b, const Kernel& w,
                                 int u_prev);

// One step of the belief recursion: the posterior over x_t given that the
// context was u_prev and the control came out u. Throws
// UnreachableOutputError when u has probability zero.
Simplex belief_update(const InformationState& b, const Policy& mu,
                      const Kernel& w, int u_prev, int u);

// belief_update batched over every control outcome. Entries for controls
// with zero probability are absent rather than fabricated.
struct SuccessorBeliefs {
  std::vector<std::optional<Simplex>> by_control;
};
SuccessorBeliefs successor_beliefs(const InformationState& b, const Policy& mu,
                                   const Kernel& w, int u_prev);

// nu(u | u_prev) = sum_{x_prev, x} mu(u | u_prev, x) w(x | x_prev, u_prev)
//                  b(x_prev | u_prev).
Simplex output_distribution(const InformationState& b, const Policy& mu,
                            const Kernel& w, int u_prev);
OutputDistribution output_distribution_all(const InformationState& b,
                                           const Policy& mu, const Kernel& w);

// m'(u) = sum_{u_prev} nu(u | u_prev) m(u_prev).
ControlMarginal control_marginal_update(const ControlMarginal& m,
                                        const OutputDistribution& nu);

// Propagates the full information state one stage forward under the
// memory-1 closure: the belief for the new context u mixes the per-context
// posteriors with weights proportional to nu(u | u_prev) m(u_prev).
// Contexts with zero marginal weight receive a uniform placeholder.
InformationState propagate_information_state(const InformationState& b,
                                             const Policy& mu, const Kernel& w,
                                             const ControlMarginal& m);

}  // namespace dirollout
