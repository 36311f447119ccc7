// Seeded random-instance generators shared by the unit and acceptance
// suites.
#pragma once

#include <random>

#include "dirollout/problem.hpp"

namespace dirollout::testing {

inline Simplex random_interior_simplex(std::mt19937_64& rng, int size,
                                       double margin = 0.05) {
  std::uniform_real_distribution<double> dist(margin, 1.0 - margin);
  std::vector<double> w(static_cast<size_t>(size));
  for (auto& v : w) v = dist(rng);
  double sum = 0.0;
  for (double v : w) sum += v;
  for (auto& v : w) v /= sum;
  return Simplex(w);
}

inline Policy random_policy(std::mt19937_64& rng, int stage, int contexts,
                            int x_size, int u_size, double margin = 0.05) {
  Policy mu = Policy::uniform(stage, contexts, x_size, u_size);
  for (int c = 0; c < contexts; ++c)
    for (int x = 0; x < x_size; ++x)
      mu.set_row(c, x, random_interior_simplex(rng, u_size, margin));
  return mu;
}

inline InformationState random_state(std::mt19937_64& rng, int stage,
                                     int contexts, int x_size,
                                     double margin = 0.05) {
  InformationState b = InformationState::uniform(stage, contexts, x_size);
  for (int c = 0; c < contexts; ++c)
    b.set_row(c, random_interior_simplex(rng, x_size, margin));
  return b;
}

inline ControlMarginal random_marginal(std::mt19937_64& rng, int stage,
                                       int size) {
  ControlMarginal m;
  m.stage = stage;
  m.p = random_interior_simplex(rng, size).probs();
  return m;
}

// Random time-invariant controlled-BSC instance with Hamming distortion.
inline ProblemInstance random_instance(std::mt19937_64& rng, int horizon,
                                       double s_min = -3.0,
                                       double s_max = -0.25,
                                       bool uniform_mu0 = false) {
  std::uniform_real_distribution<double> alpha(0.1, 0.9);
  std::uniform_real_distribution<double> s_dist(s_min, s_max);
  std::uniform_real_distribution<double> d_dist(0.0, 0.3);
  const Simplex p0 = random_interior_simplex(rng, 2);
  const Policy mu0 = uniform_mu0 ? Policy::uniform(0, 1, 2, 2)
                                 : random_policy(rng, 0, 1, 2, 2);
  return ProblemInstance::binary_symmetric(alpha(rng), alpha(rng), horizon,
                                           s_dist(rng), d_dist(rng), p0, mu0);
}

}  // namespace dirollout::testing
