#include <doctest.h>

#include <cmath>
#include <random>

#include "dirollout/costs.hpp"
#include "dirollout/problem.hpp"
#include "support/enumeration.hpp"
#include "support/generators.hpp"

using namespace dirollout;
namespace dt = dirollout::testing;

namespace {

ControlMarginal uniform_marginal(int size) {
  ControlMarginal m;
  m.p.assign(static_cast<size_t>(size), 1.0 / size);
  return m;
}

}  // namespace

TEST_CASE("stage MI vanishes when the policy ignores the state") {
  const Kernel w = Kernel::binary_symmetric(0.4, 0.8);
  const InformationState b = InformationState::uniform(-1, 2, 2);
  Policy mu = Policy::uniform(-1, 2, 2, 2);
  for (int c = 0; c < 2; ++c) {
    mu.set_row(c, 0, Simplex({0.7, 0.3}));
    mu.set_row(c, 1, Simplex({0.7, 0.3}));
  }
  OutputDistribution nu;
  nu.contexts = 2;
  nu.u_size = 2;
  nu.p = {0.7, 0.3, 0.7, 0.3};
  CHECK(stage_mutual_information(b, mu, w, nu, uniform_marginal(2)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a deterministic policy over a uniform marginal reveals one bit") {
  const Kernel w = Kernel::binary_symmetric(0.5, 0.5);
  const InformationState b = InformationState::uniform(-1, 2, 2);
  Policy mu = Policy::uniform(-1, 2, 2, 2);
  for (int c = 0; c < 2; ++c) {
    mu.set_row(c, 0, Simplex::point_mass(2, 0));
    mu.set_row(c, 1, Simplex::point_mass(2, 1));
  }
  const OutputDistribution nu = output_distribution_all(b, mu, w);
  const double mi = stage_mutual_information(b, mu, w, nu, uniform_marginal(2));
  CHECK(mi == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("stage MI matches the enumerated joint on random tiny instances") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const ProblemInstance inst = dt::random_instance(rng, 2);
    dt::TinyInstance tiny{&inst, {inst.initial_policy}};
    for (int t = 1; t <= 2; ++t)
      tiny.policies.push_back(dt::random_policy(rng, t, 2, 2, 2));

    InformationState b = inst.initial_belief();
    ControlMarginal m = inst.initial_marginal();
    for (int t = 1; t <= 2; ++t) {
      const Policy& mu = tiny.policies[static_cast<size_t>(t)];
      const OutputDistribution nu =
          output_distribution_all(b, mu, inst.kernel(t));
      const double mi = stage_mutual_information(b, mu, inst.kernel(t), nu, m);
      const double exact = dt::exact_stage_mi_memory1(tiny, t);
      CHECK(mi == doctest::Approx(exact).epsilon(1e-10));
      const InformationState b_next =
          propagate_information_state(b, mu, inst.kernel(t), m);
      m = control_marginal_update(m, nu);
      b = b_next;
    }
  }
}

TEST_CASE("matched output distribution minimizes the stage MI expression") {
  std::mt19937_64 rng(43);
  const Kernel w = Kernel::binary_symmetric(0.3, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    const InformationState b = dt::random_state(rng, -1, 2, 2);
    const Policy mu = dt::random_policy(rng, -1, 2, 2, 2);
    const ControlMarginal m = dt::random_marginal(rng, -1, 2);
    const OutputDistribution matched = output_distribution_all(b, mu, w);
    const double at_matched = stage_mutual_information(b, mu, w, matched, m);
    CHECK(at_matched >= -1e-9);
    for (int draw = 0; draw < 100; ++draw) {
      OutputDistribution probe = matched;
      for (int c = 0; c < 2; ++c)
        probe.set_row(c, dt::random_interior_simplex(rng, 2, 0.01));
      const double at_probe = stage_mutual_information(b, mu, w, probe, m);
      CHECK(at_probe >= at_matched - 1e-12);
    }
  }
}

TEST_CASE("directed information is the plain sum") {
  CHECK(directed_information({}) == 0.0);
  CHECK(directed_information({0.0, 0.0, 0.0}) == 0.0);
  const double ln2 = std::log(2.0);
  CHECK(directed_information({ln2, ln2}) ==
        doctest::Approx(2 * ln2).epsilon(1e-15));
}

TEST_CASE("expected distortion of the identity policy is zero under Hamming") {
  const Kernel w = Kernel::binary_symmetric(0.4, 0.8);
  const InformationState b = InformationState::uniform(-1, 2, 2);
  Policy mu = Policy::uniform(-1, 2, 2, 2);
  for (int c = 0; c < 2; ++c) {
    mu.set_row(c, 0, Simplex::point_mass(2, 0));
    mu.set_row(c, 1, Simplex::point_mass(2, 1));
  }
  CHECK(expected_distortion(b, mu, w, DistortionFn::hamming(2),
                            uniform_marginal(2)) == 0.0);
}

TEST_CASE("a uniform policy pays half the Hamming mass regardless of belief") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const Kernel w = Kernel::binary_symmetric(0.05 + 0.04 * (trial % 20), 0.5);
    const InformationState b = dt::random_state(rng, -1, 2, 2);
    const Policy mu = Policy::uniform(-1, 2, 2, 2);
    const ControlMarginal m = dt::random_marginal(rng, -1, 2);
    CHECK(expected_distortion(b, mu, w, DistortionFn::hamming(2), m) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("expected distortion is linear in the policy") {
  std::mt19937_64 rng(53);
  const Kernel w = Kernel::binary_symmetric(0.35, 0.65);
  const DistortionFn rho = DistortionFn::hamming(2);
  for (int trial = 0; trial < 30; ++trial) {
    const InformationState b = dt::random_state(rng, -1, 2, 2);
    const ControlMarginal m = dt::random_marginal(rng, -1, 2);
    const Policy mu_a = dt::random_policy(rng, -1, 2, 2, 2);
    const Policy mu_b = dt::random_policy(rng, -1, 2, 2, 2);
    const double lambda = 0.3;
    Policy mix = mu_a;
    for (size_t i = 0; i < mix.p.size(); ++i)
      mix.p[i] = lambda * mu_a.p[i] + (1 - lambda) * mu_b.p[i];
    const double d_mix = expected_distortion(b, mix, w, rho, m);
    const double d_blend = lambda * expected_distortion(b, mu_a, w, rho, m) +
                           (1 - lambda) * expected_distortion(b, mu_b, w, rho, m);
    CHECK(d_mix == doctest::Approx(d_blend).epsilon(1e-12));
  }
}

TEST_CASE("lagrangian_stage_cost arithmetic") {
  CHECK(lagrangian_stage_cost(0.0, 0.1, -2.0, 0.1) == 0.0);
  CHECK(lagrangian_stage_cost(0.5, 0.2, -2.0, 0.1) ==
        doctest::Approx(0.7).epsilon(1e-15));
  CHECK(lagrangian_stage_cost(0.42, 0.9, 0.0, 0.1) == 0.42);
}

TEST_CASE("LagrangeSchedule validation") {
  LagrangeSchedule sched;
  sched.s = {0.0, -1.0, -2.0};
  sched.D = {0.0, 0.1, 0.2};
  CHECK_NOTHROW(sched.validate(2));
  CHECK_THROWS_AS(sched.validate(3), Error);  // wrong length
  sched.s[1] = 0.5;
  CHECK_THROWS_AS(sched.validate(2), Error);  // positive multiplier
}
