#include <doctest.h>

#include <random>

#include "dirollout/simplex.hpp"

using namespace dirollout;

TEST_CASE("normalize divides by the sum and preserves order") {
  const Simplex s = normalize({2.0, 2.0});
  CHECK(s[0] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-15));

  const Simplex id = normalize({1.0, 0.0});
  CHECK(id[0] == 1.0);
  CHECK(id[1] == 0.0);

  const Simplex r = normalize({0.29, 0.21});
  CHECK(r[0] == doctest::Approx(0.58).epsilon(1e-15));
  CHECK(r[1] == doctest::Approx(0.42).epsilon(1e-15));
  CHECK(r[0] + r[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("normalize rejects an all-zero vector") {
  CHECK_THROWS_AS(normalize({0.0, 0.0, 0.0}), DegenerateDistributionError);
}

TEST_CASE("normalize rejects negative entries") {
  CHECK_THROWS_AS(normalize({0.5, -0.1}), Error);
}

TEST_CASE("Simplex constructor enforces the invariants") {
  CHECK_THROWS_AS(Simplex({0.5, 0.4}), Error);         // sums to 0.9
  CHECK_THROWS_AS(Simplex({1.2, -0.2}), Error);        // negative entry
  CHECK_NOTHROW(Simplex({0.3, 0.7}));
  CHECK_NOTHROW(Simplex(std::vector<double>{1.0}));
}

TEST_CASE("normalized random vectors are valid simplexes") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> w(4);
    for (auto& v : w) v = dist(rng);
    w[static_cast<size_t>(trial % 4)] += 1e-6;  // keep at least one positive
    const Simplex s = normalize(w);
    double sum = 0.0;
    for (int i = 0; i < s.size(); ++i) {
      CHECK(s[i] >= 0.0);
      CHECK(s[i] <= 1.0);
      sum += s[i];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // order preserved: ratios match the inputs
    for (int i = 1; i < s.size(); ++i)
      if (w[static_cast<size_t>(i - 1)] < w[static_cast<size_t>(i)])
        CHECK(s[i - 1] <= s[i]);
  }
}

TEST_CASE("floored clamps tiny entries and renormalizes") {
  const Simplex s = floored(Simplex({1.0, 0.0}), 1e-12);
  CHECK(s[1] >= 1e-13);
  CHECK(s[0] + s[1] == doctest::Approx(1.0).epsilon(1e-15));
  // no-op on interior distributions
  const Simplex t = floored(Simplex({0.3, 0.7}), 1e-12);
  CHECK(t[0] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("l1_distance is a metric on simplexes") {
  const Simplex a({0.3, 0.7});
  const Simplex b({0.5, 0.5});
  CHECK(l1_distance(a, a) == 0.0);
  CHECK(l1_distance(a, b) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(l1_distance(a, b) == l1_distance(b, a));
}
