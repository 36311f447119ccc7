#include <doctest.h>

#include <cstdlib>
#include <string>

#include "dirollout/config.hpp"

using namespace dirollout;

namespace {

const char* kExample1 = R"({
  "version": 1,
  "horizon": 100,
  "rolling_horizon": 5,
  "quantization": 20,
  "kernel": {"alpha0": 0.4, "alpha1": 0.8},
  "initial_state": [0.5, 0.5],
  "initial_policy": [[0.5, 0.5], [0.5, 0.5]],
  "distortion": "hamming",
  "s_schedule": -2.0,
  "d_schedule": 0.0,
  "epsilon_nats": 1e-6,
  "max_iterations": 10000,
  "rollout_rounds": 2
})";

}  // namespace

TEST_CASE("the worked configuration parses and expands its schedules") {
  const ProblemConfig cfg = parse_config_text(kExample1);
  CHECK(cfg.instance.horizon == 100);
  CHECK(cfg.settings.rolling_horizon == 5);
  CHECK(cfg.settings.quantization == 20);
  CHECK(cfg.instance.lagrange.s.size() == 101);
  CHECK(cfg.instance.lagrange.s[57] == -2.0);
  CHECK(cfg.instance.lagrange.D[0] == 0.0);
  CHECK(cfg.instance.kernel(1)(0, 0, 0) == doctest::Approx(0.6));
  CHECK(cfg.instance.kernel(1)(0, 0, 1) == doctest::Approx(0.2));
  CHECK(cfg.settings.rounds == 2);
  CHECK(!cfg.fingerprint.empty());
}

TEST_CASE("range violations name the offending field") {
  std::string bad = kExample1;
  const size_t pos = bad.find("0.4");
  bad.replace(pos, 3, "1.0");
  try {
    parse_config_text(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].find("kernel.alpha0") != std::string::npos);
  }
}

TEST_CASE("a positive multiplier violates the sign condition") {
  std::string bad = kExample1;
  const size_t pos = bad.find("-2.0");
  bad.replace(pos, 4, "0.25");
  try {
    parse_config_text(bad);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    bool found = false;
    for (const auto& v : e.violations)
      if (v.find("s_schedule") != std::string::npos &&
          v.find("<= 0") != std::string::npos)
        found = true;
    CHECK(found);
  }
}

TEST_CASE("every violation is collected, not just the first") {
  const char* text = R"({
    "horizon": 0,
    "rolling_horizon": 0,
    "quantization": 1,
    "kernel": {"alpha0": 2.0, "alpha1": -1.0},
    "s_schedule": 1.0
  })";
  try {
    parse_config_text(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.violations.size() >= 5);
  }
}

TEST_CASE("schedule arrays must match the horizon") {
  const char* text = R"({
    "horizon": 3,
    "kernel": {"alpha0": 0.4, "alpha1": 0.8},
    "s_schedule": [0.0, -1.0]
  })";
  try {
    parse_config_text(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    REQUIRE(e.violations.size() == 1);
    CHECK(e.violations[0].find("s_schedule") != std::string::npos);
    CHECK(e.violations[0].find("N+1") != std::string::npos);
  }
}

TEST_CASE("an inconsistent initial control marginal is rejected") {
  std::string text = kExample1;
  text.insert(text.rfind('}'), R"(,"initial_control_marginal": [0.9, 0.1])");
  try {
    parse_config_text(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.violations[0].find("initial_control_marginal") !=
          std::string::npos);
  }
}

TEST_CASE("fingerprints are stable and sensitive") {
  const ProblemConfig a = parse_config_text(kExample1);
  const ProblemConfig b = parse_config_text(kExample1);
  CHECK(a.fingerprint == b.fingerprint);

  std::string tweaked = kExample1;
  const size_t pos = tweaked.find("0.4");
  tweaked.replace(pos, 3, "0.41");
  const ProblemConfig c = parse_config_text(tweaked);
  CHECK(a.fingerprint != c.fingerprint);
}

TEST_CASE("explicit kernel stages are accepted") {
  const char* text = R"({
    "horizon": 2,
    "kernel": {"stages": [
      [0.6, 0.4, 0.2, 0.8, 0.4, 0.6, 0.8, 0.2],
      [0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5]
    ]},
    "s_schedule": -1.0
  })";
  const ProblemConfig cfg = parse_config_text(text);
  CHECK(cfg.instance.kernel(1)(0, 0, 0) == doctest::Approx(0.6));
  CHECK(cfg.instance.kernel(2)(0, 0, 0) == doctest::Approx(0.5));
}

TEST_CASE("malformed JSON is a config error") {
  CHECK_THROWS_AS(parse_config_text("{"), ConfigError);
}

TEST_CASE("worker resolution falls back to the environment") {
  setenv("DIROLLOUT_WORKERS", "3", 1);
  CHECK(resolve_workers(0) == 3);
  CHECK(resolve_workers(5) == 5);  // explicit request wins
  unsetenv("DIROLLOUT_WORKERS");
  CHECK(resolve_workers(0) >= 1);
}
