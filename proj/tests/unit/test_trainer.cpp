#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "dirollout/trainer.hpp"
#include "support/generators.hpp"

using namespace dirollout;
namespace dt = dirollout::testing;

namespace {

std::string temp_path(const char* name) {
  return std::string("trainer_test_") + name + ".json";
}

}  // namespace

TEST_CASE("a one-stage artifact holds the direct stage solutions") {
  std::mt19937_64 rng(131);
  const ProblemInstance inst = dt::random_instance(rng, 4);
  const BeliefGrid grid = build_uniform_grid(4, 2, 2);
  BAAConfig cfg;
  const OfflineArtifact artifact = train(inst, grid, 1, cfg, 1);
  REQUIRE(artifact.tables.size() == 1);
  CHECK(artifact.last_stage() == 4);
  CHECK(artifact.first_stage() == 4);

  ZeroContinuation cont;
  for (int gi = 0; gi < grid.size(); ++gi) {
    InformationState b = grid.point(gi);
    b.stage = 4;
    for (int c = 0; c < 2; ++c) {
      const StageSolution direct =
          solve_stage(b, inst.kernel(4), inst.lagrange.s[4],
                      inst.lagrange.D[4], inst.distortion(4), cont, c, cfg);
      const QEntry& entry = artifact.tables[0].at(gi, c);
      CHECK(entry.q == direct.q_value);
      CHECK(entry.mu == direct.mu);
    }
  }
}

TEST_CASE("backward consistency: the deeper stage solves against stage N") {
  std::mt19937_64 rng(137);
  const ProblemInstance inst = dt::random_instance(rng, 3);
  const BeliefGrid grid = build_uniform_grid(5, 2, 2);
  BAAConfig cfg;
  const OfflineArtifact artifact = train(inst, grid, 2, cfg, 1);
  REQUIRE(artifact.tables.size() == 2);

  // recompute stage N-1 entries with a continuation drawn from the stored
  // stage-N table
  TableContinuation cont(artifact.table_for_stage(3), grid);
  for (int gi = 0; gi < grid.size(); ++gi) {
    InformationState b = grid.point(gi);
    b.stage = 2;
    for (int c = 0; c < 2; ++c) {
      const StageSolution direct =
          solve_stage(b, inst.kernel(2), inst.lagrange.s[2],
                      inst.lagrange.D[2], inst.distortion(2), cont, c, cfg);
      CHECK(artifact.table_for_stage(2).at(gi, c).q ==
            doctest::Approx(direct.q_value).epsilon(1e-9));
    }
  }
}

TEST_CASE("grid values grow with the rolling horizon at s = 0") {
  const Simplex p0 = Simplex::uniform(2);
  const Policy mu0 = Policy::uniform(0, 1, 2, 2);
  const ProblemInstance inst =
      ProblemInstance::binary_symmetric(0.4, 0.8, 10, 0.0, 0.0, p0, mu0);
  const BeliefGrid grid = build_uniform_grid(5, 2, 2);
  BAAConfig cfg;
  double prev_min = -1.0;
  for (int ns : {1, 2, 3}) {
    const OfflineArtifact artifact = train(inst, grid, ns, cfg, 1);
    const QTable& deepest = artifact.table_for_stage(10 - ns + 1);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& e : deepest.entries) lowest = std::min(lowest, e.q);
    CHECK(lowest >= prev_min - 1e-9);
    prev_min = lowest;
  }
}

TEST_CASE("training is deterministic across runs and worker counts") {
  std::mt19937_64 rng(139);
  const ProblemInstance inst = dt::random_instance(rng, 3);
  const BeliefGrid grid = build_uniform_grid(6, 2, 2);
  BAAConfig cfg;
  const OfflineArtifact a = train(inst, grid, 2, cfg, 1, "fp");
  const OfflineArtifact b = train(inst, grid, 2, cfg, 4, "fp");
  const OfflineArtifact c = train(inst, grid, 2, cfg, 1, "fp");
  CHECK(a.same_content(b));
  CHECK(a.same_content(c));
}

TEST_CASE("train validates the rolling horizon") {
  std::mt19937_64 rng(149);
  const ProblemInstance inst = dt::random_instance(rng, 2);
  const BeliefGrid grid = build_uniform_grid(3, 2, 2);
  BAAConfig cfg;
  CHECK_THROWS_AS(train(inst, grid, 0, cfg, 1), Error);
  CHECK_THROWS_AS(train(inst, grid, 3, cfg, 1), Error);
}

TEST_CASE("widespread non-convergence is a training failure") {
  std::mt19937_64 rng(151);
  const ProblemInstance inst = dt::random_instance(rng, 2, -3.0, -1.0);
  const BeliefGrid grid = build_uniform_grid(3, 2, 2);
  BAAConfig cfg;
  cfg.epsilon = 1e-300;
  cfg.max_iterations = 2;
  CHECK_THROWS_AS(train(inst, grid, 1, cfg, 1), TrainingFailureError);
}

TEST_CASE("continuation_lookup reads the nearest stored entry") {
  std::mt19937_64 rng(157);
  const ProblemInstance inst = dt::random_instance(rng, 2);
  const BeliefGrid grid = build_uniform_grid(5, 2, 2);
  BAAConfig cfg;
  const OfflineArtifact artifact = train(inst, grid, 1, cfg, 1);
  const QTable& table = artifact.tables[0];

  // exact on grid points
  for (int gi = 0; gi < grid.size(); ++gi)
    for (int u = 0; u < 2; ++u)
      CHECK(continuation_lookup(table, grid, grid.point(gi), u) ==
            table.at(gi, u).q);

  // off-grid queries match a linear scan
  for (int trial = 0; trial < 100; ++trial) {
    const InformationState b = dt::random_state(rng, -1, 2, 2, 1e-3);
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int gi = 0; gi < grid.size(); ++gi) {
      double d = 0.0;
      for (int c = 0; c < 2; ++c)
        d += l1_distance(grid.point(gi).row(c), b.row(c));
      if (d < best_d) {
        best = gi;
        best_d = d;
      }
    }
    for (int u = 0; u < 2; ++u)
      CHECK(continuation_lookup(table, grid, b, u) == table.at(best, u).q);
  }

  // the TableContinuation fast path agrees with the spec-level lookup
  TableContinuation cont(table, grid);
  for (int trial = 0; trial < 100; ++trial) {
    const InformationState b = dt::random_state(rng, -1, 2, 2, 1e-3);
    for (int u = 0; u < 2; ++u)
      CHECK(cont.value(b, u) == continuation_lookup(table, grid, b, u));
  }
}

TEST_CASE("continuation_lookup rejects an empty table") {
  const BeliefGrid grid = build_uniform_grid(3, 2, 2);
  QTable empty;
  CHECK_THROWS_AS(
      continuation_lookup(empty, grid, InformationState::uniform(-1, 2, 2), 0),
      Error);
}

TEST_CASE("artifact round-trip is lossless") {
  std::mt19937_64 rng(163);
  const ProblemInstance inst = dt::random_instance(rng, 3);
  const BeliefGrid grid = build_uniform_grid(4, 2, 2);
  BAAConfig cfg;
  const OfflineArtifact artifact = train(inst, grid, 2, cfg, 1, "fp-roundtrip");
  const std::string path = temp_path("roundtrip");
  save_artifact(artifact, path);
  const OfflineArtifact loaded = load_artifact(path, "fp-roundtrip");
  CHECK(artifact.same_content(loaded));
  std::remove(path.c_str());
}

TEST_CASE("saved artifact bytes are identical across runs") {
  std::mt19937_64 rng(167);
  const ProblemInstance inst = dt::random_instance(rng, 2);
  const BeliefGrid grid = build_uniform_grid(4, 2, 2);
  BAAConfig cfg;
  const std::string p1 = temp_path("bytes1");
  const std::string p2 = temp_path("bytes2");
  save_artifact(train(inst, grid, 2, cfg, 1, "fp"), p1);
  save_artifact(train(inst, grid, 2, cfg, 3, "fp"), p2);
  std::ifstream f1(p1), f2(p2);
  const std::string s1((std::istreambuf_iterator<char>(f1)),
                       std::istreambuf_iterator<char>());
  const std::string s2((std::istreambuf_iterator<char>(f2)),
                       std::istreambuf_iterator<char>());
  CHECK(s1 == s2);
  CHECK(!s1.empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("a stale fingerprint is rejected on load") {
  std::mt19937_64 rng(173);
  const ProblemInstance inst = dt::random_instance(rng, 2);
  const BeliefGrid grid = build_uniform_grid(3, 2, 2);
  BAAConfig cfg;
  const std::string path = temp_path("stale");
  save_artifact(train(inst, grid, 1, cfg, 1, "fp-old"), path);
  CHECK_THROWS_AS(load_artifact(path, "fp-new"), StaleArtifactError);
  CHECK_NOTHROW(load_artifact(path, "fp-old"));
  CHECK_NOTHROW(load_artifact(path));  // no expectation, no staleness check
  std::remove(path.c_str());
}

TEST_CASE("version and format mismatches name the problem") {
  const std::string path = temp_path("version");
  {
    std::ofstream out(path);
    out << R"({"format":"dirollout-artifact","version":99,"fingerprint":"x",)"
        << R"("grid":{"n":2,"contexts":2,"x_size":2,"levels":[[0.25,0.75],[0.25,0.75]]},"tables":[]})";
  }
  try {
    load_artifact(path);
    FAIL("expected an artifact error");
  } catch (const ArtifactError& e) {
    const std::string what = e.what();
    CHECK(what.find("99") != std::string::npos);
    CHECK(what.find("1") != std::string::npos);
  }
  {
    std::ofstream out(path);
    out << "{not json";
  }
  CHECK_THROWS_AS(load_artifact(path), ArtifactError);
  std::remove(path.c_str());
}
