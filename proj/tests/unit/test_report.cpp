#include <doctest.h>

#include <cstdio>
#include <random>

#include "dirollout/report.hpp"
#include "support/generators.hpp"

using namespace dirollout;
namespace dt = dirollout::testing;

namespace {

RolloutTrajectory small_trajectory() {
  std::mt19937_64 rng(233);
  const ProblemInstance inst = dt::random_instance(rng, 5);
  SolverSettings settings;
  settings.quantization = 4;
  settings.rolling_horizon = 2;
  settings.workers = 1;
  RolloutConfig rcfg;
  rcfg.baa = settings.baa;
  return run_repeated(inst, settings, rcfg)[0].trajectory;
}

}  // namespace

TEST_CASE("emitted CSV re-parses and reproduces its totals") {
  const RolloutTrajectory traj = small_trajectory();
  const std::string text = trajectory_csv_text(traj);
  const std::vector<CsvRow> rows = parse_trajectory_csv_text(text);
  REQUIRE(rows.size() == traj.stages.size());

  double mi_sum = 0.0, lag_sum = 0.0, dist_sum = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].t == traj.stages[i].t);
    CHECK(rows[i].stage_mi_nats == traj.stages[i].mi_nats);  // exact round trip
    mi_sum += rows[i].stage_mi_nats;
    lag_sum += rows[i].lagrangian_stage_cost;
    dist_sum += rows[i].expected_distortion;
  }
  CHECK(mi_sum == doctest::Approx(traj.total_di_nats).epsilon(1e-9));
  CHECK(lag_sum == doctest::Approx(traj.total_lagrangian).epsilon(1e-9));
  CHECK(dist_sum == doctest::Approx(traj.total_distortion).epsilon(1e-9));
  CHECK(rows.back().cumulative_di_nats ==
        doctest::Approx(traj.total_di_nats).epsilon(1e-9));
}

TEST_CASE("the CSV column order is pinned") {
  const RolloutTrajectory traj = small_trajectory();
  const std::string text = trajectory_csv_text(traj);
  CHECK(text.rfind("t,stage_mi_nats,expected_distortion,"
                   "lagrangian_stage_cost,cumulative_di_nats,wall_time_ms\n",
                   0) == 0);
}

TEST_CASE("a tampered header is rejected") {
  CHECK_THROWS_AS(parse_trajectory_csv_text("a,b,c\n1,2,3\n"), Error);
}

TEST_CASE("run reports carry totals and the fingerprint") {
  const RolloutTrajectory traj = small_trajectory();
  const RunReport report = make_report(traj, "fp-test", 1.25, 0.5, 3);
  CHECK(report.fingerprint == "fp-test");
  CHECK(report.rows.size() == traj.stages.size());
  CHECK(report.total_di_nats == doctest::Approx(traj.total_di_nats));
  CHECK(report.offline_seconds == 1.25);
  CHECK(report.workers == 3);
}

TEST_CASE("file round trip") {
  const RolloutTrajectory traj = small_trajectory();
  const std::string path = "report_test_roundtrip.csv";
  write_trajectory_csv(path, traj);
  const std::vector<CsvRow> rows = parse_trajectory_csv(path);
  CHECK(rows.size() == traj.stages.size());
  for (size_t i = 0; i < rows.size(); ++i)
    CHECK(rows[i].cumulative_di_nats == traj.stages[i].cumulative_di_nats);
  std::remove(path.c_str());
}

TEST_CASE("content digests ignore wall time but see every cost") {
  RolloutTrajectory a = small_trajectory();
  RolloutTrajectory b = a;
  for (auto& rec : b.stages) rec.wall_ms += 17.0;
  CHECK(trajectory_content_digest(a) == trajectory_content_digest(b));
  b.stages[1].mi_nats += 1e-12;
  CHECK(trajectory_content_digest(a) != trajectory_content_digest(b));
}
