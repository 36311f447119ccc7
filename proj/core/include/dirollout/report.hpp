#pragma once

#include <string>
#include <vector>

#include "dirollout/rollout.hpp"

namespace dirollout {

struct CsvRow {
  int t = 0;
  double stage_mi_nats = 0.0;
  double expected_distortion = 0.0;
  double lagrangian_stage_cost = 0.0;
  double cumulative_di_nats = 0.0;
  double wall_time_ms = 0.0;
};

struct RunReport {
  std::vector<CsvRow> rows;
  double total_di_nats = 0.0;
  double total_distortion = 0.0;
  double total_lagrangian = 0.0;
  double offline_seconds = 0.0;
  double online_seconds = 0.0;
  std::string fingerprint;
  int workers = 0;
};

RunReport make_report(const RolloutTrajectory& traj,
                      const std::string& fingerprint, double offline_seconds,
                      double online_seconds, int workers);

// Columns, in order:
//   t,stage_mi_nats,expected_distortion,lagrangian_stage_cost,
//   cumulative_di_nats,wall_time_ms
void write_trajectory_csv(const std::string& path,
                          const RolloutTrajectory& traj);
std::string trajectory_csv_text(const RolloutTrajectory& traj);

// Re-parses an emitted CSV; values round-trip exactly.
std::vector<CsvRow> parse_trajectory_csv(const std::string& path);
std::vector<CsvRow> parse_trajectory_csv_text(const std::string& text);

void write_run_summary(const std::string& path, const RunReport& report);

// Canonical serialization of the trajectory content, timing columns
// excluded; equal digests mean equal runs.
std::string trajectory_content_digest(const RolloutTrajectory& traj);

}  // namespace dirollout
