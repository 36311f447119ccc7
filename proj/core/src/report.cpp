#include "dirollout/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dirollout {

using nlohmann::json;

namespace {

constexpr const char* kCsvHeader =
    "t,stage_mi_nats,expected_distortion,lagrangian_stage_cost,"
    "cumulative_di_nats,wall_time_ms";

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

RunReport make_report(const RolloutTrajectory& traj,
                      const std::string& fingerprint, double offline_seconds,
                      double online_seconds, int workers) {
  RunReport report;
  report.fingerprint = fingerprint;
  report.offline_seconds = offline_seconds;
  report.online_seconds = online_seconds;
  report.workers = workers;
  for (const auto& rec : traj.stages) {
    CsvRow row;
    row.t = rec.t;
    row.stage_mi_nats = rec.mi_nats;
    row.expected_distortion = rec.distortion;
    row.lagrangian_stage_cost = rec.lagrangian_cost;
    row.cumulative_di_nats = rec.cumulative_di_nats;
    row.wall_time_ms = rec.wall_ms;
    report.rows.push_back(row);
    report.total_di_nats += rec.mi_nats;
    report.total_distortion += rec.distortion;
    report.total_lagrangian += rec.lagrangian_cost;
  }
  return report;
}

std::string trajectory_csv_text(const RolloutTrajectory& traj) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& rec : traj.stages) {
    out << rec.t << ',' << fmt(rec.mi_nats) << ',' << fmt(rec.distortion)
        << ',' << fmt(rec.lagrangian_cost) << ','
        << fmt(rec.cumulative_di_nats) << ',' << fmt(rec.wall_ms) << "\n";
  }
  return out.str();
}

void write_trajectory_csv(const std::string& path,
                          const RolloutTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error("write_trajectory_csv: cannot open " + path);
  out << trajectory_csv_text(traj);
}

std::vector<CsvRow> parse_trajectory_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error("trajectory CSV: empty file");
  if (line != kCsvHeader)
    throw Error("trajectory CSV: unexpected header \"" + line + "\"");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    CsvRow row;
    std::istringstream ls(line);
    std::string field;
    auto next = [&]() -> std::string {
      if (!std::getline(ls, field, ',')) throw Error("trajectory CSV: short row");
      return field;
    };
    row.t = std::stoi(next());
    row.stage_mi_nats = std::stod(next());
    row.expected_distortion = std::stod(next());
    row.lagrangian_stage_cost = std::stod(next());
    row.cumulative_di_nats = std::stod(next());
    row.wall_time_ms = std::stod(next());
    rows.push_back(row);
  }
  return rows;
}

std::vector<CsvRow> parse_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("parse_trajectory_csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trajectory_csv_text(buf.str());
}

void write_run_summary(const std::string& path, const RunReport& report) {
  json j;
  j["fingerprint"] = report.fingerprint;
  j["stages"] = report.rows.size();
  j["totals"] = {{"di_nats", report.total_di_nats},
                 {"distortion", report.total_distortion},
                 {"lagrangian", report.total_lagrangian}};
  j["offline_seconds"] = report.offline_seconds;
  j["online_seconds"] = report.online_seconds;
  j["workers"] = report.workers;
  std::ofstream out(path);
  if (!out) throw Error("write_run_summary: cannot open " + path);
  out << j.dump(1, '\t') << "\n";
}

std::string trajectory_content_digest(const RolloutTrajectory& traj) {
  std::ostringstream out;
  for (const auto& rec : traj.stages) {
    out << rec.t << '|';
    for (double v : rec.belief.p) out << fmt(v) << ',';
    out << '|';
    for (double v : rec.policy.p) out << fmt(v) << ',';
    out << '|';
    for (double v : rec.nu.p) out << fmt(v) << ',';
    out << '|';
    for (double v : rec.marginal.p) out << fmt(v) << ',';
    out << '|' << fmt(rec.mi_nats) << '|' << fmt(rec.distortion) << '|'
        << fmt(rec.lagrangian_cost) << '|' << fmt(rec.cumulative_di_nats)
        << "\n";
  }
  out << fmt(traj.total_di_nats) << '|' << fmt(traj.total_distortion) << '|'
      << fmt(traj.total_lagrangian) << "\n";
  return out.str();
}

}  // namespace dirollout
