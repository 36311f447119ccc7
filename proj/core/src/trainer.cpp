#include "dirollout/trainer.hpp"

#include <cmath>
#include <chrono>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "dirollout/parallel.hpp"

namespace dirollout {

using nlohmann::json;

namespace {
constexpr int kArtifactVersion = 1;
constexpr const char* kArtifactFormat = "dirollout-artifact";
constexpr double kMaxFlaggedFraction = 0.10;
}  // namespace

int OfflineArtifact::last_stage() const { return tables.front().stage; }
int OfflineArtifact::first_stage() const { return tables.back().stage; }

const QTable& OfflineArtifact::table_for_stage(int t) const {
  for (const auto& table : tables)
    if (table.stage == t) return table;
  throw Error("OfflineArtifact: no table for stage " + std::to_string(t));
}

bool OfflineArtifact::same_content(const OfflineArtifact& other) const {
  return fingerprint == other.fingerprint && grid == other.grid &&
         tables == other.tables;
}

double continuation_lookup(const QTable& table, const BeliefGrid& grid,
                           const InformationState& b, int u) {
  if (table.entries.empty()) throw Error("continuation_lookup: empty table");
  return table.at(nearest(grid, b), u).q;
}

double TableContinuation::value(const InformationState& successor,
                                int u) const {
  // Product-grid decomposition: the value for context u depends only on the
  // nearest level of the successor's context-u row.
  const int digit = nearest_row(grid_, u, successor.row(u));
  int index = 0;
  for (int c = 0; c < grid_.contexts; ++c)
    index = index * grid_.n + (c == u ? digit : 0);
  return table_.at(index, u).q;
}

void TableContinuation::values(const InformationState& successor,
                               std::vector<double>& out) const {
  for (size_t u = 0; u < out.size(); ++u)
    out[u] = value(successor, static_cast<int>(u));
}

OfflineArtifact train(const ProblemInstance& instance, const BeliefGrid& grid,
                      int rolling_horizon, const BAAConfig& cfg, int workers,
                      const std::string& fingerprint,
                      const IterationSink& sink) {
  instance.validate();
  grid.validate();
  cfg.validate();
  const int N = instance.horizon;
  if (rolling_horizon < 1 || rolling_horizon > N)
    throw Error("train: rolling horizon must satisfy 1 <= N_s <= N");

  OfflineArtifact artifact;
  artifact.fingerprint = fingerprint;
  artifact.grid = grid;

  const int points = grid.size();
  const int contexts = grid.contexts;
  long long flagged = 0, total = 0;

  std::mutex sink_mutex;
  IterationSink guarded_sink;
  if (sink)
    guarded_sink = [&](const BAAIterate& it) {
      std::lock_guard<std::mutex> lock(sink_mutex);
      sink(it);
    };

  for (int t = N; t >= N - rolling_horizon + 1; --t) {
    const auto start = std::chrono::steady_clock::now();
    QTable table;
    table.stage = t;
    table.contexts = contexts;
    table.entries.resize(static_cast<size_t>(points) * contexts);

    ZeroContinuation zero;
    // Tables are appended N-first, so back() is the stage-(t+1) table.
    const QTable* next_table = t == N ? nullptr : &artifact.tables.back();
    TableContinuation table_cont(next_table ? *next_table : table, grid);
    const ContinuationLookup& cont =
        next_table ? static_cast<const ContinuationLookup&>(table_cont)
                   : static_cast<const ContinuationLookup&>(zero);

    parallel_for(0, points, workers, [&](int gi) {
      InformationState b = grid.point(gi);
      b.stage = t;
      for (int c = 0; c < contexts; ++c) {
        const StageSolution sol = solve_stage(
            b, instance.kernel(t), instance.lagrange.s[static_cast<size_t>(t)],
            instance.lagrange.D[static_cast<size_t>(t)],
            instance.distortion(t), cont, c, cfg, guarded_sink);
        QEntry& entry = table.at(gi, c);
        entry.q = sol.q_value;
        entry.mu = sol.mu;
        entry.nu = sol.nu;
        entry.converged = sol.converged;
        entry.iterations = sol.iterations;
        entry.final_gap = sol.final_gap;
      }
    });

    for (const auto& entry : table.entries) {
      ++total;
      if (!entry.converged) ++flagged;
    }
    artifact.tables.push_back(std::move(table));
    const auto stop = std::chrono::steady_clock::now();
    artifact.stage_train_seconds.push_back(
        std::chrono::duration<double>(stop - start).count());
  }

  if (total > 0 &&
      static_cast<double>(flagged) / static_cast<double>(total) >
          kMaxFlaggedFraction)
    throw TrainingFailureError(
        "train: " + std::to_string(flagged) + " of " + std::to_string(total) +
        " stage solves failed to converge (more than 10%)");
  return artifact;
}

namespace {

json grid_to_json(const BeliefGrid& grid) {
  return json{{"n", grid.n},
              {"contexts", grid.contexts},
              {"x_size", grid.x_size},
              {"levels", grid.levels}};
}

BeliefGrid grid_from_json(const json& j) {
  BeliefGrid grid;
  grid.n = j.at("n").get<int>();
  grid.contexts = j.at("contexts").get<int>();
  grid.x_size = j.at("x_size").get<int>();
  grid.levels = j.at("levels").get<std::vector<std::vector<double>>>();
  grid.validate();
  return grid;
}

json table_to_json(const QTable& table) {
  json entries = json::array();
  for (const auto& e : table.entries) {
    entries.push_back(json{{"q", e.q},
                           {"mu", e.mu.p},
                           {"mu_x_size", e.mu.x_size},
                           {"mu_u_size", e.mu.u_size},
                           {"nu", e.nu.probs()},
                           {"converged", e.converged},
                           {"iterations", e.iterations},
                           {"final_gap", e.final_gap}});
  }
  return json{{"stage", table.stage},
              {"contexts", table.contexts},
              {"entries", std::move(entries)}};
}

QTable table_from_json(const json& j) {
  QTable table;
  table.stage = j.at("stage").get<int>();
  table.contexts = j.at("contexts").get<int>();
  for (const auto& je : j.at("entries")) {
    QEntry e;
    e.q = je.at("q").get<double>();
    if (!std::isfinite(e.q))
      throw ArtifactError("load_artifact: non-finite stage value");
    e.mu.x_size = je.at("mu_x_size").get<int>();
    e.mu.u_size = je.at("mu_u_size").get<int>();
    e.mu.p = je.at("mu").get<std::vector<double>>();
    e.nu = Simplex(je.at("nu").get<std::vector<double>>());
    e.converged = je.at("converged").get<bool>();
    e.iterations = je.at("iterations").get<int>();
    e.final_gap = je.at("final_gap").get<double>();
    table.entries.push_back(std::move(e));
  }
  return table;
}

}  // namespace

void save_artifact(const OfflineArtifact& artifact, const std::string& path) {
  json j;
  j["format"] = kArtifactFormat;
  j["version"] = kArtifactVersion;
  j["fingerprint"] = artifact.fingerprint;
  j["grid"] = grid_to_json(artifact.grid);
  json tables = json::array();
  for (const auto& table : artifact.tables) tables.push_back(table_to_json(table));
  j["tables"] = std::move(tables);
  // Stage timings are run diagnostics, not artifact content; they live in
  // the run summary so artifact bytes stay reproducible.
  std::ofstream out(path);
  if (!out) throw ArtifactError("save_artifact: cannot open " + path);
  out << j.dump(1, '\t') << "\n";
}

OfflineArtifact load_artifact(const std::string& path,
                              const std::string& expected_fingerprint) {
  std::ifstream in(path);
  if (!in) throw ArtifactError("load_artifact: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ArtifactError("load_artifact: malformed JSON: " +
                        std::string(e.what()));
  }
  try {
    if (j.at("format").get<std::string>() != kArtifactFormat)
      throw ArtifactError("load_artifact: not a dirollout artifact file");
    const int version = j.at("version").get<int>();
    if (version != kArtifactVersion)
      throw ArtifactError("load_artifact: file version " +
                          std::to_string(version) + ", expected " +
                          std::to_string(kArtifactVersion));
    OfflineArtifact artifact;
    artifact.fingerprint = j.at("fingerprint").get<std::string>();
    if (!expected_fingerprint.empty() &&
        artifact.fingerprint != expected_fingerprint)
      throw StaleArtifactError(
          "load_artifact: artifact fingerprint " + artifact.fingerprint +
          " does not match configuration " + expected_fingerprint);
    artifact.grid = grid_from_json(j.at("grid"));
    for (const auto& jt : j.at("tables"))
      artifact.tables.push_back(table_from_json(jt));
    if (artifact.tables.empty())
      throw ArtifactError("load_artifact: artifact holds no stage tables");
    artifact.stage_train_seconds.assign(artifact.tables.size(), 0.0);
    return artifact;
  } catch (const json::exception& e) {
    throw ArtifactError("load_artifact: missing or mistyped field: " +
                        std::string(e.what()));
  }
}

}  // namespace dirollout
