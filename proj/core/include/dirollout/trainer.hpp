#pragma once

#include <string>
#include <vector>

#include "dirollout/baa.hpp"
#include "dirollout/grid.hpp"
#include "dirollout/problem.hpp"

namespace dirollout {

struct QEntry {
  double q = 0.0;
  PolicyBlock mu;
  Simplex nu;
  bool converged = false;
  int iterations = 0;
  double final_gap = 0.0;

  bool operator==(const QEntry& other) const = default;
};

// Per-stage map from grid points to per-context stage solutions.
struct QTable {
  int stage = -1;
  int contexts = 0;
  std::vector<QEntry> entries;  // [grid_index * contexts + context]

  const QEntry& at(int grid_index, int context) const {
    return entries[static_cast<size_t>(grid_index * contexts + context)];
  }
  QEntry& at(int grid_index, int context) {
    return entries[static_cast<size_t>(grid_index * contexts + context)];
  }

  bool operator==(const QTable& other) const = default;
};

// The offline artifact: the grid, the trained tables for stages
// N .. N - N_s + 1 (descending), and the fingerprint of the configuration
// they were trained for. Stage timings are diagnostics and are not
// serialized, so artifact files are byte-identical across runs.
struct OfflineArtifact {
  std::string fingerprint;
  BeliefGrid grid;
  std::vector<QTable> tables;            // descending stage order
  std::vector<double> stage_train_seconds;  // parallel to tables

  int last_stage() const;   // N
  int first_stage() const;  // N - N_s + 1
  const QTable& table_for_stage(int t) const;

  // Content equality; timings excluded.
  bool same_content(const OfflineArtifact& other) const;
};

// Q_{t+1} read from a trained table at the grid point nearest to the
// successor state. On product grids only the matching context digit of the
// query matters for the returned context's value.
double continuation_lookup(const QTable& table, const BeliefGrid& grid,
                           const InformationState& b, int u);

class TableContinuation final : public ContinuationLookup {
 public:
  TableContinuation(const QTable& table, const BeliefGrid& grid)
      : table_(table), grid_(grid) {}
  double value(const InformationState& successor, int u) const override;
  void values(const InformationState& successor,
              std::vector<double>& out) const override;

 private:
  const QTable& table_;
  const BeliefGrid& grid_;
};

// Offline base-policy approximation: backward over stages N down to
// N - N_s + 1, solving every grid point under every context. Non-converged
// points keep their last iterate and are flagged; if more than 10% of the
// solves fail to converge the whole run is a training failure.
OfflineArtifact train(const ProblemInstance& instance, const BeliefGrid& grid,
                      int rolling_horizon, const BAAConfig& cfg, int workers,
                      const std::string& fingerprint = "",
                      const IterationSink& sink = nullptr);

void save_artifact(const OfflineArtifact& artifact, const std::string& path);

// expected_fingerprint empty = skip the staleness check.
OfflineArtifact load_artifact(const std::string& path,
                              const std::string& expected_fingerprint = "");

}  // namespace dirollout
