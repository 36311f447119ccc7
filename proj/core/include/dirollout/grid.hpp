#pragma once

#include <vector>

#include "dirollout/model.hpp"

namespace dirollout {

struct RolloutTrajectory;  // rollout.hpp

// Per-stage discretization of the information-state space: per context, n
// binary beliefs identified by their first component (ascending), and the
// full grid is the Cartesian product over contexts in lexicographic order
// with context 0 most significant. Size n^contexts.
struct BeliefGrid {
  int n = 0;
  int contexts = 0;
  int x_size = 0;
  std::vector<std::vector<double>> levels;  // [context][i], ascending

  int size() const;
  InformationState point(int index) const;
  int digit(int index, int context) const;

  // Whether level spacing is wide enough for the bisection lookup to be
  // provably identical to the exhaustive scan.
  bool fast_lookup_ok() const;

  void validate() const;

  bool operator==(const BeliefGrid& other) const = default;
};

// n cell midpoints (i - 0.5)/n per context; every entry strictly inside
// (0, 1). Binary alphabets only in this release.
BeliefGrid build_uniform_grid(int n, int x_size, int u_size);

// Index minimizing the total L1 distance summed over contexts, ties broken
// by lowest index.
int nearest(const BeliefGrid& grid, const InformationState& b);

// Per-context nearest level index for a single belief row; combined digits
// reproduce nearest() exactly on product grids.
int nearest_row(const BeliefGrid& grid, int context, const Simplex& row);

// Grid over the empirically visited range: per context, the min/max of the
// visited beliefs' first components padded by 5% of the range on each side
// (clamped to [0,1]), with n midpoints placed uniformly inside. A degenerate
// range expands to +/- 0.05 around the single value.
BeliefGrid refine_from_trajectory(const RolloutTrajectory& traj, int n);
BeliefGrid refine_from_states(const std::vector<InformationState>& states,
                              int n);

}  // namespace dirollout
