#include "dirollout/grid.hpp"

#include <algorithm>
#include <cmath>

#include "dirollout/rollout.hpp"

namespace dirollout {

namespace {

// Fast-path guard: level spacing must dominate both rounding noise and the
// simplex normalization tolerance, otherwise fall back to the full scan.
constexpr double kMinFastSpacing = 1e-6;

std::vector<double> row_for_level(double level) { return {level, 1.0 - level}; }

}  // namespace

int BeliefGrid::size() const {
  int s = 1;
  for (int c = 0; c < contexts; ++c) s *= n;
  return s;
}

int BeliefGrid::digit(int index, int context) const {
  int stride = 1;
  for (int c = contexts - 1; c > context; --c) stride *= n;
  return (index / stride) % n;
}

InformationState BeliefGrid::point(int index) const {
  InformationState b;
  b.contexts = contexts;
  b.x_size = x_size;
  b.p.resize(static_cast<size_t>(contexts) * x_size);
  for (int c = 0; c < contexts; ++c) {
    const double level = levels[static_cast<size_t>(c)][static_cast<size_t>(digit(index, c))];
    b.set_row(c, Simplex(row_for_level(level)));
  }
  return b;
}

bool BeliefGrid::fast_lookup_ok() const {
  for (const auto& ls : levels) {
    for (size_t i = 1; i < ls.size(); ++i)
      if (ls[i] - ls[i - 1] < kMinFastSpacing) return false;
  }
  return true;
}

void BeliefGrid::validate() const {
  if (n < 2) throw Error("BeliefGrid: quantization level must be >= 2");
  if (x_size != 2) throw UnsupportedError("BeliefGrid: binary states only");
  if (levels.size() != static_cast<size_t>(contexts))
    throw Error("BeliefGrid: one level list per context required");
  for (const auto& ls : levels) {
    if (ls.size() != static_cast<size_t>(n))
      throw Error("BeliefGrid: level count mismatch");
    for (size_t i = 0; i < ls.size(); ++i) {
      if (!(ls[i] > 0.0 && ls[i] < 1.0))
        throw Error("BeliefGrid: levels must lie strictly inside (0,1)");
      if (i > 0 && !(ls[i] > ls[i - 1]))
        throw Error("BeliefGrid: levels must be strictly ascending");
    }
  }
}

BeliefGrid build_uniform_grid(int n, int x_size, int u_size) {
  if (x_size != 2 || u_size != 2)
    throw UnsupportedError(
        "build_uniform_grid: binary alphabets only in this release");
  if (n < 2) throw Error("build_uniform_grid: n must be >= 2");
  BeliefGrid grid;
  grid.n = n;
  grid.contexts = u_size;
  grid.x_size = x_size;
  grid.levels.assign(static_cast<size_t>(u_size), {});
  for (auto& ls : grid.levels) {
    ls.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i)
      ls[static_cast<size_t>(i - 1)] = (i - 0.5) / n;
  }
  grid.validate();
  return grid;
}

namespace {

double row_l1(const BeliefGrid& grid, int context, int level_index,
              const Simplex& row) {
  const double level = grid.levels[static_cast<size_t>(context)]
                                  [static_cast<size_t>(level_index)];
  return std::abs(row[0] - level) + std::abs(row[1] - (1.0 - level));
}

int nearest_row_scan(const BeliefGrid& grid, int context, const Simplex& row) {
  int best = 0;
  double best_d = row_l1(grid, context, 0, row);
  for (int i = 1; i < grid.n; ++i) {
    const double d = row_l1(grid, context, i, row);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

int nearest_row_fast(const BeliefGrid& grid, int context, const Simplex& row) {
  const auto& ls = grid.levels[static_cast<size_t>(context)];
  const double lo = std::min(row[0], 1.0 - row[1]);
  const double hi = std::max(row[0], 1.0 - row[1]);
  const auto lb = std::lower_bound(ls.begin(), ls.end(), lo);
  const auto ub = std::upper_bound(ls.begin(), ls.end(), hi);
  int first = static_cast<int>(lb - ls.begin()) - 2;
  int last = static_cast<int>(ub - ls.begin()) + 2;
  first = std::max(first, 0);
  last = std::min(last, grid.n - 1);
  int best = first;
  double best_d = row_l1(grid, context, first, row);
  for (int i = first + 1; i <= last; ++i) {
    const double d = row_l1(grid, context, i, row);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

}  // namespace

int nearest_row(const BeliefGrid& grid, int context, const Simplex& row) {
  if (grid.fast_lookup_ok()) return nearest_row_fast(grid, context, row);
  return nearest_row_scan(grid, context, row);
}

int nearest(const BeliefGrid& grid, const InformationState& b) {
  if (b.contexts != grid.contexts || b.x_size != grid.x_size)
    throw Error("nearest: shape mismatch between grid and information state");
  // The grid is a product over contexts, so the total-L1 minimizer is the
  // per-context minimizer and lowest-index ties resolve digit by digit.
  int index = 0;
  for (int c = 0; c < grid.contexts; ++c)
    index = index * grid.n + nearest_row(grid, c, b.row(c));
  return index;
}

BeliefGrid refine_from_states(const std::vector<InformationState>& states,
                              int n) {
  if (states.empty())
    throw Error("refine_from_states: no visited beliefs to refine from");
  const int contexts = states.front().contexts;
  const int x_size = states.front().x_size;
  if (x_size != 2)
    throw UnsupportedError("refine_from_states: binary states only");

  BeliefGrid grid;
  grid.n = n;
  grid.contexts = contexts;
  grid.x_size = x_size;
  grid.levels.assign(static_cast<size_t>(contexts), {});
  for (int c = 0; c < contexts; ++c) {
    double lo = 1.0, hi = 0.0;
    for (const auto& st : states) {
      const double v = st(0, c);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (lo == hi) {
      lo -= 0.05;
      hi += 0.05;
    } else {
      const double pad = 0.05 * (hi - lo);
      lo -= pad;
      hi += pad;
    }
    // a near-point range would collapse the levels below FP resolution
    if (hi - lo < 1e-9) {
      const double center = 0.5 * (lo + hi);
      lo = center - 0.05;
      hi = center + 0.05;
    }
    lo = std::max(lo, 0.0);
    hi = std::min(hi, 1.0);
    auto& ls = grid.levels[static_cast<size_t>(c)];
    ls.resize(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i)
      ls[static_cast<size_t>(i - 1)] = lo + (hi - lo) * (i - 0.5) / n;
  }
  grid.validate();
  return grid;
}

BeliefGrid refine_from_trajectory(const RolloutTrajectory& traj, int n) {
  std::vector<InformationState> states;
  for (const auto& rec : traj.stages)
    if (rec.t >= 1) states.push_back(rec.belief);
  return refine_from_states(states, n);
}

}  // namespace dirollout
