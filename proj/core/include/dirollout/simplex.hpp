#pragma once

#include <vector>

#include "dirollout/errors.hpp"

namespace dirollout {

inline constexpr double kSimplexSumTolerance = 1e-9;
inline constexpr double kDefaultProbFloor = 1e-12;

// A finite probability distribution: nonnegative entries summing to one
// within kSimplexSumTolerance. The building block of every other type.
class Simplex {
 public:
  Simplex() = default;
  explicit Simplex(std::vector<double> probs);

  static Simplex uniform(int size);
  static Simplex point_mass(int size, int atom);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](int i) const { return p_[static_cast<size_t>(i)]; }
  const std::vector<double>& probs() const { return p_; }

  bool operator==(const Simplex& other) const = default;

 private:
  std::vector<double> p_;
};

// weights / sum(weights), order preserved. Throws
// DegenerateDistributionError when every entry is zero.
Simplex normalize(const std::vector<double>& weights);

// Clamps entries below `floor` up to it and renormalizes. Applied before
// logarithms and divisions so that ratios stay finite.
Simplex floored(const Simplex& s, double floor = kDefaultProbFloor);

double l1_distance(const Simplex& a, const Simplex& b);

}  // namespace dirollout
