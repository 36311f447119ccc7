#include "dirollout/simplex.hpp"

#include <cmath>
#include <cstdlib>

namespace dirollout {

Simplex::Simplex(std::vector<double> probs) : p_(std::move(probs)) {
  if (p_.empty()) throw Error("Simplex: empty probability vector");
  double sum = 0.0;
  for (double v : p_) {
    if (!(v >= 0.0)) throw Error("Simplex: negative or NaN entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexSumTolerance)
    throw Error("Simplex: entries sum to " + std::to_string(sum));
}

Simplex Simplex::uniform(int size) {
  return Simplex(std::vector<double>(static_cast<size_t>(size), 1.0 / size));
}

Simplex Simplex::point_mass(int size, int atom) {
  std::vector<double> p(static_cast<size_t>(size), 0.0);
  p[static_cast<size_t>(atom)] = 1.0;
  return Simplex(std::move(p));
}

Simplex normalize(const std::vector<double>& weights) {
  double sum = 0.0;
  for (double v : weights) {
    if (!(v >= 0.0)) throw Error("normalize: negative or NaN entry");
    sum += v;
  }
  if (sum <= 0.0)
    throw DegenerateDistributionError("normalize: all entries are zero");
  std::vector<double> p(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) p[i] = weights[i] / sum;
  return Simplex(std::move(p));
}

Simplex floored(const Simplex& s, double floor) {
  std::vector<double> p = s.probs();
  for (double& v : p)
    if (v < floor) v = floor;
  return normalize(p);
}

double l1_distance(const Simplex& a, const Simplex& b) {
  double d = 0.0;
  for (int i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

}  // namespace dirollout
