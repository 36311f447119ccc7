#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dirollout {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// normalize() on an all-zero vector, or an output distribution with a zero
// component where strict positivity is required.
struct DegenerateDistributionError : Error {
  using Error::Error;
};

// A realized control has probability zero under the induced output
// distribution; the posterior belief does not exist.
struct UnreachableOutputError : Error {
  using Error::Error;
};

// A quantity violated a contract it should satisfy up to rounding
// (negative mutual information with a matched output distribution,
// objective regression inside an alternating-minimization sweep, ...).
struct NumericalConsistencyError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  std::vector<std::string> violations;
  ConfigError(const std::string& what, std::vector<std::string> v)
      : Error(what), violations(std::move(v)) {}
};

struct TrainingFailureError : Error {
  using Error::Error;
};

struct ArtifactError : Error {
  using Error::Error;
};

struct StaleArtifactError : ArtifactError {
  using ArtifactError::ArtifactError;
};

// Online forward pass aborted; message carries the stage index.
struct PropagationError : Error {
  using Error::Error;
};

struct UnsupportedError : Error {
  using Error::Error;
};

// An exhaustive oracle would exceed its enumeration budget.
struct BudgetError : Error {
  using Error::Error;
};

struct BenchFitError : Error {
  using Error::Error;
};

}  // namespace dirollout
