#pragma once

#include <string>

#include "dirollout/problem.hpp"

namespace dirollout {

inline constexpr int kConfigVersion = 1;

// A parsed and validated run configuration: the mathematical instance, the
// solver settings, and the fingerprint of the normalized document (the
// staleness key for artifacts).
struct ProblemConfig {
  ProblemInstance instance;
  SolverSettings settings;
  std::string fingerprint;
};

// Parses a JSON configuration file. Validation collects every violated
// constraint, each tagged with its field path, before throwing ConfigError.
ProblemConfig parse_config(const std::string& path);
ProblemConfig parse_config_text(const std::string& text);

// The canonical serialization a fingerprint is computed over.
std::string canonical_config_json(const ProblemConfig& cfg);
std::string config_fingerprint(const ProblemConfig& cfg);

// FNV-1a 64-bit over bytes, hex encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace dirollout
