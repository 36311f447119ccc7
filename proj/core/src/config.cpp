#include "dirollout/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dirollout {

using nlohmann::json;

namespace {

struct Collector {
  std::vector<std::string> violations;
  void add(const std::string& field, const std::string& message) {
    violations.push_back(field + ": " + message);
  }
  bool ok() const { return violations.empty(); }
};

// Scalar-or-array schedule entry, broadcast to length N+1.
std::vector<double> read_schedule(const json& j, const char* field, int horizon,
                                  Collector& errs, double fallback) {
  std::vector<double> out(static_cast<size_t>(horizon) + 1, fallback);
  if (!j.contains(field)) return out;
  const json& v = j.at(field);
  if (v.is_number()) {
    out.assign(static_cast<size_t>(horizon) + 1, v.get<double>());
  } else if (v.is_array()) {
    if (v.size() != static_cast<size_t>(horizon) + 1) {
      errs.add(field, "length " + std::to_string(v.size()) +
                          ", expected N+1 = " + std::to_string(horizon + 1));
      return out;
    }
    out = v.get<std::vector<double>>();
  } else {
    errs.add(field, "expected a number or an array of numbers");
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ProblemConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what(), {});
  }

  Collector errs;
  ProblemConfig cfg;
  ProblemInstance& inst = cfg.instance;
  SolverSettings& st = cfg.settings;

  if (j.contains("version") && j.at("version").get<int>() != kConfigVersion)
    errs.add("version", "unsupported config version " +
                            j.at("version").dump() + ", expected " +
                            std::to_string(kConfigVersion));

  inst.x_size = 2;
  inst.u_size = 2;
  if (j.contains("alphabet")) {
    const json& a = j.at("alphabet");
    if (a.contains("x_size")) inst.x_size = a.at("x_size").get<int>();
    if (a.contains("u_size")) inst.u_size = a.at("u_size").get<int>();
  }
  if (inst.x_size != 2) errs.add("alphabet.x_size", "must be 2 in this release");
  if (inst.u_size != 2) errs.add("alphabet.u_size", "must be 2 in this release");

  if (!j.contains("horizon")) {
    errs.add("horizon", "missing required field");
  } else {
    inst.horizon = j.at("horizon").get<int>();
    if (inst.horizon < 1) errs.add("horizon", "must be >= 1");
  }
  const int N = std::max(inst.horizon, 1);

  st.rolling_horizon = j.value("rolling_horizon", 1);
  if (st.rolling_horizon < 1)
    errs.add("rolling_horizon", "must be >= 1");
  else if (st.rolling_horizon > inst.horizon && inst.horizon >= 1)
    errs.add("rolling_horizon", "must be <= horizon");

  st.quantization = j.value("quantization", 10);
  if (st.quantization < 2) errs.add("quantization", "must be >= 2");

  // Kernel: the controlled-BSC closed form or explicit per-stage tables.
  double a0 = 0.5, a1 = 0.5;
  std::vector<std::vector<double>> explicit_stages;
  bool alpha_form = true;
  if (!j.contains("kernel")) {
    errs.add("kernel", "missing required field");
  } else {
    const json& k = j.at("kernel");
    if (k.contains("alpha0") || k.contains("alpha1")) {
      a0 = k.value("alpha0", 0.5);
      a1 = k.value("alpha1", 0.5);
      if (!(a0 > 0.0 && a0 < 1.0)) errs.add("kernel.alpha0", "must lie in (0,1)");
      if (!(a1 > 0.0 && a1 < 1.0)) errs.add("kernel.alpha1", "must lie in (0,1)");
    } else if (k.contains("stages")) {
      alpha_form = false;
      explicit_stages = k.at("stages").get<std::vector<std::vector<double>>>();
      if (explicit_stages.size() != static_cast<size_t>(N))
        errs.add("kernel.stages",
                 "need one table per stage 1..N (" + std::to_string(N) + ")");
      for (size_t i = 0; i < explicit_stages.size(); ++i)
        if (explicit_stages[i].size() != 8)
          errs.add("kernel.stages[" + std::to_string(i) + "]",
                   "expected 8 row-major entries (x_prev, u_prev, x)");
    } else {
      errs.add("kernel", "expected alpha0/alpha1 or explicit stages");
    }
  }

  std::vector<double> p0{0.5, 0.5};
  if (j.contains("initial_state")) {
    p0 = j.at("initial_state").get<std::vector<double>>();
    if (p0.size() != 2) errs.add("initial_state", "expected 2 entries");
  }

  std::vector<std::vector<double>> mu0{{0.5, 0.5}, {0.5, 0.5}};
  if (j.contains("initial_policy")) {
    mu0 = j.at("initial_policy").get<std::vector<std::vector<double>>>();
    if (mu0.size() != 2) errs.add("initial_policy", "expected one row per x_0");
    for (size_t x = 0; x < mu0.size(); ++x)
      if (mu0[x].size() != 2)
        errs.add("initial_policy[" + std::to_string(x) + "]",
                 "expected 2 entries");
  }

  // Distortion: "hamming" or an explicit x-by-u matrix.
  bool hamming = true;
  std::vector<std::vector<double>> rho_matrix;
  if (j.contains("distortion")) {
    const json& d = j.at("distortion");
    if (d.is_string()) {
      if (d.get<std::string>() != "hamming")
        errs.add("distortion", "unknown named distortion " + d.dump());
    } else if (d.is_array()) {
      hamming = false;
      rho_matrix = d.get<std::vector<std::vector<double>>>();
      if (rho_matrix.size() != 2)
        errs.add("distortion", "expected one row per x");
      for (size_t x = 0; x < rho_matrix.size(); ++x) {
        if (rho_matrix[x].size() != 2)
          errs.add("distortion[" + std::to_string(x) + "]", "expected 2 entries");
        for (size_t u = 0; u < rho_matrix[x].size(); ++u)
          if (!(rho_matrix[x][u] >= 0.0) || !std::isfinite(rho_matrix[x][u]))
            errs.add("distortion[" + std::to_string(x) + "][" +
                         std::to_string(u) + "]",
                     "must be finite and nonnegative");
      }
    } else {
      errs.add("distortion", "expected \"hamming\" or a matrix");
    }
  }

  const std::vector<double> s = read_schedule(j, "s_schedule", N, errs, 0.0);
  const std::vector<double> D = read_schedule(j, "d_schedule", N, errs, 0.0);
  for (size_t t = 0; t < s.size(); ++t)
    if (!(s[t] <= 0.0))
      errs.add("s_schedule[" + std::to_string(t) + "]", "s_t must be <= 0");
  for (size_t t = 0; t < D.size(); ++t)
    if (!(D[t] >= 0.0))
      errs.add("d_schedule[" + std::to_string(t) + "]", "D_t must be >= 0");

  st.baa.epsilon = j.value("epsilon_nats", 1e-6);
  if (!(st.baa.epsilon > 0.0)) errs.add("epsilon_nats", "must be positive");
  st.baa.max_iterations = j.value("max_iterations", 100000);
  if (st.baa.max_iterations < 1) errs.add("max_iterations", "must be >= 1");
  st.baa.prob_floor = j.value("prob_floor", kDefaultProbFloor);
  if (!(st.baa.prob_floor > 0.0)) errs.add("prob_floor", "must be positive");
  st.baa.exponent_cap = j.value("exponent_cap", 700.0);
  if (!(st.baa.exponent_cap > 0.0)) errs.add("exponent_cap", "must be positive");

  st.rounds = j.value("rollout_rounds", 1);
  if (st.rounds < 1) errs.add("rollout_rounds", "must be >= 1");
  st.seed = j.value("seed", 0ULL);
  st.workers = j.value("workers", 0);
  if (st.workers < 0) errs.add("workers", "must be >= 0");

  // Distributions are validated through their types once ranges are clean.
  if (errs.ok()) {
    try {
      inst.initial_state = Simplex(p0);
    } catch (const Error& e) {
      errs.add("initial_state", e.what());
    }
    try {
      Policy mu;
      mu.stage = 0;
      mu.contexts = 1;
      mu.x_size = 2;
      mu.u_size = 2;
      mu.p = {mu0[0][0], mu0[0][1], mu0[1][0], mu0[1][1]};
      mu.validate();
      inst.initial_policy = mu;
    } catch (const Error& e) {
      errs.add("initial_policy", e.what());
    }
  }

  if (j.contains("initial_control_marginal") && errs.ok()) {
    const auto given =
        j.at("initial_control_marginal").get<std::vector<double>>();
    const OutputDistribution nu0 = [&] {
      ProblemInstance probe = inst;
      probe.kernels = {Kernel::from_initial(inst.initial_state, 2)};
      probe.horizon = 0;
      probe.rho = {DistortionFn::hamming(2)};
      probe.lagrange.s = {0.0};
      probe.lagrange.D = {0.0};
      return probe.initial_output();
    }();
    for (size_t u = 0; u < given.size() && u < 2; ++u)
      if (std::abs(given[u] - nu0(static_cast<int>(u), 0)) > 1e-9)
        errs.add("initial_control_marginal",
                 "inconsistent with initial_policy and initial_state");
  }

  if (!errs.ok())
    throw ConfigError("config: " + std::to_string(errs.violations.size()) +
                          " constraint violation(s)",
                      errs.violations);

  inst.kernels.resize(static_cast<size_t>(inst.horizon) + 1);
  inst.kernels[0] = Kernel::from_initial(inst.initial_state, 2);
  for (int t = 1; t <= inst.horizon; ++t) {
    Kernel k;
    if (alpha_form) {
      k = Kernel::binary_symmetric(a0, a1);
    } else {
      k.x_size = 2;
      k.u_size = 2;
      k.w = explicit_stages[static_cast<size_t>(t - 1)];
    }
    inst.kernels[static_cast<size_t>(t)] = k;
  }
  DistortionFn rho = DistortionFn::hamming(2);
  if (!hamming) {
    rho.rho = {rho_matrix[0][0], rho_matrix[0][1], rho_matrix[1][0],
               rho_matrix[1][1]};
  }
  inst.rho.assign(static_cast<size_t>(inst.horizon) + 1, rho);
  inst.lagrange.s = s;
  inst.lagrange.D = D;

  try {
    inst.validate();
  } catch (const Error& e) {
    throw ConfigError(std::string("config: ") + e.what(), {e.what()});
  }

  cfg.fingerprint = config_fingerprint(cfg);
  return cfg;
}

ProblemConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path, {});
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config_json(const ProblemConfig& cfg) {
  // Normalized document: defaults filled, schedules expanded, numbers
  // printed with full precision. nlohmann objects serialize key-sorted.
  const ProblemInstance& inst = cfg.instance;
  const SolverSettings& st = cfg.settings;
  json j;
  j["version"] = kConfigVersion;
  j["alphabet"] = {{"x_size", inst.x_size}, {"u_size", inst.u_size}};
  j["horizon"] = inst.horizon;
  j["rolling_horizon"] = st.rolling_horizon;
  j["quantization"] = st.quantization;
  json kernels = json::array();
  for (int t = 1; t <= inst.horizon; ++t) {
    json rows = json::array();
    for (double v : inst.kernel(t).w) rows.push_back(format_double(v));
    kernels.push_back(std::move(rows));
  }
  j["kernel_stages"] = std::move(kernels);
  json p0 = json::array();
  for (int x = 0; x < inst.x_size; ++x)
    p0.push_back(format_double(inst.initial_state[x]));
  j["initial_state"] = std::move(p0);
  json mu0 = json::array();
  for (double v : inst.initial_policy.p) mu0.push_back(format_double(v));
  j["initial_policy"] = std::move(mu0);
  json rho = json::array();
  for (double v : inst.distortion(0).rho) rho.push_back(format_double(v));
  j["distortion"] = std::move(rho);
  json s = json::array(), D = json::array();
  for (double v : inst.lagrange.s) s.push_back(format_double(v));
  for (double v : inst.lagrange.D) D.push_back(format_double(v));
  j["s_schedule"] = std::move(s);
  j["d_schedule"] = std::move(D);
  j["epsilon_nats"] = format_double(st.baa.epsilon);
  j["max_iterations"] = st.baa.max_iterations;
  j["prob_floor"] = format_double(st.baa.prob_floor);
  j["exponent_cap"] = format_double(st.baa.exponent_cap);
  j["rollout_rounds"] = st.rounds;
  j["seed"] = st.seed;
  return j.dump();
}

std::string fnv1a_hex(const std::string& bytes) {
  uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

std::string config_fingerprint(const ProblemConfig& cfg) {
  return fnv1a_hex(canonical_config_json(cfg));
}

}  // namespace dirollout
