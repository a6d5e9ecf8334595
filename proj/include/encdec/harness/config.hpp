#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "encdec/common.hpp"
#include "encdec/noise.hpp"
#include "encdec/observables.hpp"

namespace encdec::harness {

using Json = nlohmann::ordered_json;

enum class ExperimentKind { sweep, selfavg, collapse, noisy_device, theory_export };
enum class Backend { pure, density, trajectory, pauli_transfer };
enum class InitialState { all_zero, ghz, product_random };
enum class OutputFormat { csv, json };

inline std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::sweep: return "sweep";
    case ExperimentKind::selfavg: return "selfavg";
    case ExperimentKind::collapse: return "collapse";
    case ExperimentKind::noisy_device: return "noisy_device";
    case ExperimentKind::theory_export: return "theory_export";
  }
  return "unknown";
}

inline std::string to_string(Backend b) {
  switch (b) {
    case Backend::pure: return "pure";
    case Backend::density: return "density";
    case Backend::trajectory: return "trajectory";
    case Backend::pauli_transfer: return "pauli_transfer";
  }
  return "unknown";
}

inline std::string to_string(InitialState s) {
  switch (s) {
    case InitialState::all_zero: return "all_zero";
    case InitialState::ghz: return "ghz";
    case InitialState::product_random: return "product_random";
  }
  return "unknown";
}

inline std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

namespace detail {

template <class E, std::size_t M>
E parse_enum(const std::string& s, const E (&all)[M], const char* what) {
  for (E e : all)
    if (to_string(e) == s) return e;
  throw ConfigError(std::string("unknown ") + what + " '" + s + "'");
}

}  // namespace detail

inline ExperimentKind parse_experiment_kind(const std::string& s) {
  static constexpr ExperimentKind all[] = {ExperimentKind::sweep, ExperimentKind::selfavg, ExperimentKind::collapse,
                                           ExperimentKind::noisy_device, ExperimentKind::theory_export};
  return detail::parse_enum(s, all, "experiment kind");
}

inline Backend parse_backend(const std::string& s) {
  static constexpr Backend all[] = {Backend::pure, Backend::density, Backend::trajectory, Backend::pauli_transfer};
  return detail::parse_enum(s, all, "backend");
}

inline InitialState parse_initial_state(const std::string& s) {
  static constexpr InitialState all[] = {InitialState::all_zero, InitialState::ghz, InitialState::product_random};
  return detail::parse_enum(s, all, "initial state");
}

inline OutputFormat parse_output_format(const std::string& s) {
  static constexpr OutputFormat all[] = {OutputFormat::csv, OutputFormat::json};
  return detail::parse_enum(s, all, "output format");
}

/// "lo:hi:steps" -> steps equally spaced values including both ends.
inline std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw ConfigError("grid must be lo:hi:steps, got '" + spec + "'");
  double lo = 0, hi = 0;
  long steps = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    steps = std::stol(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("steps");
  } catch (const std::logic_error&) {
    throw ConfigError("grid must be lo:hi:steps, got '" + spec + "'");
  }
  if (steps < 1) throw ConfigError("grid needs at least one step");
  if (steps == 1) return {lo};
  if (!(hi >= lo)) throw ConfigError("grid needs hi >= lo");
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
  return out;
}

struct ExperimentConfig {
  std::string id = "run";
  ExperimentKind kind = ExperimentKind::sweep;
  ErrorKind model = ErrorKind::coherent;
  std::vector<int> sizes;
  std::optional<double> rate = 0.5;
  std::optional<int> n_logical;
  std::vector<double> grid;  // swept strength: alpha, lambda, W or (noisy device) alpha
  double epsilon = 0.0;      // device noise
  std::vector<double> q_list = {2.0};
  double subsystem_fraction = 0.25;  // |X1| = round(fraction * N)
  std::vector<EntropyKind> entropies;
  std::size_t realizations = 1000;
  std::size_t disorder_draws = 1;  // noise realizations per unitary realization
  std::size_t trajectories = 100;
  std::uint64_t seed = 1;
  Backend backend = Backend::pure;
  std::optional<double> depth_factor;  // T = c N; default 2, 1 for device noise
  InitialState initial_state = InitialState::all_zero;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::string out;
  OutputFormat format = OutputFormat::csv;
  // collapse
  std::string collapse_input;
  double nu_lo = 0.5, nu_hi = 3.0;
  std::optional<double> critical_lo, critical_hi;
  std::optional<double> fixed_nu;
  std::size_t bootstrap = 200;

  int logical_qubits(int n) const {
    if (n_logical) return *n_logical;
    return std::max(1, static_cast<int>(std::lround(*rate * n)));
  }

  int x1_size(int n) const {
    const int k = logical_qubits(n);
    return std::min(std::max(1, static_cast<int>(std::lround(subsystem_fraction * n))), k / 2);
  }

  double depth_multiplier() const {
    if (depth_factor) return *depth_factor;
    return model == ErrorKind::device_noise ? 1.0 : 2.0;
  }

  int depth(int n) const { return std::max(1, static_cast<int>(std::lround(depth_multiplier() * n))); }
};

/// Checks the cross-field invariants; throws ConfigError.
inline void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& m) { throw ConfigError(m); };
  if (c.id.empty() || c.id.find_first_of(",\"\n") != std::string::npos) fail("id must be non-empty without commas or quotes");
  if (c.kind == ExperimentKind::collapse) {
    if (c.collapse_input.empty()) fail("collapse needs an input table");
    if (!(c.nu_lo > 0 && c.nu_hi > c.nu_lo)) fail("collapse needs 0 < nu_lo < nu_hi");
    if (c.fixed_nu && !(*c.fixed_nu > 0)) fail("fixed nu must be > 0");
    if (c.critical_lo.has_value() != c.critical_hi.has_value()) fail("critical range needs both ends");
    if (c.critical_lo && !(*c.critical_hi > *c.critical_lo)) fail("critical range needs lo < hi");
    return;
  }
  if (c.sizes.empty()) fail("at least one system size is required");
  if (c.kind == ExperimentKind::selfavg && c.sizes.size() < 4) fail("self-averaging study needs >= 4 sizes");
  if (!c.rate && !c.n_logical) fail("either rate or n_logical is required");
  if (c.rate && !(*c.rate > 0 && *c.rate <= 1)) fail("rate outside (0, 1]");
  for (int n : c.sizes) {
    if (n < 2 || n % 2 != 0) fail("system sizes must be even and >= 2");
    if (n > 24) fail("system sizes above 24 are not supported");
    const int k = c.logical_qubits(n);
    if (k < 1 || k > n) fail("logical qubit count outside [1, N]");
  }
  if (c.grid.empty()) fail("strength grid is empty");
  for (double q : c.q_list)
    if (!(q > 1.0)) fail("renyi indices must be > 1");
  if (!(c.subsystem_fraction > 0 && c.subsystem_fraction <= 0.5)) fail("subsystem fraction outside (0, 1/2]");
  if (c.realizations < 1) fail("realizations must be >= 1");
  if (c.disorder_draws < 1) fail("disorder_draws must be >= 1");
  if (!(c.depth_multiplier() > 0)) fail("depth factor must be > 0");
  if (c.kind == ExperimentKind::theory_export) return;

  const bool coherent = c.model == ErrorKind::coherent || c.model == ErrorKind::coherent_disordered;
  for (double s : c.grid) {
    switch (c.model) {
      case ErrorKind::coherent:
        if (!(s >= 0 && s <= std::numbers::pi / 2 + 1e-12)) fail("coherent grid outside [0, pi/2]");
        break;
      case ErrorKind::depolarizing:
      case ErrorKind::depolarizing_disordered:
        if (!(s >= 0 && s <= 1)) fail("depolarizing grid outside [0, 1]");
        break;
      case ErrorKind::coherent_disordered:
        if (!(s >= 0 && std::isfinite(s))) fail("disorder widths must be >= 0");
        break;
      case ErrorKind::device_noise:
        if (!(s >= 0 && s <= std::numbers::pi / 2 + 1e-12)) fail("device-noise alpha grid outside [0, pi/2]");
        break;
    }
  }
  if (c.kind == ExperimentKind::noisy_device || c.model == ErrorKind::device_noise) {
    if (c.model != ErrorKind::device_noise) fail("noisy_device experiment needs model device_noise");
    if (c.kind != ExperimentKind::noisy_device) fail("device_noise model is only run by the noisy_device experiment");
    if (c.backend != Backend::trajectory) fail("noisy_device runs on the trajectory backend");
    if (!(c.epsilon >= 0 && c.epsilon <= 1)) fail("epsilon outside [0, 1]");
    if (c.trajectories < 1) fail("trajectories must be >= 1");
    if (!c.entropies.empty()) fail("noisy_device records fidelity only");
    return;
  }
  switch (c.backend) {
    case Backend::pure:
      if (!coherent) fail("pure backend is only valid for coherent models");
      break;
    case Backend::density:
      for (int n : c.sizes)
        if (n > 10) fail("density backend requires N <= 10");
      break;
    case Backend::trajectory:
    case Backend::pauli_transfer:
      if (coherent) fail(to_string(c.backend) + " backend is only valid for depolarizing models");
      if (!c.entropies.empty()) fail(to_string(c.backend) + " backend records fidelity only (entropies are nonlinear)");
      if (c.backend == Backend::trajectory && c.trajectories < 1) fail("trajectories must be >= 1");
      break;
  }
  for (EntropyKind e : c.entropies)
    if (e == EntropyKind::entanglement && !coherent) fail("entanglement entropy needs a pure decoded state (coherent model)");
}

//------------------------------------------------------------------------------
// Serialization. TOML is converted to JSON first so both share one reader.
//------------------------------------------------------------------------------

namespace detail {

inline double json_number(const Json& v, const char* key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
  }
  throw ConfigError(std::string("field '") + key + "' must be a number");
}

template <class T>
T json_get(const Json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

inline std::vector<double> json_grid(const Json& g) {
  if (g.is_string()) return parse_grid(g.get<std::string>());
  if (g.is_array()) {
    std::vector<double> out;
    for (const auto& v : g) out.push_back(json_number(v, "grid"));
    return out;
  }
  if (g.is_object()) {
    const double lo = json_number(g.at("lo"), "grid.lo"), hi = json_number(g.at("hi"), "grid.hi");
    const auto steps = json_get<long>(g, "steps");
    std::ostringstream spec;
    spec.precision(17);
    spec << lo << ':' << hi << ':' << steps;
    return parse_grid(spec.str());
  }
  throw ConfigError("grid must be a string, a list or {lo, hi, steps}");
}

}  // namespace detail

inline ExperimentConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a table/object");
  static const std::vector<std::string> known = {
      "id", "experiment", "model", "sizes", "rate", "n_logical", "grid", "epsilon", "q", "subsystem_fraction",
      "entropies", "realizations", "disorder_draws", "trajectories", "seed", "backend", "depth_factor",
      "initial_state", "workers", "out", "format", "collapse"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config field '" + key + "'");
  ExperimentConfig c;
  try {
    if (j.contains("id")) c.id = detail::json_get<std::string>(j, "id");
    if (j.contains("experiment")) c.kind = parse_experiment_kind(detail::json_get<std::string>(j, "experiment"));
    if (j.contains("model")) {
      try {
        c.model = parse_error_kind(detail::json_get<std::string>(j, "model"));
      } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
      }
    }
    if (j.contains("sizes")) c.sizes = detail::json_get<std::vector<int>>(j, "sizes");
    if (j.contains("n_logical")) {
      c.n_logical = detail::json_get<int>(j, "n_logical");
      c.rate.reset();
    }
    if (j.contains("rate")) c.rate = detail::json_number(j.at("rate"), "rate");
    if (j.contains("grid")) c.grid = detail::json_grid(j.at("grid"));
    if (j.contains("epsilon")) c.epsilon = detail::json_number(j.at("epsilon"), "epsilon");
    if (j.contains("q")) {
      c.q_list.clear();
      for (const auto& v : j.at("q")) c.q_list.push_back(detail::json_number(v, "q"));
    }
    if (j.contains("subsystem_fraction")) c.subsystem_fraction = detail::json_number(j.at("subsystem_fraction"), "subsystem_fraction");
    if (j.contains("entropies"))
      for (const auto& v : j.at("entropies")) c.entropies.push_back(parse_entropy_kind(v.get<std::string>()));
    if (j.contains("realizations")) c.realizations = detail::json_get<std::size_t>(j, "realizations");
    if (j.contains("disorder_draws")) c.disorder_draws = detail::json_get<std::size_t>(j, "disorder_draws");
    if (j.contains("trajectories")) c.trajectories = detail::json_get<std::size_t>(j, "trajectories");
    if (j.contains("seed")) c.seed = detail::json_get<std::uint64_t>(j, "seed");
    if (j.contains("backend")) c.backend = parse_backend(detail::json_get<std::string>(j, "backend"));
    if (j.contains("depth_factor")) c.depth_factor = detail::json_number(j.at("depth_factor"), "depth_factor");
    if (j.contains("initial_state")) c.initial_state = parse_initial_state(detail::json_get<std::string>(j, "initial_state"));
    if (j.contains("workers")) c.workers = detail::json_get<std::size_t>(j, "workers");
    if (j.contains("out")) c.out = detail::json_get<std::string>(j, "out");
    if (j.contains("format")) c.format = parse_output_format(detail::json_get<std::string>(j, "format"));
    if (j.contains("collapse")) {
      const Json& cj = j.at("collapse");
      if (cj.contains("input")) c.collapse_input = detail::json_get<std::string>(cj, "input");
      if (cj.contains("nu")) {
        const auto nu = cj.at("nu");
        if (!nu.is_array() || nu.size() != 2) throw ConfigError("collapse.nu must be [lo, hi]");
        c.nu_lo = detail::json_number(nu[0], "collapse.nu");
        c.nu_hi = detail::json_number(nu[1], "collapse.nu");
      }
      if (cj.contains("critical")) {
        const auto cr = cj.at("critical");
        if (!cr.is_array() || cr.size() != 2) throw ConfigError("collapse.critical must be [lo, hi]");
        c.critical_lo = detail::json_number(cr[0], "collapse.critical");
        c.critical_hi = detail::json_number(cr[1], "collapse.critical");
      }
      if (cj.contains("fixed_nu")) c.fixed_nu = detail::json_number(cj.at("fixed_nu"), "collapse.fixed_nu");
      if (cj.contains("bootstrap")) c.bootstrap = detail::json_get<std::size_t>(cj, "bootstrap");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

inline Json config_to_json(const ExperimentConfig& c) {
  Json j;
  j["id"] = c.id;
  j["experiment"] = to_string(c.kind);
  j["model"] = to_string(c.model);
  j["sizes"] = c.sizes;
  if (c.n_logical)
    j["n_logical"] = *c.n_logical;
  else if (c.rate)
    j["rate"] = *c.rate;
  j["grid"] = c.grid;
  j["epsilon"] = c.epsilon;
  Json q = Json::array();
  for (double v : c.q_list) {
    if (std::isinf(v))
      q.push_back("inf");
    else
      q.push_back(v);
  }
  j["q"] = q;
  j["subsystem_fraction"] = c.subsystem_fraction;
  Json e = Json::array();
  for (EntropyKind k : c.entropies) e.push_back(to_string(k));
  j["entropies"] = e;
  j["realizations"] = c.realizations;
  j["disorder_draws"] = c.disorder_draws;
  j["trajectories"] = c.trajectories;
  j["seed"] = c.seed;
  j["backend"] = to_string(c.backend);
  j["depth_factor"] = c.depth_multiplier();
  j["initial_state"] = to_string(c.initial_state);
  j["workers"] = c.workers;
  j["out"] = c.out;
  j["format"] = to_string(c.format);
  if (c.kind == ExperimentKind::collapse) {
    Json cj;
    cj["input"] = c.collapse_input;
    cj["nu"] = {c.nu_lo, c.nu_hi};
    if (c.critical_lo) cj["critical"] = {*c.critical_lo, *c.critical_hi};
    if (c.fixed_nu) cj["fixed_nu"] = *c.fixed_nu;
    cj["bootstrap"] = c.bootstrap;
    j["collapse"] = cj;
  }
  return j;
}

inline Json toml_to_json(const std::string& text, const std::string& source = "config") {
  try {
    const toml::table table = toml::parse(text, source);
    std::ostringstream ss;
    ss << toml::json_formatter{table};
    return Json::parse(ss.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error in " << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

/// Reads a TOML (.toml) or JSON (.json) config file without validating it.
inline ExperimentConfig read_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  Json j;
  if (path.extension() == ".json") {
    try {
      j = Json::parse(buf.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
  } else {
    j = toml_to_json(buf.str(), path.string());
  }
  return config_from_json(j);
}

/// read_config followed by validate.
inline ExperimentConfig load_config(const std::filesystem::path& path) {
  ExperimentConfig c = read_config(path);
  validate(c);
  return c;
}

}  // namespace encdec::harness
