#pragma once

// Experiment configuration: a flat JSON object whose keys mirror
// ExperimentConfig, overridden field by field from command-line flags.

#include <cmath>
#include <complex>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adiabatic/error.hpp"
#include "adiabatic/hamiltonian.hpp"
#include "adiabatic/linalg.hpp"
#include "adiabatic/schedule.hpp"

namespace adiabatic::cli {

/// Bad input from the user; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UniformStart {};
struct BellStart {};
struct AmplitudeStart {
  std::vector<cplx> amplitudes;
};
struct FileStart {
  std::string path;
};

using InitialSpec = std::variant<UniformStart, BellStart, AmplitudeStart, FileStart>;

struct ExperimentConfig {
  int n = 2;
  Index marked = 0;
  ScheduleKind schedule = ScheduleKind::linear;
  double epsilon = 0.1;
  int grid = 1025;
  std::optional<double> T;
  InitialSpec initial = UniformStart{};
  int sweep_resolution = 8;
  int n_min = 2;
  int n_max = 10;
  std::optional<int> k_max;
  std::optional<int> steps;
  std::optional<int> record_every;
  std::optional<std::string> out;

  void validate() const {
    if (n < 1 || n > max_qubits) {
      throw ConfigError("n must lie in [1, " + std::to_string(max_qubits) + "]");
    }
    if (marked < 0 || marked >= (Index{1} << n)) throw ConfigError("marked index outside [0, 2^n)");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("epsilon must lie in (0, 1)");
    if (grid < 64) throw ConfigError("grid must be at least 64");
    if (T && !(*T > 0.0 && std::isfinite(*T))) throw ConfigError("T must be positive");
    if (sweep_resolution < 1) throw ConfigError("sweep_resolution must be at least 1");
    if (k_max && *k_max < 1) throw ConfigError("k_max must be at least 1");
    if (steps && *steps < 16) throw ConfigError("steps must be at least 16");
    if (record_every && *record_every < 1) throw ConfigError("record_every must be at least 1");
  }
};

inline ScheduleKind parse_schedule(const std::string& name) {
  if (name == "linear") return ScheduleKind::linear;
  if (name == "local") return ScheduleKind::local;
  throw ConfigError("schedule must be 'linear' or 'local', got '" + name + "'");
}

inline InitialSpec parse_initial(const std::string& spec) {
  if (spec == "uniform") return UniformStart{};
  if (spec == "bell") return BellStart{};
  if (spec.rfind("file:", 0) == 0 && spec.size() > 5) return FileStart{spec.substr(5)};
  throw ConfigError("initial must be uniform, bell or file:<path>, got '" + spec + "'");
}

namespace detail {

inline cplx json_amplitude(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("amplitudes must be numbers or [re, im] pairs");
}

template <typename T>
T json_get(const nlohmann::json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

/// Amplitude file: one amplitude per line as "re" or "re im" (comma or space
/// separated); blank lines and '#' comments are ignored.
inline std::vector<cplx> read_amplitude_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open amplitude file '" + path + "'");
  std::vector<cplx> out;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> values;
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (!fields.eof()) throw ConfigError("malformed amplitude line: '" + line + "'");
    if (values.empty()) continue;
    if (values.size() > 2) throw ConfigError("amplitude lines hold 're' or 're im'");
    out.emplace_back(values[0], values.size() == 2 ? values[1] : 0.0);
  }
  return out;
}

/// Applies every key of a flat JSON object onto `config`. Unknown keys and
/// mistyped values are configuration errors.
inline void apply_json(ExperimentConfig& config, const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "n") {
      config.n = detail::json_get<int>(value, key);
    } else if (key == "marked") {
      config.marked = detail::json_get<Index>(value, key);
    } else if (key == "schedule") {
      config.schedule = parse_schedule(detail::json_get<std::string>(value, key));
    } else if (key == "epsilon") {
      config.epsilon = detail::json_get<double>(value, key);
    } else if (key == "grid" || key == "grid_points") {
      config.grid = detail::json_get<int>(value, key);
    } else if (key == "T") {
      if (!value.is_null()) config.T = detail::json_get<double>(value, key);
    } else if (key == "initial") {
      if (value.is_string()) {
        config.initial = parse_initial(value.get<std::string>());
      } else if (value.is_array()) {
        AmplitudeStart amps;
        for (const auto& a : value) amps.amplitudes.push_back(detail::json_amplitude(a));
        config.initial = std::move(amps);
      } else {
        throw ConfigError("config key 'initial' must be a string or an amplitude array");
      }
    } else if (key == "sweep_resolution") {
      config.sweep_resolution = detail::json_get<int>(value, key);
    } else if (key == "n_min") {
      config.n_min = detail::json_get<int>(value, key);
    } else if (key == "n_max") {
      config.n_max = detail::json_get<int>(value, key);
    } else if (key == "k_max") {
      config.k_max = detail::json_get<int>(value, key);
    } else if (key == "steps") {
      config.steps = detail::json_get<int>(value, key);
    } else if (key == "record_every") {
      config.record_every = detail::json_get<int>(value, key);
    } else if (key == "out") {
      config.out = detail::json_get<std::string>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig config;
  apply_json(config, j);
  return config;
}

/// Builds the starting state; amplitudes off the unit sphere by more than
/// 1e-6 are normalized with a warning appended to `warnings`.
inline QState resolve_initial(const ExperimentConfig& config, std::vector<std::string>& warnings) {
  const Index dim = Index{1} << config.n;
  auto from_amplitudes = [&](const std::vector<cplx>& amps) {
    if (Index(amps.size()) != dim) {
      throw ConfigError("initial state needs " + std::to_string(dim) + " amplitudes, got " +
                        std::to_string(amps.size()));
    }
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = amps[std::size_t(i)];
    const double norm = v.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw ConfigError("initial state is the zero vector");
    if (std::abs(norm * norm - 1.0) > 1e-6) {
      warnings.push_back("initial amplitudes had squared norm " + std::to_string(norm * norm) +
                         "; normalized");
    }
    return QState::normalized(config.n, std::move(v));
  };
  return std::visit(
      [&](const auto& spec) -> QState {
        using S = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<S, UniformStart>) {
          return QState::uniform(config.n);
        } else if constexpr (std::is_same_v<S, BellStart>) {
          if (config.n != 2) throw ConfigError("the bell initial state needs n = 2");
          return QState::bell();
        } else if constexpr (std::is_same_v<S, AmplitudeStart>) {
          return from_amplitudes(spec.amplitudes);
        } else {
          return from_amplitudes(read_amplitude_file(spec.path));
        }
      },
      config.initial);
}

/// Search problem described by `config`; zero overlap with the marked state
/// is a configuration error.
inline SearchProblem make_problem(const ExperimentConfig& config,
                                  std::vector<std::string>& warnings) {
  QState initial = resolve_initial(config, warnings);
  try {
    return SearchProblem(std::move(initial), config.marked);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace adiabatic::cli
