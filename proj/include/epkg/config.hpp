#pragma once

#include <string>

#include "epkg/model.hpp"

namespace epkg {

/// Everything a run needs. Keys of the config file, by section:
///   [grid]   n, L
///   [time]   dt, T_end, record_stride
///   [data]   amplitude, density, density_sigma, potential, potential_sigma, seed
///   [params] N, N_prime, N1, delta1, delta2, eps1
///   [output] csv, json, g_csv, trajectory
///   [run]    task, nonlinear, fit_t0, fit_t1, g_samples
struct RunConfig {
  int n = 512;
  double L = 256.0;
  double dt = 0.05;
  double T_end = 100.0;
  int record_stride = 10;
  ParamSet params;
  InitialDataSpec data;
  std::string csv_path = "norms.csv";
  std::string json_path = "summary.json";
  std::string g_csv_path;       ///< empty: not written
  std::string trajectory_path;  ///< empty: not written
  std::string task = "simulate";  ///< simulate | linear-decay
  bool nonlinear = true;
  double fit_t0 = 5.0;
  double fit_t1 = 0.0;  ///< 0: min(T_end, wrap horizon)
  int g_samples = 10;   ///< log-spaced g evaluation times in [fit_t0, fit_t1]

  /// Throws ConfigError (line 0) when the run would violate an integrator or
  /// parameter precondition.
  void validate() const;
  double fit_end() const;
};

/// Parses `key = value` lines under `[section]` headers; `#` starts a comment.
/// Unknown sections or keys, malformed values and an empty file raise ConfigError
/// with the offending line and key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// The config file equivalent to `c` (parse_config(to_config_text(c)) == c).
std::string to_config_text(const RunConfig& c);

}  // namespace epkg
