#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "epkg/model.hpp"

namespace epkg {

/// f = e^{-it⟨∇⟩}h, constant in time under the free flow.
struct Profile {
  SpectralField f;
  double t = 0.0;
};

Profile to_profile(const DiagonalState& d);
DiagonalState to_state(const Profile& p);

struct Trajectory {
  std::vector<double> times;
  std::vector<Profile> profiles;  ///< empty when the run streamed its snapshots
  double dt = 0.0;
  int record_stride = 1;
  bool nonlinear = true;

  double snapshot_dt() const { return dt * record_stride; }
};

/// One integrating-factor RK4 step of f' = e^{-is⟨∇⟩}N(e^{is⟨∇⟩}f).
/// Negative dt steps backwards. Throws InvalidArgument for dt == 0 or non-finite,
/// BlowUpError if a stage produces a non-finite value.
Profile step(const Profile& p, double dt, bool nonlinear = true);

/// Wrap-around horizon 0.45 L: KG group speed is below 1.
inline double wrap_horizon(const GridSpec& g) { return 0.45 * g.L; }

struct RunOptions {
  bool nonlinear = true;
  bool keep_profiles = true;
  /// Called at t0 and at every record_stride-th step.
  std::function<void(const Profile&)> observer;
};

/// Integrates from data.t to T_end. T_end - data.t must be a multiple of dt.
/// Throws PreconditionError if T_end exceeds the wrap-around horizon.
Trajectory run(const DiagonalState& data, double T_end, double dt, int record_stride,
               const RunOptions& opts = {});

struct ScalarSeries {
  std::vector<double> times, values;
};

/// ‖e^{it⟨∇⟩}∂_t f‖_{L^q} = ‖N(h)‖_{L^q} at one snapshot (0 for linear dynamics).
double partial_t_f_norm(const Profile& p, const ParamSet& params, bool nonlinear = true);
/// Series of the above. Throws InvalidArgument with fewer than 5 stored snapshots.
ScalarSeries partial_t_f_decay(const Trajectory& traj, const ParamSet& params);

/// Per-snapshot inputs of the energy check.
struct EnergySample {
  double t = 0;
  double energy = 0;      ///< ‖h‖²_{H^N}
  double D = 0;           ///< ‖∇h‖_∞ + ‖⟨∇⟩u‖_∞ + ‖∂v‖_∞
  double sup_decay = 0;   ///< ‖|∇|^{1/2}⟨∇⟩h‖_∞
};
EnergySample energy_sample(const Profile& p, const ParamSet& params);

struct EnergyReport {
  std::vector<double> times;      ///< interior snapshot times
  std::vector<double> ratio;      ///< (dE/dt) / (D E)
  std::vector<double> domination; ///< D / ‖|∇|^{1/2}⟨∇⟩h‖_∞ at every snapshot
  double max_ratio = 0;           ///< max |ratio|
  double max_domination = 0;
};
/// Needs at least 3 uniformly spaced samples.
EnergyReport energy_growth_from_samples(const std::vector<EnergySample>& samples);
EnergyReport energy_growth_check(const Trajectory& traj, const ParamSet& params);

struct ScatteringReport {
  std::vector<double> times;       ///< t_0 < t_1 < ...
  std::vector<double> increments;  ///< ‖f(t_{j+1}) - f(t_j)‖_{H^{N'}}
  bool strictly_decreasing = false;
  bool decreasing_with_slack = false;  ///< each increment <= 1.1 x the previous
  double last_over_first = 0;
};
/// Profiles at increasing times (at least 3).
ScatteringReport scattering_from_profiles(const std::vector<Profile>& at_times, double N_prime);
/// Picks the stored snapshots at `times` (each must be a recorded time).
ScatteringReport scattering_check(const Trajectory& traj, const std::vector<double>& times, double N_prime);

/// Binary trajectory file, little-endian. See docs/trajectory_format.md.
class TrajectoryWriter {
 public:
  TrajectoryWriter(const std::string& path, double dt, int record_stride, bool nonlinear);
  ~TrajectoryWriter();
  TrajectoryWriter(const TrajectoryWriter&) = delete;
  TrajectoryWriter& operator=(const TrajectoryWriter&) = delete;
  void append(const Profile& p);
  void close();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

void write_trajectory(const std::string& path, const Trajectory& traj);
/// Throws Error on a malformed or truncated file.
Trajectory read_trajectory(const std::string& path);

}  // namespace epkg
