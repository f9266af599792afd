#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "epkg/config.hpp"
#include "epkg/estimates.hpp"
#include "epkg/integrator.hpp"
#include "epkg/normal_form.hpp"
#include "epkg/phase.hpp"
#include "epkg/series.hpp"

namespace epkg {

/// Bootstrap-norm components at one snapshot, h = e^{it⟨∇⟩}f.
struct XNormRow {
  double t = 0;
  XNormRaw raw;
  double t_sup_decay = 0;  ///< ⟨t⟩ ‖|∇|^{1/2}⟨∇⟩h‖_∞
  double t_hN = 0;         ///< ⟨t⟩^{-δ₁} ‖h‖_{H^N}
  double t_lq = 0;         ///< ⟨t⟩^{1-2/q} ‖h‖_{L^q}
};
XNormRow compute_xnorm_components(const Profile& p, const ParamSet& params);

/// sup_decay, hN, hNprime, lq, weighted, then the three weighted products.
std::vector<std::string> xnorm_columns();
std::vector<double> xnorm_values(const XNormRow& row);

struct DecayFit {
  double exponent = 0;
  double intercept = 0;  ///< log-amplitude at t = 1
  double r2 = 0;
  std::size_t points = 0;
  double t0 = 0, t1 = 0;
};
/// Least-squares slope of log v against log t over t0 <= t <= t1.
/// Throws InvalidArgument with fewer than 8 points in the window or a nonpositive value there.
DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1);
DecayFit decay_fit(const NormSeries& s, const std::string& column, double t0, double t1);

/// max/min of v over t0 <= t <= t1 (infinite if the minimum is 0).
double spread(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1);

struct CriterionResult {
  std::string id;           ///< "1".."11" for acceptance criteria, a name for extra checks
  std::string description;
  bool pass = false;
  double measured = 0;
  std::string requirement;
  std::string detail;
};
bool all_pass(const std::vector<CriterionResult>& c);
std::string format_criterion(const CriterionResult& c);

/// Thread count from EPKG_NUM_THREADS (default: OpenMP's choice); 1 when deterministic.
int configure_threads(bool deterministic);

using LogFn = std::function<void(const std::string&)>;

struct SimulationResult {
  RunConfig config;
  double wrap_horizon = 0;
  XNormRaw initial;
  /// xnorm_columns() plus dtf_lq = ‖e^{it⟨∇⟩}∂_t f‖_{L^q}.
  NormSeries norms;
  GDecayScan g;
  EnergyReport energy;
  ScatteringReport scattering;  ///< empty unless T_end >= 100
  std::map<std::string, DecayFit> fits;
  double hN_max_ratio = 0;  ///< max_t ‖h(t)‖_{H^N} / ‖h₀‖_{H^N}
  std::vector<CriterionResult> criteria;
  double seconds = 0;
};

/// Builds the data, integrates with streaming norm bookkeeping, evaluates g at
/// g_samples log-spaced snapshot times, fits exponents and evaluates the
/// criteria that apply to the task. Writes the output files named in the config.
SimulationResult run_simulation(const RunConfig& cfg, const LogFn& log = {});

struct LemmaOptions {
  std::size_t samples = 100000;
  double phase_radius = 20;
  double deform_radius = 20;
  std::size_t factorization_samples = 10000;
  double factorization_radius = 5;
  std::uint64_t seed = 1;
  /// Lattices on which the phase bound is certified pair by pair.
  std::vector<GridSpec> lattices;
  bool kernel = true;
};

struct KernelScan {
  std::vector<KernelReport> reports;
  double constant = 0;  ///< max ‖K‖₁/⟨Mt⟩
};
KernelScan kernel_scan(const std::vector<double>& Ms, const std::vector<double>& ts, const KernelOptions& opts = {});

struct LemmaReport {
  LemmaOptions options;
  std::array<PhaseBound, 4> phase_random;
  std::vector<std::pair<GridSpec, std::array<PhaseBound, 4>>> phase_lattice;
  DeformScan deform;
  std::array<FactorizationScan, 3> factorization;
  std::vector<BernsteinReport> bernstein;
  KernelScan kernel;
  std::vector<CriterionResult> criteria;
  double seconds = 0;
};
/// Default lattices: 16² with L = 4π (normal-form grid) and 64² with L = 32.
LemmaReport verify_lemmas(const LemmaOptions& opts, const LogFn& log = {});

struct NormalFormOptions {
  int n = 16;
  double L = 4.0 * std::numbers::pi;
  double amplitude = 0.01;
  double sigma = 1.0;
  double t = 1.0;
  double snapshot_dt = 0.0125;
  double t_long = 5.0;  ///< 0 disables the long-time check
};
struct NormalFormCheck {
  NormalFormOptions options;
  Decomposition base, refined, long_time;
  double refinement_ratio = 0;  ///< base residual / residual at half the snapshot dt
  double long_ratio = 0;        ///< long-time residual / base residual
  std::vector<CriterionResult> criteria;
  double seconds = 0;
};
NormalFormCheck normal_form_check(const NormalFormOptions& opts, const LogFn& log = {});

}  // namespace epkg
