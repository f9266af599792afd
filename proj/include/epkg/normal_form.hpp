#pragma once

#include <string>
#include <vector>

#include "epkg/integrator.hpp"
#include "epkg/series.hpp"

namespace epkg {

/// f(t) = h̃₀ + g(t) + f_cubic(t) with the residual of that identity.
struct Decomposition {
  double t = 0;
  SpectralField h0_tilde, g, f_cubic;
  double residual = 0;           ///< ‖f(t) - h̃₀ - g - f_cubic‖₂
  double relative_residual = 0;  ///< residual / ‖f(t)‖₂
  double f_norm = 0;
  double snapshot_dt = 0;
  std::size_t nodes = 0;  ///< Simpson nodes used
};

/// ∫₀ᵗ Σ_c Σ_η e^{-isφ_c} m_c F F dη ds by composite Simpson over the stored snapshots.
/// Throws PreconditionError unless the trajectory starts at 0 with profiles
/// stored, and InvalidArgument if t is not a snapshot time or the node count is even.
SpectralField duhamel_rhs(const Trajectory& traj, double t);

/// h̃₀ = h₀ + Σ_c T(m_c/(iφ_c), slot_ζ(h₀), slot_η(h₀)), zero mode 0.
SpectralField transformed_data(const SpectralField& h0);

enum class GMethod { automatic, table, generic, fused };

struct GOptions {
  GMethod method = GMethod::automatic;
  /// Fused path: frequencies with |ĥ| <= tol·max|ĥ| are dropped from the sum.
  double support_tol = 1e-6;
};

/// ĝ(t,ξ) = Σ_c Σ_η e^{-itφ_c} m_c/(-iφ_c) F(ξ-η) F(η) Δη, zero mode 0.
/// `automatic` tabulates the symbols on grids up to 32² and uses the fused
/// direct kernel above that.
SpectralField boundary_term_g(const Profile& p, const GOptions& opts = {});

/// ∫₀ᵗ of the 32 trilinear contributions (8 cubic patterns). Grids up to 32².
SpectralField cubic_term(const Trajectory& traj, double t);

Decomposition decompose(const Trajectory& traj, double t);

struct GDecayScan {
  /// Columns: g_hNprime = ‖g‖_{H^{N'}}, g_hNprime_half = ‖g‖_{H^{N'/2}},
  /// t_g_hNprime_half = ⟨t⟩‖g‖_{H^{N'/2}}.
  NormSeries series;
  /// ‖⟨x⟩g‖_{L^{2+ε₁}}, only for t <= half the wrap-around horizon.
  std::vector<double> weighted_times, weighted;
};
GDecayScan g_decay_scan(const std::vector<Profile>& profiles, const ParamSet& params, const GOptions& opts = {});
inline GDecayScan g_decay_scan(const Trajectory& traj, const ParamSet& params, const GOptions& opts = {}) {
  return g_decay_scan(traj.profiles, params, opts);
}

/// Piece norms, residual and quadrature parameters as a JSON document.
std::string decomposition_json(const Decomposition& d);

}  // namespace epkg
