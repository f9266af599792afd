#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "epkg/field.hpp"

namespace epkg {

/// Rescaled Euler–Poisson unknowns: density perturbation u (density is 1 + u),
/// velocity v, potential psi with Δψ = u.
struct FluidState {
  SpectralField u, v1, v2, psi;
};

/// h = (⟨∇⟩/|∇|)u + i(∇/|∇|)·v at time t.
struct DiagonalState {
  SpectralField h;
  double t = 0.0;
};

/// Sobolev indices and small parameters of the bootstrap norm.
struct ParamSet {
  double N = 8.0;
  double N_prime = 4.0;
  double N1 = 2.0;
  double delta1 = 0.05;
  double delta2 = 0.4;
  double eps1 = 0.1;

  double q() const { return N1 / eps1; }
  /// Throws InvalidArgument if the ordering N1 < N' < N, eps1 < delta2/N1 < delta2 < 1,
  /// delta1 < delta2/N1 fails or a parameter is not positive.
  void validate() const;
};

/// ψ̂ = -û/|ξ|², zero mode 0. Throws NeutralityViolation if û(0) != 0.
SpectralField poisson_solve(const SpectralField& u);

/// Checks the FluidState invariants and forms h. Throws NeutralityViolation,
/// RotationalInput, or PreconditionError (velocity with nonzero mean).
DiagonalState diagonalize(const FluidState& s, double t = 0.0);
/// Inverse of diagonalize; velocity comes back as a gradient, psi is recomputed.
FluidState undiagonalize(const DiagonalState& d);

/// Quadratic part of ∂_t h = i⟨∇⟩h + N(h):
///   N(h) = -(⟨∇⟩/|∇|)∇·(u v) + (i/2)|∇|(u² + |v|²),
/// products formed on a 3/2-padded grid so they equal the lattice convolution.
SpectralField nonlinearity(const SpectralField& h);
inline SpectralField nonlinearity(const DiagonalState& d) { return nonlinearity(d.h); }

/// Right side i⟨∇⟩h + N(h) (N dropped when `nonlinear` is false).
SpectralField time_derivative(const SpectralField& h, bool nonlinear = true);

/// Relative residual of (□+1)u = Δ(½u² + ½|v|²) - ∂_t∇·(uv), maximized over the
/// interior snapshots; ∂_t by five-point central differences.
/// With `include_nonlinear` false the right side is dropped (free Klein–Gordon check).
/// Throws InvalidArgument for fewer than 5 snapshots or dt <= 0.
double kg_residual(const std::vector<FluidState>& snapshots, double dt, bool include_nonlinear = true);

enum class DensityProfile { zero, gaussian, laplacian_gaussian, random_smooth };
enum class PotentialProfile { zero, gaussian, random_smooth };

struct InitialDataSpec {
  double amplitude = 0.01;
  DensityProfile density = DensityProfile::laplacian_gaussian;
  double density_sigma = 2.0;
  PotentialProfile potential = PotentialProfile::gaussian;
  double potential_sigma = 2.0;
  std::uint64_t seed = 1;
};

DensityProfile parse_density_profile(const std::string& name);
PotentialProfile parse_potential_profile(const std::string& name);
std::string to_string(DensityProfile p);
std::string to_string(PotentialProfile p);

/// Raw (unweighted) components of the bootstrap norm of h at time t.
struct XNormRaw {
  double sup_decay = 0;  ///< ‖|∇|^{1/2}⟨∇⟩h‖_∞
  double hN = 0;         ///< ‖h‖_{H^N}
  double hN_prime = 0;   ///< ‖h‖_{H^{N'}}
  double lq = 0;         ///< ‖h‖_{L^q}
  double weighted = 0;   ///< ‖⟨x⟩e^{-it⟨∇⟩}h‖_{L^{2+ε₁}}
};
XNormRaw xnorm_raw(const SpectralField& h, double t, const ParamSet& params);

struct InitialData {
  DiagonalState state;
  FluidState fluid;
  XNormRaw initial_norms;
  double min_density = 1.0;  ///< min of 1 + u over the grid
};

/// u = ε(profile - mean), v = ε∇(potential), both peak-normalized before scaling.
/// Throws PreconditionError if a profile puts >= 1% of its mass in the outer
/// frame max(|x|,|y|) > 0.4 L, or if 1 + u is not positive; InvalidArgument if ε < 0.
InitialData make_initial_data(const GridSpec& grid, const InitialDataSpec& spec,
                              const ParamSet& params = {});

}  // namespace epkg
