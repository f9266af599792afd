#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "epkg/grid.hpp"
#include "epkg/vec2.hpp"

namespace epkg {

/// Signs of a phase ⟨ξ⟩ + e2⟨ξ-η⟩ + e3⟨η⟩ (arity 2) or
/// ⟨ξ⟩ + e2⟨ξ-η⟩ + e3⟨η-σ⟩ + e4⟨σ⟩ (arity 3).
struct SignCombo {
  int arity = 2;
  std::array<int, 3> e{1, 1, 1};

  /// Throws InvalidArgument unless every sign is ±1.
  static SignCombo quadratic(int e2, int e3);
  static SignCombo cubic(int e2, int e3, int e4);

  int e2() const { return e[0]; }
  int e3() const { return e[1]; }
  int e4() const { return e[2]; }
  std::string name() const;  // e.g. "(+,-)"
  friend bool operator==(const SignCombo&, const SignCombo&) = default;
};

/// All 4 quadratic combos, (+,+), (+,-), (-,+), (-,-).
std::array<SignCombo, 4> quadratic_combos();
/// All 8 cubic combos in lexicographic order from (+,+,+).
std::array<SignCombo, 8> cubic_combos();

/// x/⟨x⟩ (the gradient of ⟨x⟩).
inline Vec2 bracket_gradient(Vec2 x) { return (1.0 / bracket(x)) * x; }

/// Phase function with closed-form gradients.
struct PhaseSpec {
  SignCombo combo;

  double value(Vec2 xi, Vec2 eta, Vec2 sigma = {}) const;
  Vec2 grad_xi(Vec2 xi, Vec2 eta, Vec2 sigma = {}) const;
  Vec2 grad_eta(Vec2 xi, Vec2 eta, Vec2 sigma = {}) const;
  /// Only for arity 3.
  Vec2 grad_sigma(Vec2 xi, Vec2 eta, Vec2 sigma) const;
};

struct PhaseBound {
  SignCombo combo;
  double min_product = 0;  ///< min |φ(ξ,η)|·⟨|ξ|+|η|⟩
  Vec2 worst_xi, worst_eta;
  std::size_t samples = 0;
};

/// Random (ξ, η) uniform in the disk of radius `radius`.
/// Throws InvalidArgument for samples < 10⁴ or radius < 10.
std::array<PhaseBound, 4> phase_lower_bound_scan(std::size_t samples, double radius, std::uint64_t seed = 7);
/// Every pair of lattice frequencies with ξ - η also on the lattice.
std::array<PhaseBound, 4> phase_lower_bound_lattice(const GridSpec& grid);

struct DeformResult {
  Mat2 Q;
  double norm = 0;      ///< ‖Q‖ (spectral)
  double residual = 0;  ///< |x/⟨x⟩ - y/⟨y⟩ - Q(x - y)|
};

/// Q(x, y) = ∫₀¹ J(y + τ(x - y)) dτ with J(z) = (⟨z⟩²I - zzᵀ)/⟨z⟩³, by composite
/// 16-point Gauss–Legendre on panels of length <= 2.
DeformResult deform_Q(Vec2 x, Vec2 y);

struct DeformScan {
  std::size_t samples = 0;
  double max_residual = 0;
  double max_norm = 0;
  double min_lower_product = 0;  ///< min ‖Q‖·⟨|x|+|y|⟩³
  Vec2 worst_x, worst_y;
};
DeformScan deform_scan(std::size_t samples, double radius, std::uint64_t seed = 11);

/// Lemma phases φ1 = (+,-,-), φ2 = (-,+,-), φ3 = (-,-,+).
SignCombo lemma_phase(int which);

struct FactorizationResult {
  Mat2 first, second;  ///< (Q11, Q12) for φ1, (Q21, Q22) / (Q31, Q32) for φ2 / φ3
  double residual = 0;
  double min_det = 0;  ///< smallest |det| among the inverted Q̃ matrices
  bool singular = false;
};

/// Assembles ∂_ξφ from the deformation matrices and reports |∂_ξφ - assembled|.
/// For φ1, ∂_ηφ1 = Q̃2·(σ - ξ); `printed_sign` uses (ξ - σ) instead, which does
/// not close the identity and exists only to demonstrate that.
FactorizationResult phase_factorization(int which, Vec2 xi, Vec2 eta, Vec2 sigma, bool printed_sign = false);

struct FactorizationScan {
  int which = 1;
  std::size_t samples = 0;
  std::size_t singular = 0;
  std::size_t within_tolerance = 0;  ///< residual <= 1e-10 among non-singular samples
  double max_residual = 0;
  double fraction_ok = 0;
  /// Fit of log‖first‖ against log⟨|ξ|+|η|+|σ|⟩: exponent and the smallest C
  /// with ‖first‖ <= C⟨·⟩^exponent over the samples.
  double bound_exponent = 0;
  double bound_constant = 0;
};
FactorizationScan phase_factorization_scan(int which, std::size_t samples, double radius, std::uint64_t seed = 13);

}  // namespace epkg
