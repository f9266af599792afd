#pragma once

#include <memory>
#include <vector>

#include "epkg/field.hpp"

namespace epkg {

/// Radial bump: 1 on [0, 1], 0 on [25/24, ∞), C^∞ monotone transition between.
double bump(double r);

/// A scalar Fourier multiplier from the fixed catalogue.
///
/// Symbols singular at ξ = 0 (Riesz, |ξ|^s with s < 0, Δ^{-1}) are 0 there.
/// Riesz convention: R_j = ∂_j/|∇| has symbol iξ_j/|ξ|.
class MultiplierSpec {
 public:
  enum class Kind {
    riesz,
    abs_grad_power,
    bracket_power,
    lp_at,
    lp_leq,
    lp_gt,
    lp_fat,
    kg_semigroup,
    inverse_laplacian,
    custom
  };

  static MultiplierSpec riesz(int j);
  static MultiplierSpec abs_grad_power(double s);
  static MultiplierSpec bracket_power(double s);
  /// P_N: φ(ξ/N) - φ(2ξ/N).
  static MultiplierSpec lp_at(double N);
  static MultiplierSpec lp_leq(double N);
  static MultiplierSpec lp_gt(double N);
  /// P̃_N = P_{N/2} + P_N + P_{2N}.
  static MultiplierSpec lp_fat(double N);
  /// e^{it⟨∇⟩}.
  static MultiplierSpec kg_semigroup(double t);
  /// Δ^{-1}: symbol -1/|ξ|².
  static MultiplierSpec inverse_laplacian();
  static MultiplierSpec custom(const GridSpec& grid, std::vector<cd> values);

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  /// Symbol at a single frequency (custom multipliers cannot be evaluated off-table).
  cd evaluate(double kx, double ky) const;
  /// Symbol on every storage slot of `grid` (off-lattice slots are 0).
  std::vector<cd> tabulate(const GridSpec& grid) const;

 private:
  MultiplierSpec(Kind k, double p, int j = 0) : kind_(k), param_(p), component_(j) {}
  Kind kind_;
  double param_ = 0.0;
  int component_ = 0;
  GridSpec table_grid_{};
  std::shared_ptr<const std::vector<cd>> table_;
};

SpectralField apply_multiplier(const MultiplierSpec& m, const SpectralField& f);
/// Pointwise product of the lattice values of two multipliers.
MultiplierSpec compose(const MultiplierSpec& a, const MultiplierSpec& b, const GridSpec& grid);

enum class LpKind { at, leq, gt, fat };
/// Littlewood–Paley projection; N must be positive (dyadic or not).
SpectralField lp_project(const SpectralField& f, double N, LpKind kind);

}  // namespace epkg
