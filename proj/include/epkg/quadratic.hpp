#pragma once

#include <array>
#include <string>
#include <vector>

#include "epkg/phase.hpp"
#include "epkg/pseudoproduct.hpp"

namespace epkg {

/// What a factor slot carries: the profile F₊(ζ) = f̂(ζ) or its reflected
/// conjugate F₋(ζ) = conj f̂(-ζ).
enum class Slot { f, conj_f };

inline int slot_sign(Slot s) { return s == Slot::f ? 1 : -1; }
inline Slot slot_of_sign(int s) { return s > 0 ? Slot::f : Slot::conj_f; }

/// One of the four quadratic interactions of the profile equation
///   ∂_t f̂(ξ) = Σ Σ_η e^{-itφ(ξ,η)} m(ξ,η) [slot at ξ-η](ξ-η) [slot at η](η) Δη,
/// with φ = ⟨ξ⟩ + e2⟨ξ-η⟩ + e3⟨η⟩. A slot carries f exactly when its phase sign is -1.
struct QuadraticTermSpec {
  SignCombo combo;
  Slot zeta_slot;  ///< factor at ξ - η
  Slot eta_slot;   ///< factor at η
};

/// The four terms, in the order of quadratic_combos().
std::array<QuadraticTermSpec, 4> quadratic_terms();

/// Normalization constant 1/(2π)² carried by every quadratic kernel.
double quadratic_normalization();

/// Kernel of `combo` as a function of (ξ, η). All three families are present:
///   K11 = (i/2)|ξ||η||ξ-η|/(⟨η⟩⟨ξ-η⟩)        (from u²)
///   K12 = -⟨ξ⟩(|η|/⟨η⟩)(ξ·(ξ-η))/(|ξ||ξ-η|)  (from ⟨∇⟩|∇|⁻¹∇·(uv), u at η)
///   K22 = -(i/2)|ξ|(η·(ξ-η))/(|η||ξ-η|)      (from |v|²)
/// and the combo selects the signs with which they enter. Zero if any of ξ, η, ξ-η is 0.
/// The symmetrized variant is ½(m_c(ξ,η) + m_c̄(ξ,ξ-η)), where c̄ swaps the slots.
cd m0_value(const SignCombo& combo, Vec2 xi, Vec2 eta, bool symmetrized = false);
BilinearSymbol m0_symbol(const SignCombo& combo, bool symmetrized = false);

double quadratic_phase(const SignCombo& combo, Vec2 xi, Vec2 eta);

/// Assembles Σ_c T_{m_c}(slot_ζ, slot_η) with H₊ = ĥ and H₋ = conj ĥ(-·); with
/// exact lattice products this reproduces N(h).
SpectralField assemble_quadratic(const SpectralField& h);

/// How ∂_s of a slot re-expands: the inner term and whether the differentiated
/// slot is a reflected conjugate (then the inner kernel enters as conj m(-η,-σ) = -m(η,σ)).
struct CubicContribution {
  QuadraticTermSpec outer;
  /// true: ∂_s hits the slot at η; false: the slot at ξ - η (the outer
  /// variables are then renamed η -> ξ - η so the differentiated slot sits at η).
  bool differentiate_eta = true;
  QuadraticTermSpec inner;
  /// Factors at ξ - η, η - σ, σ after substitution.
  std::array<Slot, 3> slots;
  /// Phase ⟨ξ⟩ + e2⟨ξ-η⟩ + e3⟨η-σ⟩ + e4⟨σ⟩ of the result.
  SignCombo phase;
};

/// All 32 contributions generated by substituting the quadratic expansion into itself.
std::vector<CubicContribution> cubic_contributions();

/// One cubic combo with its conjugation pattern and the contributions that feed it.
struct CubicPattern {
  SignCombo phase;
  std::array<Slot, 3> slots;
  std::vector<CubicContribution> contributions;
};
/// The 8 patterns, in the order of cubic_combos().
std::vector<CubicPattern> cubic_patterns();

/// Outer factor m_c(ξ,η)/(iφ_c(ξ,η)), or its η -> ξ-η reflection when the
/// contribution differentiates the ξ-η slot.
cd m1_outer_value(const CubicContribution& c, Vec2 xi, Vec2 eta);
/// Inner factor m_inner(η,σ), negated for a differentiated reflected-conjugate slot.
cd m1_inner_value(const CubicContribution& c, Vec2 eta, Vec2 sigma);

/// m1 = outer·inner, time-independent; the trilinear form acts on (H_{s1}, H_{s2}, H_{s3})
/// with H₊ = e^{is⟨∇⟩}f̂, H₋ its reflected conjugate, and the result carries e^{-is⟨ξ⟩}.
/// Throws Error if |φ| < 1e-6 at a sampled point.
TrilinearSymbol m1_symbol(const CubicContribution& c);

/// Same contributions with the phase e^{-isΦ} folded in, acting directly on profile slots.
TrilinearSymbol m1_symbol_at_time(const CubicContribution& c, double s);

std::string to_string(Slot s);

}  // namespace epkg
