#include "epkg/quadratic.hpp"

#include <cmath>
#include <numbers>

#include "epkg/errors.hpp"

namespace epkg {

namespace {

// Slot signs (a at η, b at ξ-η) of a combo; a = -e3, b = -e2.
int eta_sign(const SignCombo& c) { return -c.e3(); }
int zeta_sign(const SignCombo& c) { return -c.e2(); }

SignCombo swapped(const SignCombo& c) { return SignCombo::quadratic(c.e3(), c.e2()); }

cd raw_m0(int a, int b, Vec2 xi, Vec2 eta) {
  const Vec2 zeta = xi - eta;
  const double r = norm(xi), re = norm(eta), rz = norm(zeta);
  if (r == 0.0 || re == 0.0 || rz == 0.0) return 0.0;
  const double be = bracket(re), bz = bracket(rz);
  const cd k11(0.0, 0.5 * r * re * rz / (be * bz));
  const double k12 = -bracket(r) * (re / be) * dot(xi, zeta) / (r * rz);
  const cd k22(0.0, -0.5 * r * dot(eta, zeta) / (re * rz));
  return quadratic_normalization() * (0.25 * k11 - cd(0.0, 0.25 * b) * k12 - (0.25 * a * b) * k22);
}

constexpr double kPhaseFloor = 1e-6;

cd outer_factor(const SignCombo& c, Vec2 xi, Vec2 eta) {
  const cd m = m0_value(c, xi, eta);
  if (m == 0.0) return 0.0;
  const double ph = quadratic_phase(c, xi, eta);
  if (std::abs(ph) < kPhaseFloor)
    throw Error("quadratic phase " + c.name() + " vanishes at a lattice point; sign bookkeeping is broken");
  return m / cd(0.0, ph);
}

}  // namespace

double quadratic_normalization() { return 1.0 / (4.0 * std::numbers::pi * std::numbers::pi); }

std::array<QuadraticTermSpec, 4> quadratic_terms() {
  std::array<QuadraticTermSpec, 4> out;
  const auto combos = quadratic_combos();
  for (int k = 0; k < 4; ++k)
    out[k] = {combos[k], slot_of_sign(zeta_sign(combos[k])), slot_of_sign(eta_sign(combos[k]))};
  return out;
}

double quadratic_phase(const SignCombo& c, Vec2 xi, Vec2 eta) { return PhaseSpec{c}.value(xi, eta); }

cd m0_value(const SignCombo& c, Vec2 xi, Vec2 eta, bool symmetrized) {
  if (c.arity != 2) throw InvalidArgument("m0 needs a quadratic combo");
  const cd direct = raw_m0(eta_sign(c), zeta_sign(c), xi, eta);
  if (!symmetrized) return direct;
  const SignCombo s = swapped(c);
  return 0.5 * (direct + raw_m0(eta_sign(s), zeta_sign(s), xi, xi - eta));
}

BilinearSymbol m0_symbol(const SignCombo& c, bool symmetrized) {
  return BilinearSymbol{[c, symmetrized](Vec2 xi, Vec2 eta) { return m0_value(c, xi, eta, symmetrized); }, {}};
}

SpectralField assemble_quadratic(const SpectralField& h) {
  const SpectralField hm = h.reflected_conjugate();
  SpectralField out(h.grid(), false);
  for (const auto& t : quadratic_terms()) {
    const SpectralField& z = t.zeta_slot == Slot::f ? h : hm;
    const SpectralField& e = t.eta_slot == Slot::f ? h : hm;
    out += bilinear_apply(m0_symbol(t.combo), z, e);
  }
  out[0] = 0.0;
  return out;
}

std::vector<CubicContribution> cubic_contributions() {
  std::vector<CubicContribution> out;
  for (const auto& outer : quadratic_terms())
    for (bool diff_eta : {true, false})
      for (const auto& inner : quadratic_terms()) {
        const int d = slot_sign(diff_eta ? outer.eta_slot : outer.zeta_slot);
        const int u = slot_sign(diff_eta ? outer.zeta_slot : outer.eta_slot);
        // ∂F₊(η) = Σ m(η,σ) F_{b'}(η-σ) F_{a'}(σ); ∂F₋ conjugates, flipping both slots.
        const int x = d * slot_sign(inner.zeta_slot);
        const int y = d * slot_sign(inner.eta_slot);
        CubicContribution c;
        c.outer = outer;
        c.differentiate_eta = diff_eta;
        c.inner = inner;
        c.slots = {slot_of_sign(u), slot_of_sign(x), slot_of_sign(y)};
        c.phase = SignCombo::cubic(-u, -x, -y);
        out.push_back(c);
      }
  return out;
}

std::vector<CubicPattern> cubic_patterns() {
  const auto all = cubic_contributions();
  std::vector<CubicPattern> out;
  for (const auto& ph : cubic_combos()) {
    CubicPattern p{ph, {slot_of_sign(-ph.e2()), slot_of_sign(-ph.e3()), slot_of_sign(-ph.e4())}, {}};
    for (const auto& c : all)
      if (c.phase == ph) p.contributions.push_back(c);
    out.push_back(std::move(p));
  }
  return out;
}

cd m1_outer_value(const CubicContribution& c, Vec2 xi, Vec2 eta) {
  return c.differentiate_eta ? outer_factor(c.outer.combo, xi, eta) : outer_factor(c.outer.combo, xi, xi - eta);
}

cd m1_inner_value(const CubicContribution& c, Vec2 eta, Vec2 sigma) {
  const bool conj_slot = (c.differentiate_eta ? c.outer.eta_slot : c.outer.zeta_slot) == Slot::conj_f;
  if (!conj_slot) return m0_value(c.inner.combo, eta, sigma);
  return std::conj(m0_value(c.inner.combo, -eta, -sigma));
}

TrilinearSymbol m1_symbol(const CubicContribution& c) {
  TrilinearSymbol t;
  t.eval = [c](Vec2 xi, Vec2 eta, Vec2 sigma) { return m1_outer_value(c, xi, eta) * m1_inner_value(c, eta, sigma); };
  t.nested = TrilinearSymbol::Nested{[c](Vec2 xi, Vec2 eta) { return m1_outer_value(c, xi, eta); },
                                     [c](Vec2 eta, Vec2 sigma) { return m1_inner_value(c, eta, sigma); }};
  return t;
}

TrilinearSymbol m1_symbol_at_time(const CubicContribution& c, double s) {
  const PhaseSpec ph{c.phase};
  TrilinearSymbol t;
  t.eval = [c, ph, s](Vec2 xi, Vec2 eta, Vec2 sigma) {
    return std::polar(1.0, -s * ph.value(xi, eta, sigma)) * m1_outer_value(c, xi, eta) *
           m1_inner_value(c, eta, sigma);
  };
  return t;
}

std::string to_string(Slot s) { return s == Slot::f ? "f" : "conj_f"; }

}  // namespace epkg
