#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <tuple>

#include "doctest.h"
#include "epkg/errors.hpp"
#include "epkg/model.hpp"
#include "epkg/quadratic.hpp"
#include "test_util.hpp"

using namespace epkg;
using epkg::testing::max_diff;
using epkg::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

SpectralField padded_product(const SpectralField& a, const SpectralField& b) {
  const int m = dealiased_size(a.grid().nx);
  PhysicalField pa = to_physical(a, m, m);
  const PhysicalField pb = to_physical(b, m, m);
  for (std::size_t i = 0; i < pa.values.size(); ++i) pa.values[i] *= pb.values[i];
  return from_physical(pa);
}

double rel(const SpectralField& a, const SpectralField& b) { return max_diff(a, b) / std::max(1e-300, b.max_abs()); }

Vec2 random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

BilinearSymbol separable_example() {
  BilinearSymbol m;
  m.eval = [](Vec2 xi, Vec2 eta) { return norm(xi) * bracket(xi - eta) * cd(0.0, eta.x); };
  m.separable = {{[](Vec2 xi) { return cd(norm(xi)); }, [](Vec2 z) { return cd(bracket(z)); },
                  [](Vec2 e) { return cd(0.0, e.x); }}};
  return m;
}

}  // namespace

TEST_CASE("bilinear operator") {
  const GridSpec g = GridSpec::square(8, 6.0);
  const SpectralField F = random_field(g, 1), G = random_field(g, 2), H = random_field(g, 3);
  SUBCASE("unit symbol is the lattice product") {
    const BilinearSymbol one{[](Vec2, Vec2) { return cd(1.0); }, {}};
    // Σ_η F(ξ-η)G(η)Δη = (2π)²·(fg)^ under the coefficient normalization
    const SpectralField expect = (4 * pi * pi) * padded_product(F, G);
    CHECK(rel(bilinear_apply(one, F, G), expect) < 1e-12);
  }
  SUBCASE("separable fast path") {
    const BilinearSymbol m = separable_example();
    const SpectralField direct = bilinear_apply(m, F, G);
    BilinearOptions fast;
    fast.fast_path = true;
    CHECK(rel(bilinear_apply(m, F, G, fast), direct) < 1e-10);
    CHECK(m.factorization_residual(g, 200) < 1e-12);
    CHECK(rel(bilinear_apply(BilinearTable(m, g), F, G), direct) < 1e-13);
    const BilinearSymbol plain{m.eval, {}};
    CHECK_THROWS_AS(bilinear_apply(plain, F, G, fast), InvalidArgument);
  }
  SUBCASE("bilinearity") {
    const BilinearSymbol m = m0_symbol(SignCombo::quadratic(1, -1));
    const cd a(0.3, -1.1);
    const SpectralField lhs = bilinear_apply(m, a * F + H, G);
    const SpectralField rhs = a * bilinear_apply(m, F, G) + bilinear_apply(m, H, G);
    CHECK(rel(lhs, rhs) < 1e-13);
    const SpectralField lhs2 = bilinear_apply(m, F, a * G + H);
    CHECK(rel(lhs2, a * bilinear_apply(m, F, G) + bilinear_apply(m, F, H)) < 1e-13);
  }
  SUBCASE("slot exchange") {
    const BilinearSymbol m = m0_symbol(SignCombo::quadratic(-1, 1));
    const BilinearSymbol swapped{[m](Vec2 xi, Vec2 eta) { return m.eval(xi, xi - eta); }, {}};
    CHECK(rel(bilinear_apply(swapped, G, F), bilinear_apply(m, F, G)) < 1e-13);
  }
  SUBCASE("duality with the unit symbol") {
    // Σ_ξ T(F,G)(ξ)H(-ξ) is symmetric in its three arguments when m = 1
    const BilinearSymbol one{[](Vec2, Vec2) { return cd(1.0); }, {}};
    auto pairing = [&](const SpectralField& a, const SpectralField& b, const SpectralField& c) {
      const SpectralField t = bilinear_apply(one, a, b);
      cd s = 0;
      for (std::size_t i = 0; i < g.size(); ++i) s += t[i] * c[g.negated(i)];
      return s;
    };
    const cd p1 = pairing(F, G, H), p2 = pairing(H, F, G), p3 = pairing(G, H, F);
    CHECK(std::abs(p1 - p2) < 1e-12 * std::abs(p1));
    CHECK(std::abs(p1 - p3) < 1e-12 * std::abs(p1));
  }
  SUBCASE("support pruning") {
    BilinearOptions o;
    o.support_tol = 1e-300;
    const BilinearSymbol m = m0_symbol(SignCombo::quadratic(1, 1));
    CHECK(max_diff(bilinear_apply(m, F, G, o), bilinear_apply(m, F, G)) < 1e-15);
  }
  SUBCASE("grid mismatch") {
    const SpectralField other = random_field(GridSpec::square(8, 7.0), 4);
    CHECK_THROWS_AS(bilinear_apply(separable_example(), F, other), GridMismatch);
  }
}

TEST_CASE("trilinear operator") {
  const GridSpec g = GridSpec::square(8, 6.0);
  const SpectralField F = random_field(g, 5), G = random_field(g, 6), H = random_field(g, 7);
  const Symbol2 outer = [](Vec2 xi, Vec2 eta) { return cd(std::cos(xi.x - 0.3 * eta.y), norm(eta)); };
  const Symbol2 inner = [](Vec2 eta, Vec2 sigma) { return cd(bracket(eta - sigma), -sigma.x); };
  TrilinearSymbol m;
  m.eval = [=](Vec2 xi, Vec2 eta, Vec2 sigma) { return outer(xi, eta) * inner(eta, sigma); };
  m.nested = TrilinearSymbol::Nested{outer, inner};
  const SpectralField direct = trilinear_apply(m, F, G, H, false);
  SUBCASE("nested factorization agrees with the direct sum") {
    CHECK(rel(trilinear_apply(m, F, G, H), direct) < 1e-12);
  }
  SUBCASE("nested equals two bilinear applications") {
    const SpectralField inner_f = bilinear_apply(BilinearSymbol{inner, {}}, G, H);
    CHECK(rel(bilinear_apply(BilinearSymbol{outer, {}}, F, inner_f), direct) < 1e-12);
  }
  SUBCASE("brute force at one output frequency") {
    const double dk = g.dk();
    const int J = g.jmax_x();
    cd s = 0;
    for (int ex = -J; ex <= J; ++ex)
      for (int ey = -J; ey <= J; ++ey)
        for (int sx = -J; sx <= J; ++sx)
          for (int sy = -J; sy <= J; ++sy) {
            const int zx = 1 - ex, zy = -2 - ey, wx = ex - sx, wy = ey - sy;
            if (!g.on_lattice(zx, zy) || !g.on_lattice(wx, wy)) continue;
            s += m.eval({dk, -2 * dk}, {ex * dk, ey * dk}, {sx * dk, sy * dk}) * F.at(zx, zy) * G.at(wx, wy) * H.at(sx, sy);
          }
    s *= dk * dk * dk * dk;
    CHECK(std::abs(direct.at(1, -2) - s) < 1e-12 * std::abs(s));
  }
  SUBCASE("no factorization on a large grid") {
    const GridSpec big = GridSpec::square(2 * kTrilinearDirectMax, 6.0);
    const SpectralField z(big, false);
    TrilinearSymbol plain{m.eval, std::nullopt};
    CHECK_THROWS_AS(trilinear_apply(plain, z, z, z), InvalidArgument);
  }
}

TEST_CASE("quadratic kernels") {
  std::mt19937_64 rng(21);
  const double cn = quadratic_normalization();
  CHECK(cn == doctest::Approx(1.0 / (4 * pi * pi)));
  SUBCASE("zero at the singular points") {
    const Vec2 a{0.7, -0.2};
    for (const auto& c : quadratic_combos()) {
      CHECK(m0_value(c, {0, 0}, a) == cd(0.0));
      CHECK(m0_value(c, a, {0, 0}) == cd(0.0));
      CHECK(m0_value(c, a, a) == cd(0.0));
    }
  }
  SUBCASE("symmetrization and growth") {
    double worst_sym = 0, worst_growth = 0;
    for (int k = 0; k < 2000; ++k) {
      const Vec2 xi = random_point(rng, 30), eta = random_point(rng, 30);
      for (const auto& c : quadratic_combos()) {
        const SignCombo sw = SignCombo::quadratic(c.e3(), c.e2());
        worst_sym = std::max(worst_sym, std::abs(m0_value(c, xi, eta, true) - m0_value(sw, xi, xi - eta, true)));
        // the three families are bounded by |ξ|/2, ⟨ξ⟩ and |ξ|/2, each entering with weight 1/4
        worst_growth = std::max(worst_growth, std::abs(m0_value(c, xi, eta)) / (cn * bracket(xi)));
      }
    }
    CHECK(worst_sym <= 1e-12);
    CHECK(worst_growth <= 0.5 + 1e-12);
  }
  SUBCASE("conjugation identity") {
    for (int k = 0; k < 500; ++k) {
      const Vec2 xi = random_point(rng, 10), eta = random_point(rng, 10);
      for (const auto& c : quadratic_combos())
        CHECK(std::abs(std::conj(m0_value(c, -xi, -eta)) + m0_value(c, xi, eta)) < 1e-14 * (1 + bracket(xi)));
    }
  }
  SUBCASE("terms and slots") {
    const auto terms = quadratic_terms();
    for (int k = 0; k < 4; ++k) {
      CHECK(terms[k].combo == quadratic_combos()[k]);
      CHECK(slot_sign(terms[k].zeta_slot) == -terms[k].combo.e2());
      CHECK(slot_sign(terms[k].eta_slot) == -terms[k].combo.e3());
    }
    CHECK(quadratic_phase(SignCombo::quadratic(1, 1), {0, 0}, {0, 0}) == doctest::Approx(3.0));
    CHECK_THROWS_AS(m0_value(SignCombo::cubic(1, 1, 1), {1, 0}, {0, 1}), InvalidArgument);
  }
}

TEST_CASE("quadratic assembly reproduces the nonlinearity") {
  for (auto [n, L, real] : {std::tuple{8, 6.0, true}, std::tuple{8, 6.0, false}, std::tuple{12, 5.0, true}}) {
    const SpectralField h = random_field(GridSpec::square(n, L), 31 + n, real);
    const SpectralField N = nonlinearity(h);
    CHECK(rel(assemble_quadratic(h), N) < 1e-12);
  }
}

TEST_CASE("cubic contribution table") {
  const auto all = cubic_contributions();
  REQUIRE(all.size() == 32);
  const auto patterns = cubic_patterns();
  REQUIRE(patterns.size() == 8);
  std::size_t total = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto& p = patterns[k];
    CHECK(p.phase == cubic_combos()[k]);
    CHECK(p.contributions.size() == 4);
    total += p.contributions.size();
    for (const auto& c : p.contributions) {
      CHECK(c.phase == p.phase);
      CHECK(c.slots == p.slots);
    }
  }
  CHECK(total == 32);

  SUBCASE("hand-derived subset for (+,+,+)") {
    // ⟨ξ⟩+⟨ξ-η⟩+⟨η-σ⟩+⟨σ⟩: the undifferentiated outer slot needs phase sign +,
    // an f slot passes the inner signs through and a conjugate slot flips both.
    using Key = std::tuple<int, int, bool, int, int>;
    const std::set<Key> expect{{1, -1, true, 1, 1}, {1, 1, true, -1, -1}, {-1, 1, false, 1, 1}, {1, 1, false, -1, -1}};
    std::set<Key> got;
    for (const auto& c : patterns[0].contributions)
      got.insert({c.outer.combo.e2(), c.outer.combo.e3(), c.differentiate_eta, c.inner.combo.e2(), c.inner.combo.e3()});
    CHECK(got == expect);
    for (Slot s : patterns[0].slots) CHECK(s == Slot::conj_f);
  }
  SUBCASE("hand-derived subset for (+,-,-)") {
    using Key = std::tuple<int, int, bool, int, int>;
    const std::set<Key> expect{{1, -1, true, -1, -1}, {1, 1, true, 1, 1}, {-1, 1, false, -1, -1}, {1, 1, false, 1, 1}};
    std::set<Key> got;
    for (const auto& c : patterns[3].contributions)
      got.insert({c.outer.combo.e2(), c.outer.combo.e3(), c.differentiate_eta, c.inner.combo.e2(), c.inner.combo.e3()});
    REQUIRE(patterns[3].phase == SignCombo::cubic(1, -1, -1));
    CHECK(got == expect);
  }
}

TEST_CASE("cubic symbols") {
  std::mt19937_64 rng(41);
  const auto all = cubic_contributions();
  SUBCASE("factorized form and phase folding") {
    for (const auto& c : all) {
      const TrilinearSymbol m = m1_symbol(c);
      REQUIRE(m.nested.has_value());
      const TrilinearSymbol mt = m1_symbol_at_time(c, 0.7);
      for (int k = 0; k < 20; ++k) {
        const Vec2 xi = random_point(rng, 5), eta = random_point(rng, 5), sigma = random_point(rng, 5);
        const cd v = m.eval(xi, eta, sigma);
        CHECK(std::abs(v - m.nested->outer(xi, eta) * m.nested->inner(eta, sigma)) <= 1e-14 * std::abs(v));
        const cd folded = std::polar(1.0, -0.7 * PhaseSpec{c.phase}.value(xi, eta, sigma)) * v;
        CHECK(std::abs(mt.eval(xi, eta, sigma) - folded) <= 1e-13 * std::abs(v) + 1e-300);
      }
    }
  }
  SUBCASE("outer factor is m0 over iφ and inner is m0 up to conjugation") {
    for (const auto& c : all) {
      const Vec2 xi = random_point(rng, 4), eta = random_point(rng, 4), sigma = random_point(rng, 4);
      const Vec2 e = c.differentiate_eta ? eta : xi - eta;
      const cd expect = m0_value(c.outer.combo, xi, e) / cd(0.0, quadratic_phase(c.outer.combo, xi, e));
      CHECK(std::abs(m1_outer_value(c, xi, eta) - expect) <= 1e-14 * std::abs(expect));
      const bool conj_slot = (c.differentiate_eta ? c.outer.eta_slot : c.outer.zeta_slot) == Slot::conj_f;
      const cd in = m0_value(c.inner.combo, eta, sigma);
      CHECK(std::abs(m1_inner_value(c, eta, sigma) - (conj_slot ? -in : in)) <= 1e-14 * (1 + std::abs(in)));
    }
  }
  SUBCASE("outer factor bound") {
    // |φ| >= c/⟨|ξ|+|η|⟩ and |m0| <= C⟨ξ⟩ give |m0/φ| <= C'⟨·⟩²
    double worst = 0;
    for (int k = 0; k < 5000; ++k) {
      const Vec2 xi = random_point(rng, 20), eta = random_point(rng, 20);
      for (const auto& c : all) {
        const double w = bracket(norm(xi) + norm(eta));
        worst = std::max(worst, std::abs(m1_outer_value(c, xi, eta)) / (w * w));
      }
    }
    MESSAGE("max |m0/φ| / <|xi|+|eta|>^2 = " << worst);
    CHECK(std::isfinite(worst));
    CHECK(worst < 1.0);
  }
  SUBCASE("nested cubic on a lattice equals the direct sum") {
    const GridSpec g = GridSpec::square(8, 2 * pi);
    const SpectralField a = random_field(g, 51), b = random_field(g, 52), d = random_field(g, 53);
    for (std::size_t k : {0u, 9u, 22u}) {
      const TrilinearSymbol m = m1_symbol(all[k]);
      CHECK(rel(trilinear_apply(m, a, b, d, true), trilinear_apply(m, a, b, d, false)) < 1e-12);
    }
  }
}
