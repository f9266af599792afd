#include <cmath>
#include <numbers>

#include "doctest.h"
#include "epkg/errors.hpp"
#include "epkg/integrator.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "test_util.hpp"

using namespace epkg;
using epkg::testing::max_diff;
using epkg::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

SpectralField gradient(const SpectralField& phi, int j) {
  const auto& t = lattice_tables(phi.grid());
  SpectralField out(phi.grid(), phi.is_real());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = cd(0, j == 1 ? t.kx[i] : t.ky[i]) * phi[i];
  return out;
}

FluidState admissible(const GridSpec& g, std::uint64_t seed, double amp = 1.0) {
  FluidState s;
  s.u = amp * random_field(g, seed, true);
  s.u.set_real(true);
  const SpectralField phi = amp * random_field(g, seed + 100, true);
  s.v1 = gradient(phi, 1);
  s.v2 = gradient(phi, 2);
  s.psi = poisson_solve(s.u);
  return s;
}

// Exact lattice product: (fg)^(ξ) = (1/L²) Σ_η f̂(ξ-η) ĝ(η), off-lattice terms dropped.
SpectralField brute_product(const SpectralField& f, const SpectralField& g) {
  const GridSpec& gr = f.grid();
  SpectralField out(gr, false);
  for (int ax = -gr.jmax_x(); ax <= gr.jmax_x(); ++ax)
    for (int ay = -gr.jmax_y(); ay <= gr.jmax_y(); ++ay) {
      cd acc = 0;
      for (int bx = -gr.jmax_x(); bx <= gr.jmax_x(); ++bx)
        for (int by = -gr.jmax_y(); by <= gr.jmax_y(); ++by)
          if (gr.on_lattice(ax - bx, ay - by)) acc += f.at(ax - bx, ay - by) * g.at(bx, by);
      out.at(ax, ay) = acc / (gr.L * gr.L);
    }
  return out;
}

// Padded physical-space product, independent of the model's internals.
SpectralField padded_product(const SpectralField& f, const SpectralField& g) {
  const int m = dealiased_size(f.grid().nx);
  PhysicalField a = to_physical(f, m, m);
  const PhysicalField b = to_physical(g, m, m);
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] *= b.values[i];
  return from_physical(a);
}

}  // namespace

TEST_CASE("parameter set ordering") {
  ParamSet p;
  CHECK_NOTHROW(p.validate());
  CHECK(p.q() == 20.0);
  ParamSet bad = p;
  bad.N_prime = 9;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.eps1 = 0.3;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = p;
  bad.delta1 = 0.25;
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
}

TEST_CASE("Poisson solve") {
  const GridSpec g = GridSpec::square(16, 10.0);
  const SpectralField one = [&] {
    SpectralField f(g, false);
    f.at(2, 1) = 1.0;
    return f;
  }();
  const double k2 = std::pow(g.dk(), 2) * 5;
  CHECK(std::abs(poisson_solve(one).at(2, 1) + 1.0 / k2) < 1e-15);
  CHECK(poisson_solve(SpectralField(g, true)).max_abs() == 0.0);
  const SpectralField u = random_field(g, 4, true);
  const SpectralField lap = apply_multiplier(MultiplierSpec::abs_grad_power(2), poisson_solve(u));
  CHECK(l2_norm_spectral(lap + u) <= 1e-12 * l2_norm_spectral(u));  // Δψ = -|∇|²ψ = u
  SpectralField biased = u;
  biased[0] = 1.0;
  CHECK_THROWS_AS(poisson_solve(biased), NeutralityViolation);
}

TEST_CASE("diagonalization") {
  const GridSpec g = GridSpec::square(16, 12.0);
  SUBCASE("pure potential flow gives h = -i|∇|φ₁") {
    SpectralField phi(g, true);
    phi.at(1, 2) = 0.5;
    phi.at(-1, -2) = 0.5;
    FluidState s{SpectralField(g, true), gradient(phi, 1), gradient(phi, 2), SpectralField(g, true)};
    const DiagonalState d = diagonalize(s);
    const SpectralField expect = cd(0, -1) * apply_multiplier(MultiplierSpec::abs_grad_power(1), phi);
    CHECK(max_diff(d.h, expect) < 1e-15);
  }
  SUBCASE("zero velocity gives a Hermitian h") {
    FluidState s = admissible(g, 2);
    s.v1 = SpectralField(g, true);
    s.v2 = SpectralField(g, true);
    const DiagonalState d = diagonalize(s);
    CHECK(d.h.hermitian_defect() < 1e-13);
    const auto m = compose(MultiplierSpec::bracket_power(1), MultiplierSpec::abs_grad_power(-1), g);
    CHECK(max_diff(d.h, apply_multiplier(m, s.u)) < 1e-14);
  }
  SUBCASE("roundtrip and linearity") {
    const FluidState a = admissible(g, 7), b = admissible(g, 8);
    const DiagonalState da = diagonalize(a), db = diagonalize(b);
    CHECK(da.h[0] == cd(0.0));
    const FluidState back = undiagonalize(da);
    const double scale = std::max({a.u.max_abs(), a.v1.max_abs(), a.v2.max_abs()});
    CHECK(max_diff(back.u, a.u) <= 1e-10 * scale);
    CHECK(max_diff(back.v1, a.v1) <= 1e-10 * scale);
    CHECK(max_diff(back.v2, a.v2) <= 1e-10 * scale);
    CHECK(max_diff(back.psi, a.psi) <= 1e-10 * a.psi.max_abs());
    FluidState c{2.0 * a.u - 3.0 * b.u, 2.0 * a.v1 - 3.0 * b.v1, 2.0 * a.v2 - 3.0 * b.v2, SpectralField(g, true)};
    CHECK(max_diff(diagonalize(c).h, 2.0 * da.h - 3.0 * db.h) < 1e-12 * da.h.max_abs());
  }
  SUBCASE("rejections") {
    FluidState s = admissible(g, 9);
    s.v1 += random_field(g, 50, true);  // breaks the gradient structure
    CHECK_THROWS_AS(diagonalize(s), RotationalInput);
    FluidState t = admissible(g, 9);
    t.u[0] = 0.1;
    CHECK_THROWS_AS(diagonalize(t), NeutralityViolation);
    FluidState w = admissible(g, 9);
    w.v1[0] = 0.1;
    CHECK_THROWS_AS(diagonalize(w), PreconditionError);
  }
}

TEST_CASE("nonlinearity") {
  SUBCASE("zero input") {
    const GridSpec g = GridSpec::square(8, 6.0);
    CHECK(nonlinearity(SpectralField(g, false)).max_abs() == 0.0);
  }
  SUBCASE("u = 0, single-mode potential: brute-force convolution on 8x8") {
    const GridSpec g = GridSpec::square(8, 6.0);
    SpectralField phi(g, true);
    phi.at(1, 1) = cd(0.2, 0.1);  // 2ξ₀ stays on the lattice
    phi.at(-1, -1) = cd(0.2, -0.1);
    const FluidState s{SpectralField(g, true), gradient(phi, 1), gradient(phi, 2), SpectralField(g, true)};
    const SpectralField h = diagonalize(s).h;
    const SpectralField v2 = brute_product(s.v1, s.v1) + brute_product(s.v2, s.v2);
    const SpectralField expect = cd(0, 0.5) * apply_multiplier(MultiplierSpec::abs_grad_power(1), v2);
    const SpectralField got = nonlinearity(h);
    CHECK(max_diff(got, expect) <= 1e-13 * expect.max_abs());
    CHECK(expect.max_abs() > 0);
  }
  SUBCASE("h-equation matches the fluid equations") {
    // ∂_t u = -∇·v - ∇·(uv), ∂_t v = -∇u - ∇(½u² + ½|v|²) + ∇ψ, then ∂_t h via the diagonal map.
    const GridSpec g = GridSpec::square(16, 9.0);
    const FluidState s = admissible(g, 21, 0.3);
    const SpectralField h = diagonalize(s).h;
    const SpectralField uv1 = padded_product(s.u, s.v1), uv2 = padded_product(s.u, s.v2);
    const SpectralField q = 0.5 * (padded_product(s.u, s.u) + padded_product(s.v1, s.v1) + padded_product(s.v2, s.v2));
    const SpectralField ut = -1.0 * (gradient(s.v1, 1) + gradient(s.v2, 2) + gradient(uv1, 1) + gradient(uv2, 2));
    const SpectralField psi = poisson_solve(s.u);
    const SpectralField v1t = gradient(psi - s.u - q, 1), v2t = gradient(psi - s.u - q, 2);
    const auto B = MultiplierSpec::bracket_power(1), Ai = MultiplierSpec::abs_grad_power(-1);
    SpectralField expect = apply_multiplier(B, apply_multiplier(Ai, ut));
    expect += cd(0, 1) * apply_multiplier(Ai, gradient(v1t, 1) + gradient(v2t, 2));
    const SpectralField got = time_derivative(h);
    CHECK(max_diff(got, expect) <= 1e-10 * expect.max_abs());
    CHECK(got[0] == cd(0.0));
    // the free part alone
    CHECK(max_diff(time_derivative(h, false), apply_multiplier(MultiplierSpec::bracket_power(1), cd(0, 1) * h)) <
          1e-14 * h.max_abs());
  }
}

TEST_CASE("Klein-Gordon residual") {
  const GridSpec g = GridSpec::square(16, 4 * pi);
  InitialDataSpec spec;
  spec.density_sigma = spec.potential_sigma = 1.0;
  auto snapshots = [&](double amp, double dt, bool nonlinear) {
    spec.amplitude = amp;
    const InitialData d = make_initial_data(g, spec);
    RunOptions o;
    o.nonlinear = nonlinear;
    const Trajectory tr = run(d.state, 8 * dt, dt, 1, o);
    std::vector<FluidState> out;
    for (const auto& p : tr.profiles) out.push_back(undiagonalize(to_state(p)));
    return out;
  };
  SUBCASE("free evolution") {
    CHECK(kg_residual(snapshots(0.01, 1e-2, false), 1e-2, false) <= 1e-6);
  }
  SUBCASE("free Klein-Gordon mode") {
    // u = cos(ξ₀·x)cos(⟨ξ₀⟩t), v from the continuity equation.
    const int jx = 2, jy = 1;
    const double k1 = jx * g.dk(), k2 = jy * g.dk(), w = bracket(std::hypot(k1, k2));
    const double dt = 1e-2;
    std::vector<FluidState> states;
    for (int n = 0; n < 7; ++n) {
      const double t = n * dt;
      SpectralField u(g, true), phi(g, true);
      u.at(jx, jy) = u.at(-jx, -jy) = 0.5 * g.L * g.L * std::cos(w * t);
      // ∂_t u = -Δφ₁ ⇒ φ̂₁ = -(w/|ξ|²) sin(wt)·û(0)
      const double k2n = k1 * k1 + k2 * k2;
      phi.at(jx, jy) = phi.at(-jx, -jy) = 0.5 * g.L * g.L * (w / k2n) * std::sin(w * t) * -1.0;
      states.push_back({u, gradient(phi, 1), gradient(phi, 2), poisson_solve(u)});
    }
    CHECK(kg_residual(states, dt, false) <= 1e-6);
  }
  SUBCASE("small data: residual shrinks with dt and amplitude") {
    const double r1 = kg_residual(snapshots(1e-3, 2e-2, true), 2e-2);
    const double r2 = kg_residual(snapshots(1e-3, 1e-2, true), 1e-2);
    MESSAGE("kg residual dt=0.02: " << r1 << ", dt=0.01: " << r2);
    CHECK(r2 < r1);
    CHECK(r2 <= 1e-4);
  }
  CHECK_THROWS_AS(kg_residual({}, 0.1), InvalidArgument);
}

TEST_CASE("initial data") {
  const GridSpec g = GridSpec::square(64, 40.0);
  InitialDataSpec spec;
  SUBCASE("zero amplitude") {
    spec.amplitude = 0;
    const InitialData d = make_initial_data(g, spec);
    CHECK(d.state.h.max_abs() == 0.0);
    CHECK(d.initial_norms.hN == 0.0);
  }
  SUBCASE("Gaussian density, no potential") {
    spec.density = DensityProfile::gaussian;
    spec.potential = PotentialProfile::zero;
    const InitialData d = make_initial_data(g, spec);
    CHECK(d.fluid.u[0] == cd(0.0));
    CHECK(d.fluid.v1.max_abs() == 0.0);
    CHECK(d.fluid.v2.max_abs() == 0.0);
    CHECK(std::abs(d.fluid.u.max_abs()) > 0);
  }
  SUBCASE("default pair reports finite norms") {
    const InitialData d = make_initial_data(g, spec);
    CHECK(std::isfinite(d.initial_norms.hN));
    CHECK(d.initial_norms.hN > 0);
    CHECK(d.min_density > 0.98);
    CHECK(d.state.h[0] == cd(0.0));
    CHECK(lebesgue_norm(d.fluid.u, kInf) <= 0.0101);
  }
  SUBCASE("random smooth data is reproducible") {
    spec.density = DensityProfile::random_smooth;
    spec.potential = PotentialProfile::random_smooth;
    const InitialData a = make_initial_data(g, spec), b = make_initial_data(g, spec);
    CHECK(max_diff(a.state.h, b.state.h) == 0.0);
    spec.seed = 2;
    CHECK(max_diff(a.state.h, make_initial_data(g, spec).state.h) > 0.0);
  }
  SUBCASE("rejections") {
    spec.density_sigma = 12.0;  // spills into the outer frame
    CHECK_THROWS_AS(make_initial_data(g, spec), PreconditionError);
    spec.density_sigma = 2.0;
    spec.amplitude = 1.5;  // 1 + u < 0 at the centre
    CHECK_THROWS_AS(make_initial_data(g, spec), PreconditionError);
    spec.amplitude = -0.1;
    CHECK_THROWS_AS(make_initial_data(g, spec), InvalidArgument);
  }
  SUBCASE("profile names") {
    for (auto p : {DensityProfile::zero, DensityProfile::gaussian, DensityProfile::laplacian_gaussian,
                   DensityProfile::random_smooth})
      CHECK(parse_density_profile(to_string(p)) == p);
    for (auto p : {PotentialProfile::zero, PotentialProfile::gaussian, PotentialProfile::random_smooth})
      CHECK(parse_potential_profile(to_string(p)) == p);
    CHECK_THROWS_AS(parse_density_profile("tophat"), InvalidArgument);
  }
}
