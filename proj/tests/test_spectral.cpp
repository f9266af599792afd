#include <cmath>
#include <numbers>

#include "doctest.h"
#include "epkg/errors.hpp"
#include "epkg/estimates.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "test_util.hpp"

using namespace epkg;
using epkg::testing::max_diff;
using epkg::testing::random_field;

namespace {

constexpr double pi = std::numbers::pi;

SpectralField single_mode(const GridSpec& g, int jx, int jy, cd amp = 1.0) {
  SpectralField f(g, false);
  f.at(jx, jy) = amp;
  return f;
}

}  // namespace

TEST_CASE("grid construction and lattice") {
  CHECK_THROWS_AS(GridSpec::make(3, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::make(2, 8, 1.0), InvalidArgument);
  CHECK_THROWS_AS(GridSpec::make(8, 8, 0.0), InvalidArgument);
  const GridSpec g = GridSpec::make(8, 12, 2.0);
  CHECK(g.jmax_x() == 3);
  CHECK(g.jmax_y() == 5);
  CHECK(g.on_lattice(0, 0));
  for (int jx = -3; jx <= 3; ++jx)
    for (int jy = -5; jy <= 5; ++jy) {
      CHECK(g.on_lattice(-jx, -jy));
      CHECK(g.negated(g.index(jx, jy)) == g.index(-jx, -jy));
    }
  CHECK_FALSE(g.on_lattice(4, 0));
  CHECK(dealiased_size(16) == 24);
  CHECK(dealiased_size(10) == 16);
}

TEST_CASE("physical transforms") {
  const GridSpec g = GridSpec::square(16, 2 * pi);
  SUBCASE("constant field has only a zero mode") {
    std::vector<double> one(g.size(), 1.0);
    const SpectralField f = from_physical(g, one);
    CHECK(std::abs(f[0] - cd(g.L * g.L)) < 1e-12);
    for (std::size_t i = 1; i < f.size(); ++i) CHECK(std::abs(f[i]) < 1e-12);
  }
  SUBCASE("plane wave has one coefficient") {
    std::vector<cd> v(g.size());
    const double k = g.dk();
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) v[i * g.ny + j] = std::polar(1.0, k * (2 * g.x(i) - 3 * g.y(j)));
    const SpectralField f = from_physical(g, std::span<const cd>(v));
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double expect = i == g.index(2, -3) ? g.L * g.L : 0.0;
      CHECK(std::abs(f[i] - expect) < 1e-10);
    }
  }
  SUBCASE("roundtrip and Parseval") {
    const SpectralField f = random_field(g, 5, true);
    const SpectralField back = from_physical(to_physical(f));
    CHECK(max_diff(f, back) <= 1e-12 * f.max_abs());
    CHECK(f.hermitian_defect() < 1e-12);
    CHECK(std::abs(lebesgue_norm(f, 2) - l2_norm_spectral(f)) <= 1e-10 * l2_norm_spectral(f));
    const RealPhysicalField r = to_physical_real(f, 24, 24);
    CHECK(max_diff(from_physical(r), f) <= 1e-12 * f.max_abs());
  }
  SUBCASE("dimension checks") {
    std::vector<double> bad(g.size() + 1);
    CHECK_THROWS_AS(from_physical(g, bad), DimensionMismatch);
    CHECK_THROWS_AS(to_physical(random_field(g, 1), 8, 16), DimensionMismatch);
    CHECK_THROWS_AS(require_same_grid(SpectralField(g), SpectralField(GridSpec::square(8, 1))), GridMismatch);
  }
}

TEST_CASE("multiplier catalogue") {
  const GridSpec g = GridSpec::square(32, 20.0);
  const SpectralField f = random_field(g, 11, true, 0.05);
  SUBCASE("zero-mode regularization and unit modulus") {
    for (const auto& m : {MultiplierSpec::riesz(1), MultiplierSpec::riesz(2), MultiplierSpec::abs_grad_power(-1.5),
                          MultiplierSpec::inverse_laplacian()})
      CHECK(m.evaluate(0, 0) == cd(0.0));
    for (cd v : MultiplierSpec::kg_semigroup(3.7).tabulate(g))
      if (v != 0.0) CHECK(std::abs(std::abs(v) - 1.0) < 1e-14);
    CHECK(MultiplierSpec::riesz(1).evaluate(2.0, 0.0) == cd(0.0, 1.0));
    CHECK(std::abs(MultiplierSpec::inverse_laplacian().evaluate(1.0, 1.0) + 0.5) < 1e-15);
    CHECK_THROWS_AS(MultiplierSpec::riesz(3), InvalidArgument);
  }
  SUBCASE("identity, inverse and reality") {
    CHECK(max_diff(apply_multiplier(MultiplierSpec::bracket_power(0), f), f) == 0.0);
    const SpectralField one = single_mode(g, 3, -2, cd(0.3, 0.4));
    const SpectralField back =
        apply_multiplier(MultiplierSpec::abs_grad_power(-1), apply_multiplier(MultiplierSpec::abs_grad_power(1), one));
    CHECK(max_diff(back, one) < 1e-15);
    const SpectralField r1 = apply_multiplier(MultiplierSpec::riesz(1), f);
    CHECK(r1.hermitian_defect() < 1e-12);
    CHECK(r1.is_real());
    CHECK(l2_norm_spectral(r1) <= l2_norm_spectral(f));
    CHECK_FALSE(apply_multiplier(MultiplierSpec::kg_semigroup(1.0), f).is_real());
  }
  SUBCASE("algebra and group law") {
    const auto a = MultiplierSpec::bracket_power(1.5), b = MultiplierSpec::riesz(2);
    const SpectralField ab = apply_multiplier(compose(a, b, g), f);
    CHECK(max_diff(ab, apply_multiplier(a, apply_multiplier(b, f))) <= 1e-15 * f.max_abs());
    const SpectralField st =
        apply_multiplier(MultiplierSpec::kg_semigroup(1.3), apply_multiplier(MultiplierSpec::kg_semigroup(-0.4), f));
    CHECK(max_diff(st, apply_multiplier(MultiplierSpec::kg_semigroup(0.9), f)) < 1e-12 * f.max_abs());
    std::vector<cd> tab(g.size());
    for (std::size_t i = 0; i < tab.size(); ++i) tab[i] = cd(0.5 * i, 1);
    const auto c = MultiplierSpec::custom(g, tab);
    CHECK(std::abs(apply_multiplier(c, f)[7] - tab[7] * f[7]) <= 1e-15 * std::abs(tab[7] * f[7]));
    CHECK_THROWS(c.evaluate(0.1, 0.1));
  }
}

TEST_CASE("Littlewood-Paley projections") {
  const GridSpec g = GridSpec::square(64, 40.0);
  const SpectralField f = random_field(g, 3, true, 0.002);
  CHECK_THROWS_AS(lp_project(f, 0.0, LpKind::at), InvalidArgument);
  SUBCASE("telescoping over dyadic scales") {
    const double Nmin = 0.25, Nmax = 8.0;
    SpectralField sum(g, false);
    for (double N = Nmin; N <= Nmax; N *= 2) sum += lp_project(f, N, LpKind::at);
    const SpectralField expect = lp_project(f, Nmax, LpKind::leq) - lp_project(f, Nmin / 2, LpKind::leq);
    CHECK(max_diff(sum, expect) <= 1e-12 * f.max_abs());
    // built from the same bump: P_{<=N} + Σ P_N' = P_{<=N''}
    SpectralField part = lp_project(f, 0.5, LpKind::leq);
    for (double N = 1; N <= 4; N *= 2) part += lp_project(f, N, LpKind::at);
    CHECK(max_diff(part, lp_project(f, 4, LpKind::leq)) <= 1e-12 * f.max_abs());
  }
  SUBCASE("fattened projection reproduces P_N from either side") {
    for (double N : {0.5, 1.0, 3.0}) {
      const SpectralField pn = lp_project(f, N, LpKind::at);
      CHECK(max_diff(lp_project(pn, N, LpKind::fat), pn) <= 1e-13 * f.max_abs());
      CHECK(max_diff(lp_project(lp_project(f, N, LpKind::fat), N, LpKind::at), pn) <= 1e-13 * f.max_abs());
    }
  }
  SUBCASE("low projection keeps a low mode, high projection removes it") {
    const SpectralField m = single_mode(g, 3, 1);  // |ξ| ≈ 0.50
    CHECK(max_diff(lp_project(m, 1.0, LpKind::leq), m) == 0.0);
    CHECK(lp_project(m, 1.0, LpKind::gt).max_abs() == 0.0);
  }
  SUBCASE("bump profile") {
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(1.0) == 1.0);
    CHECK(bump(25.0 / 24.0) == 0.0);
    CHECK(bump(1.02) > 0.0);
    CHECK(bump(1.02) < 1.0);
    CHECK(bump(1.01) > bump(1.03));
  }
}

TEST_CASE("norms") {
  const GridSpec g = GridSpec::square(16, 3.0);
  std::vector<double> c(g.size(), 2.5);
  const SpectralField k = from_physical(g, c);
  for (double p : {1.0, 2.0, 3.5})
    CHECK(std::abs(lebesgue_norm(k, p) - 2.5 * std::pow(g.L, 2.0 / p)) < 1e-12 * lebesgue_norm(k, p));
  CHECK(std::abs(lebesgue_norm(k, kInf) - 2.5) < 1e-12);
  CHECK_THROWS_AS(lebesgue_norm(k, 0.5), InvalidArgument);
  const SpectralField f = random_field(g, 2, true);
  CHECK(std::abs(sobolev_norm(f, 0) - lebesgue_norm(f, 2)) < 1e-12 * sobolev_norm(f, 0));
  const SpectralField m = single_mode(g, 2, 1) + single_mode(g, -2, -1);
  const double r = g.dk() * std::sqrt(5.0);
  CHECK(std::abs(sobolev_norm(m, 1) - bracket(r) * l2_norm_spectral(m)) < 1e-12);
  // the dealiased sampling sees the same band-limited function
  CHECK(std::abs(lebesgue_norm_dealiased(f, 2) - l2_norm_spectral(f)) < 1e-10 * l2_norm_spectral(f));
  CHECK(lebesgue_norm_dealiased(f, kInf) >= lebesgue_norm(f, kInf) * (1 - 1e-12));
  // ⟨x⟩ weight is at least 1, and equals 1 only at the origin
  CHECK(weighted_profile_norm(f, 2) > lebesgue_norm(f, 2));
}

TEST_CASE("Bernstein ratios") {
  const GridSpec g = GridSpec::square(64, 32.0);
  SUBCASE("single mode at scale M") {
    // |ξ0| = 4·dk ≈ 0.785; pick M with |ξ0| inside the P_M annulus
    const SpectralField m = single_mode(g, 4, 0) + single_mode(g, -4, 0);
    const double M = 4 * g.dk() * 1.2;
    const BernsteinReport r = bernstein_check(m, M, 2, 2, 1.0);
    CHECK(r.derivative_ratio >= 0.25);
    CHECK(r.derivative_ratio <= 4.0);
    CHECK(r.within);
    CHECK(bernstein_check(m, M, 2, kInf, 0.0).derivative_ratio == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Gaussian bump projected to P_M") {
    std::vector<double> v(g.size());
    for (int i = 0; i < g.nx; ++i)
      for (int j = 0; j < g.ny; ++j) v[i * g.ny + j] = std::exp(-(g.x(i) * g.x(i) + g.y(j) * g.y(j)) / 2.0);
    const SpectralField f = from_physical(g, v);
    for (double M : {0.5, 1.0, 2.0}) CHECK(bernstein_check(f, M, 2, kInf, 1.0).embedding_ratio <= 10.0);
  }
  CHECK_THROWS_AS(bernstein_check(random_field(g, 1), 1.0, 3, 2, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bernstein_check(random_field(g, 1), 1.0, 0.5, 2, 1.0), InvalidArgument);
}

namespace {

// ‖K‖_{L¹} for K̂ = φ(|ξ|) via the Hankel transform:
// K(r) = (1/2π)[J₁(r)/r + ∫₁^{25/24} φ(ρ) J₀(ρr) ρ dρ].
double radial_kernel_l1(double R, double dr) {
  static const double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
                                 0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
  static const double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
  const double a = 1.0, b = 25.0 / 24.0;
  auto K = [&](double r) {
    double disk = r < 1e-8 ? 0.5 : std::cyl_bessel_j(1.0, r) / r;
    double rim = 0;
    // panels short against the J₀(ρr) oscillation in ρ
    const int panels = 4 + static_cast<int>(r * (b - a));
    for (int p = 0; p < panels; ++p) {
      const double lo = a + (b - a) * p / panels, hi = a + (b - a) * (p + 1) / panels;
      for (int k = 0; k < 8; ++k) {
        const double rho = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl_x[k];
        rim += 0.5 * (hi - lo) * gl_w[k] * bump(rho) * std::cyl_bessel_j(0.0, rho * r) * rho;
      }
    }
    return (disk + rim) / (2 * pi);
  };
  double sum = 0;  // midpoint rule in r
  for (double r = 0.5 * dr; r < R; r += dr) sum += std::abs(K(r)) * 2 * pi * r * dr;
  return sum;
}

}  // namespace

TEST_CASE("propagator kernel L1 norm") {
  const KernelReport base = kernel_l1_norm(1.0, 0.0);
  CHECK(base.tail_fraction < 0.01);
  SUBCASE("matches the Hankel-transform oracle") {
    const double oracle = radial_kernel_l1(1500.0, 0.05);
    CHECK(base.l1 == doctest::Approx(oracle).epsilon(0.02));
  }
  SUBCASE("t = 0 is dilation invariant") {
    for (double M : {0.25, 4.0}) CHECK(kernel_l1_norm(M, 0.0).l1 == doctest::Approx(base.l1).epsilon(0.02));
  }
  SUBCASE("bounded by <t> over a sweep") {
    double lo = 1e300, hi = 0;
    for (double t : {1.0, 2.0, 4.0, 8.0}) {
      const double c = kernel_l1_norm(1.0, t).l1 / std::sqrt(1 + t * t);
      lo = std::min(lo, c);
      hi = std::max(hi, c);
    }
    CHECK(hi <= 20.0);
    CHECK(hi / lo < 5.0);
  }
  CHECK_THROWS_AS(kernel_l1_norm(0.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(kernel_l1_norm(1.0, -1.0), InvalidArgument);
  KernelOptions tiny;
  tiny.max_points = 64;
  CHECK_THROWS_AS(kernel_l1_norm(1.0, 0.0, tiny), Error);
}
