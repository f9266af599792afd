#include "epkg/phase.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "epkg/errors.hpp"

namespace epkg {

SignCombo SignCombo::quadratic(int e2, int e3) {
  if (std::abs(e2) != 1 || std::abs(e3) != 1) throw InvalidArgument("phase signs must be +1 or -1");
  return SignCombo{2, {e2, e3, 1}};
}

SignCombo SignCombo::cubic(int e2, int e3, int e4) {
  if (std::abs(e2) != 1 || std::abs(e3) != 1 || std::abs(e4) != 1)
    throw InvalidArgument("phase signs must be +1 or -1");
  return SignCombo{3, {e2, e3, e4}};
}

std::string SignCombo::name() const {
  std::string s = "(";
  for (int k = 0; k < arity; ++k) {
    if (k) s += ',';
    s += e[k] > 0 ? '+' : '-';
  }
  return s + ")";
}

std::array<SignCombo, 4> quadratic_combos() {
  return {SignCombo::quadratic(1, 1), SignCombo::quadratic(1, -1), SignCombo::quadratic(-1, 1),
          SignCombo::quadratic(-1, -1)};
}

std::array<SignCombo, 8> cubic_combos() {
  std::array<SignCombo, 8> out;
  int k = 0;
  for (int a : {1, -1})
    for (int b : {1, -1})
      for (int c : {1, -1}) out[k++] = SignCombo::cubic(a, b, c);
  return out;
}

double PhaseSpec::value(Vec2 xi, Vec2 eta, Vec2 sigma) const {
  if (combo.arity == 2) return bracket(xi) + combo.e2() * bracket(xi - eta) + combo.e3() * bracket(eta);
  return bracket(xi) + combo.e2() * bracket(xi - eta) + combo.e3() * bracket(eta - sigma) +
         combo.e4() * bracket(sigma);
}

Vec2 PhaseSpec::grad_xi(Vec2 xi, Vec2 eta, Vec2) const {
  return bracket_gradient(xi) + combo.e2() * bracket_gradient(xi - eta);
}

Vec2 PhaseSpec::grad_eta(Vec2 xi, Vec2 eta, Vec2 sigma) const {
  const Vec2 a = (-combo.e2()) * bracket_gradient(xi - eta);
  if (combo.arity == 2) return a + combo.e3() * bracket_gradient(eta);
  return a + combo.e3() * bracket_gradient(eta - sigma);
}

Vec2 PhaseSpec::grad_sigma(Vec2, Vec2 eta, Vec2 sigma) const {
  if (combo.arity != 3) throw InvalidArgument("grad_sigma needs a cubic phase");
  return (-combo.e3()) * bracket_gradient(eta - sigma) + combo.e4() * bracket_gradient(sigma);
}

namespace {

Vec2 sample_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double th = 2.0 * std::numbers::pi * u(rng);
  return {r * std::cos(th), r * std::sin(th)};
}

void account(PhaseBound& b, Vec2 xi, Vec2 eta) {
  const double p = std::abs(PhaseSpec{b.combo}.value(xi, eta)) * bracket(norm(xi) + norm(eta));
  if (p < b.min_product) {
    b.min_product = p;
    b.worst_xi = xi;
    b.worst_eta = eta;
  }
  ++b.samples;
}

std::array<PhaseBound, 4> fresh_bounds() {
  std::array<PhaseBound, 4> out;
  const auto combos = quadratic_combos();
  for (int k = 0; k < 4; ++k) {
    out[k].combo = combos[k];
    out[k].min_product = std::numeric_limits<double>::infinity();
  }
  return out;
}

struct GaussLegendre16 {
  std::array<double, 16> x{}, w{};
  GaussLegendre16() {
    constexpr int n = 16;
    for (int i = 0; i < n; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) break;
      }
      x[i] = z;
      w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
  }
};

const GaussLegendre16& gl16() {
  static const GaussLegendre16 rule;
  return rule;
}

Mat2 jacobian(Vec2 z) {
  const double b2 = 1.0 + z.x * z.x + z.y * z.y;
  const double k = 1.0 / (b2 * std::sqrt(b2));
  return {k * (b2 - z.x * z.x), -k * z.x * z.y, -k * z.x * z.y, k * (b2 - z.y * z.y)};
}

}  // namespace

std::array<PhaseBound, 4> phase_lower_bound_scan(std::size_t samples, double radius, std::uint64_t seed) {
  if (samples < 10000) throw InvalidArgument("phase scan needs at least 10^4 samples");
  if (radius < 10.0) throw InvalidArgument("phase scan radius must be >= 10");
  std::mt19937_64 rng(seed);
  auto out = fresh_bounds();
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec2 xi = sample_disk(rng, radius), eta = sample_disk(rng, radius);
    for (auto& b : out) account(b, xi, eta);
  }
  return out;
}

std::array<PhaseBound, 4> phase_lower_bound_lattice(const GridSpec& g) {
  auto out = fresh_bounds();
  const double dk = g.dk();
  for (int ax = -g.jmax_x(); ax <= g.jmax_x(); ++ax)
    for (int ay = -g.jmax_y(); ay <= g.jmax_y(); ++ay)
      for (int bx = -g.jmax_x(); bx <= g.jmax_x(); ++bx)
        for (int by = -g.jmax_y(); by <= g.jmax_y(); ++by) {
          if (!g.on_lattice(ax - bx, ay - by)) continue;
          const Vec2 xi{ax * dk, ay * dk}, eta{bx * dk, by * dk};
          for (auto& b : out) account(b, xi, eta);
        }
  return out;
}

DeformResult deform_Q(Vec2 x, Vec2 y) {
  const Vec2 d = x - y;
  const auto& rule = gl16();
  // J varies on a unit scale near the origin; panels of length <= 2 keep the
  // rule accurate to ~1e-13 wherever the segment passes.
  const int panels = std::max(1, static_cast<int>(std::ceil(norm(d) / 2.0)));
  Mat2 q{};
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels, h = 1.0 / panels;
    for (int i = 0; i < 16; ++i) {
      const double tau = a + 0.5 * h * (rule.x[i] + 1.0);
      q = q + (0.5 * h * rule.w[i]) * jacobian(y + tau * d);
    }
  }
  DeformResult r;
  r.Q = q;
  r.norm = q.op_norm();
  const Vec2 lhs = bracket_gradient(x) - bracket_gradient(y);
  r.residual = norm(lhs - q * d);
  return r;
}

DeformScan deform_scan(std::size_t samples, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  DeformScan s;
  s.min_lower_product = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < samples; ++k) {
    const Vec2 x = sample_disk(rng, radius), y = sample_disk(rng, radius);
    const DeformResult r = deform_Q(x, y);
    s.max_residual = std::max(s.max_residual, r.residual);
    s.max_norm = std::max(s.max_norm, r.norm);
    const double b = bracket(norm(x) + norm(y));
    const double lower = r.norm * b * b * b;
    if (lower < s.min_lower_product) {
      s.min_lower_product = lower;
      s.worst_x = x;
      s.worst_y = y;
    }
    ++s.samples;
  }
  return s;
}

SignCombo lemma_phase(int which) {
  switch (which) {
    case 1: return SignCombo::cubic(1, -1, -1);
    case 2: return SignCombo::cubic(-1, 1, -1);
    case 3: return SignCombo::cubic(-1, -1, 1);
  }
  throw InvalidArgument("lemma phase index must be 1, 2 or 3");
}

FactorizationResult phase_factorization(int which, Vec2 xi, Vec2 eta, Vec2 sigma, bool printed_sign) {
  const PhaseSpec ph{lemma_phase(which)};
  const Vec2 gx = ph.grad_xi(xi, eta, sigma);
  const Vec2 gs = ph.grad_sigma(xi, eta, sigma);
  constexpr double kSingular = 1e-10;
  FactorizationResult r;
  Vec2 assembled;
  if (which == 1) {
    const Vec2 ge = ph.grad_eta(xi, eta, sigma);
    const Mat2 q1 = deform_Q(xi, eta - xi).Q;           // ∂_ξφ1 = Q̃1 (2ξ - η)
    const Mat2 q2 = deform_Q(eta - xi, eta - sigma).Q;  // ∂_ηφ1 = Q̃2 (σ - ξ)
    const Mat2 q3 = deform_Q(eta - sigma, sigma).Q;     // ∂_σφ1 = Q̃3 (η - 2σ)
    r.min_det = std::min(std::abs(q2.det()), std::abs(q3.det()));
    if (r.min_det < kSingular) {
      r.singular = true;
      return r;
    }
    // 2ξ - η = 2(ξ - σ) - (η - 2σ) = -2 Q̃2⁻¹∂_ηφ1 - Q̃3⁻¹∂_σφ1
    const double s2 = printed_sign ? 2.0 : -2.0;
    r.first = s2 * (q1 * q2.inverse());
    r.second = -1.0 * (q1 * q3.inverse());
    assembled = r.first * ge + r.second * gs;
  } else {
    // ∂_ξφ = Q(ξ, ξ-η) η, and ∂_σφ = ∓Q(·,·) η for φ2 / φ3
    const Mat2 q1 = deform_Q(xi, xi - eta).Q;
    const Mat2 q2 = which == 2 ? deform_Q(sigma - eta, sigma).Q : deform_Q(sigma, sigma - eta).Q;
    r.min_det = std::abs(q2.det());
    if (r.min_det < kSingular) {
      r.singular = true;
      return r;
    }
    r.first = q1;
    r.second = which == 2 ? -1.0 * q2.inverse() : q2.inverse();
    assembled = r.first * (r.second * gs);
  }
  r.residual = norm(gx - assembled);
  return r;
}

FactorizationScan phase_factorization_scan(int which, std::size_t samples, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  FactorizationScan s;
  s.which = which;
  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < samples; ++k) {
    const Vec2 xi = sample_disk(rng, radius), eta = sample_disk(rng, radius), sigma = sample_disk(rng, radius);
    const FactorizationResult r = phase_factorization(which, xi, eta, sigma);
    ++s.samples;
    if (r.singular) {
      ++s.singular;
      continue;
    }
    s.max_residual = std::max(s.max_residual, r.residual);
    if (r.residual <= 1e-10) ++s.within_tolerance;
    const double nq = r.first.op_norm();
    if (nq > 0.0) {
      lx.push_back(std::log(bracket(norm(xi) + norm(eta) + norm(sigma))));
      ly.push_back(std::log(nq));
    }
  }
  s.fraction_ok = s.samples ? static_cast<double>(s.within_tolerance) / s.samples : 0.0;
  if (lx.size() >= 2) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    s.bound_exponent = sxx > 0 ? sxy / sxx : 0.0;
    double c = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) c = std::max(c, ly[i] - s.bound_exponent * lx[i]);
    s.bound_constant = std::exp(c);
  }
  return s;
}

}  // namespace epkg
