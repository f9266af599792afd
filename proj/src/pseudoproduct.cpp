#include "epkg/pseudoproduct.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "epkg/errors.hpp"

namespace epkg {

namespace {

struct LatticePoint {
  int jx, jy;
  std::size_t idx;
  Vec2 k;
};

std::vector<LatticePoint> lattice_points(const GridSpec& g) {
  std::vector<LatticePoint> pts;
  const double dk = g.dk();
  for (int jx = -g.jmax_x(); jx <= g.jmax_x(); ++jx)
    for (int jy = -g.jmax_y(); jy <= g.jmax_y(); ++jy) pts.push_back({jx, jy, g.index(jx, jy), {jx * dk, jy * dk}});
  return pts;
}

SpectralField apply_factor(const Symbol1& s, const SpectralField& f) {
  if (!s) return f;
  const GridSpec& g = f.grid();
  SpectralField out(g, false);
  for (const auto& p : lattice_points(g)) out[p.idx] = s(p.k) * f[p.idx];
  return out;
}

SpectralField separable_apply(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G) {
  const GridSpec& g = F.grid();
  const int m0 = dealiased_size(g.nx), m1 = dealiased_size(g.ny);
  SpectralField out(g, false);
  const double weight = 4.0 * std::numbers::pi * std::numbers::pi;
  for (const auto& term : m.separable) {
    const PhysicalField a = to_physical(apply_factor(term.left, F), m0, m1);
    PhysicalField b = to_physical(apply_factor(term.right, G), m0, m1);
    for (std::size_t i = 0; i < b.values.size(); ++i) b.values[i] *= a.values[i];
    SpectralField prod = apply_factor(term.out, from_physical(b));
    out.axpy(weight, prod);
  }
  return out;
}

}  // namespace

double BilinearSymbol::factorization_residual(const GridSpec& g, std::size_t samples, std::uint64_t seed) const {
  if (separable.empty()) throw InvalidArgument("symbol has no separable factorization");
  const auto pts = lattice_points(g);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec2 xi = pts[pick(rng)].k, eta = pts[pick(rng)].k;
    cd sum = 0.0;
    for (const auto& t : separable)
      sum += (t.out ? t.out(xi) : 1.0) * (t.left ? t.left(xi - eta) : 1.0) * (t.right ? t.right(eta) : 1.0);
    worst = std::max(worst, std::abs(sum - eval(xi, eta)));
  }
  return worst;
}

SpectralField bilinear_apply(const BilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                             const BilinearOptions& opts) {
  require_same_grid(F, G);
  const GridSpec& g = F.grid();
  if (opts.fast_path) {
    if (m.separable.empty()) throw InvalidArgument("fast path requested for a symbol without factorization");
    return separable_apply(m, F, G);
  }
  if (!m.eval) throw InvalidArgument("bilinear symbol has no evaluator");
  const auto pts = lattice_points(g);
  const double fcut = opts.support_tol * F.max_abs(), gcut = opts.support_tol * G.max_abs();
  std::vector<const LatticePoint*> eta_support;
  for (const auto& p : pts)
    if (std::abs(G[p.idx]) > gcut) eta_support.push_back(&p);

  SpectralField out(g, false);
  const double weight = g.dk() * g.dk();
  const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < n; ++i) {
    const LatticePoint& xi = pts[i];
    cd acc = 0.0;
    for (const LatticePoint* eta : eta_support) {
      const int zx = xi.jx - eta->jx, zy = xi.jy - eta->jy;
      if (!g.on_lattice(zx, zy)) continue;
      const cd f = F[g.index(zx, zy)];
      if (std::abs(f) <= fcut) continue;
      acc += m.eval(xi.k, eta->k) * f * G[eta->idx];
    }
    out[xi.idx] = weight * acc;
  }
  return out;
}

BilinearTable::BilinearTable(const BilinearSymbol& m, const GridSpec& grid) : grid_(grid) {
  const auto pts = lattice_points(grid);
  for (const auto& p : pts) active_.push_back(p.idx);
  const std::size_t n = pts.size();
  m_.assign(n * n, cd{});
  const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < ln; ++i)
    for (std::size_t j = 0; j < n; ++j) m_[i * n + j] = m.eval(pts[i].k, pts[j].k);
}

BilinearTable BilinearTable::from_values(const GridSpec& grid, std::vector<cd> values) {
  BilinearTable t;
  t.grid_ = grid;
  for (const auto& p : lattice_points(grid)) t.active_.push_back(p.idx);
  if (values.size() != t.active_.size() * t.active_.size())
    throw DimensionMismatch("table size does not match the lattice");
  t.m_ = std::move(values);
  return t;
}

SpectralField bilinear_apply(const BilinearTable& m, const SpectralField& F, const SpectralField& G) {
  require_same_grid(F, G);
  const GridSpec& g = F.grid();
  if (!(g == m.grid_)) throw GridMismatch("bilinear table was built for another grid");
  const auto pts = lattice_points(g);
  const std::size_t n = pts.size();
  SpectralField out(g, false);
  const double weight = g.dk() * g.dk();
  const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < ln; ++i) {
    const LatticePoint& xi = pts[i];
    const cd* row = m.m_.data() + i * n;
    cd acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const int zx = xi.jx - pts[j].jx, zy = xi.jy - pts[j].jy;
      if (!g.on_lattice(zx, zy)) continue;
      acc += row[j] * F[g.index(zx, zy)] * G[pts[j].idx];
    }
    out[xi.idx] = weight * acc;
  }
  return out;
}

SpectralField trilinear_apply(const TrilinearSymbol& m, const SpectralField& F, const SpectralField& G,
                              const SpectralField& H, bool use_factorization) {
  require_same_grid(F, G);
  require_same_grid(F, H);
  const GridSpec& g = F.grid();
  if (use_factorization && m.nested) {
    const SpectralField inner = bilinear_apply(BilinearSymbol{m.nested->inner, {}}, G, H);
    return bilinear_apply(BilinearSymbol{m.nested->outer, {}}, F, inner);
  }
  if (g.nx > kTrilinearDirectMax || g.ny > kTrilinearDirectMax)
    throw InvalidArgument("grid too large for the direct trilinear sum; supply a nested factorization");
  if (!m.eval) throw InvalidArgument("trilinear symbol has no evaluator");
  const auto pts = lattice_points(g);
  const double w = g.dk() * g.dk();
  const double weight = w * w;
  SpectralField out(g, false);
  const long n = static_cast<long>(pts.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i) {
    const LatticePoint& xi = pts[i];
    cd acc = 0.0;
    for (const auto& eta : pts) {
      const int ax = xi.jx - eta.jx, ay = xi.jy - eta.jy;
      if (!g.on_lattice(ax, ay)) continue;
      const cd f = F[g.index(ax, ay)];
      if (f == 0.0) continue;
      for (const auto& sg : pts) {
        const int bx = eta.jx - sg.jx, by = eta.jy - sg.jy;
        if (!g.on_lattice(bx, by)) continue;
        acc += m.eval(xi.k, eta.k, sg.k) * f * G[g.index(bx, by)] * H[sg.idx];
      }
    }
    out[xi.idx] = weight * acc;
  }
  return out;
}

}  // namespace epkg
