#include "epkg/multiplier.hpp"

#include <algorithm>
#include <cmath>

#include "epkg/errors.hpp"

namespace epkg {

namespace {

constexpr double kBumpOuter = 25.0 / 24.0;

// C^∞ step from 0 (u <= 0) to 1 (u >= 1).
double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

void require_positive(double N) {
  if (!(N > 0.0)) throw InvalidArgument("Littlewood-Paley scale must be positive");
}

}  // namespace

double bump(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= kBumpOuter) return 0.0;
  return 1.0 - smooth_step((r - 1.0) / (kBumpOuter - 1.0));
}

MultiplierSpec MultiplierSpec::riesz(int j) {
  if (j != 1 && j != 2) throw InvalidArgument("Riesz index must be 1 or 2");
  return {Kind::riesz, 0.0, j};
}
MultiplierSpec MultiplierSpec::abs_grad_power(double s) { return {Kind::abs_grad_power, s}; }
MultiplierSpec MultiplierSpec::bracket_power(double s) { return {Kind::bracket_power, s}; }
MultiplierSpec MultiplierSpec::lp_at(double N) {
  require_positive(N);
  return {Kind::lp_at, N};
}
MultiplierSpec MultiplierSpec::lp_leq(double N) {
  require_positive(N);
  return {Kind::lp_leq, N};
}
MultiplierSpec MultiplierSpec::lp_gt(double N) {
  require_positive(N);
  return {Kind::lp_gt, N};
}
MultiplierSpec MultiplierSpec::lp_fat(double N) {
  require_positive(N);
  return {Kind::lp_fat, N};
}
MultiplierSpec MultiplierSpec::kg_semigroup(double t) { return {Kind::kg_semigroup, t}; }
MultiplierSpec MultiplierSpec::inverse_laplacian() { return {Kind::inverse_laplacian, 0.0}; }

MultiplierSpec MultiplierSpec::custom(const GridSpec& grid, std::vector<cd> values) {
  if (values.size() != grid.size()) throw DimensionMismatch("tabulated multiplier does not match grid");
  MultiplierSpec m(Kind::custom, 0.0);
  m.table_grid_ = grid;
  m.table_ = std::make_shared<const std::vector<cd>>(std::move(values));
  return m;
}

cd MultiplierSpec::evaluate(double kx, double ky) const {
  const double r = std::hypot(kx, ky);
  switch (kind_) {
    case Kind::riesz:
      if (r == 0.0) return 0.0;
      return cd(0.0, (component_ == 1 ? kx : ky) / r);
    case Kind::abs_grad_power:
      if (param_ == 0.0) return 1.0;
      if (r == 0.0) return 0.0;
      return std::pow(r, param_);
    case Kind::bracket_power:
      return std::pow(1.0 + r * r, 0.5 * param_);
    case Kind::lp_at:
      return bump(r / param_) - bump(2.0 * r / param_);
    case Kind::lp_leq:
      return bump(r / param_);
    case Kind::lp_gt:
      return 1.0 - bump(r / param_);
    case Kind::lp_fat:
      return bump(r / (2.0 * param_)) - bump(4.0 * r / param_);
    case Kind::kg_semigroup:
      return std::polar(1.0, param_ * bracket(r));
    case Kind::inverse_laplacian:
      if (r == 0.0) return 0.0;
      return -1.0 / (r * r);
    case Kind::custom:
      break;
  }
  throw InvalidArgument("tabulated multipliers can only be evaluated on their lattice");
}

std::vector<cd> MultiplierSpec::tabulate(const GridSpec& grid) const {
  if (kind_ == Kind::custom) {
    if (!(grid == table_grid_)) throw GridMismatch("tabulated multiplier lives on another grid");
    return *table_;
  }
  const auto& t = lattice_tables(grid);
  std::vector<cd> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.active[i] ? evaluate(t.kx[i], t.ky[i]) : cd{};
  return v;
}

SpectralField apply_multiplier(const MultiplierSpec& m, const SpectralField& f) {
  const GridSpec& g = f.grid();
  const std::vector<cd> sym = m.tabulate(g);
  const auto& t = lattice_tables(g);
  double scale = 0.0, defect = 0.0;
  for (std::size_t i = 0; i < sym.size(); ++i) {
    scale = std::max(scale, std::abs(sym[i]));
    defect = std::max(defect, std::abs(sym[g.negated(i)] - std::conj(sym[i])));
  }
  const bool hermitian_symbol = defect <= 1e-14 * std::max(scale, 1.0);
  SpectralField out(g, f.is_real() && hermitian_symbol);
  for (std::size_t i = 0; i < sym.size(); ++i) out[i] = t.active[i] ? sym[i] * f[i] : cd{};
  return out;
}

MultiplierSpec compose(const MultiplierSpec& a, const MultiplierSpec& b, const GridSpec& grid) {
  std::vector<cd> va = a.tabulate(grid);
  const std::vector<cd> vb = b.tabulate(grid);
  for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
  return MultiplierSpec::custom(grid, std::move(va));
}

SpectralField lp_project(const SpectralField& f, double N, LpKind kind) {
  switch (kind) {
    case LpKind::at:
      return apply_multiplier(MultiplierSpec::lp_at(N), f);
    case LpKind::leq:
      return apply_multiplier(MultiplierSpec::lp_leq(N), f);
    case LpKind::gt:
      return apply_multiplier(MultiplierSpec::lp_gt(N), f);
    case LpKind::fat:
      return apply_multiplier(MultiplierSpec::lp_fat(N), f);
  }
  throw InvalidArgument("unknown projection kind");
}

}  // namespace epkg
