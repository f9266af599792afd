#include "epkg/norms.hpp"

#include <algorithm>
#include <cmath>

#include "epkg/errors.hpp"

namespace epkg {

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("Lebesgue exponent must be >= 1");
}

// Accumulates |v|^p with a running max rescaling so large p cannot overflow.
template <class Range, class Abs>
double lp_of(const Range& values, double p, double cell, Abs abs_of) {
  check_exponent(p);
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, abs_of(v));
  if (std::isinf(p) || m == 0.0) return m;
  double s = 0.0;
  if (p == 2.0) {
    for (const auto& v : values) {
      const double a = abs_of(v) / m;
      s += a * a;
    }
  } else {
    for (const auto& v : values) s += std::pow(abs_of(v) / m, p);
  }
  return m * std::pow(s * cell, 1.0 / p);
}

}  // namespace

double lebesgue_norm(const PhysicalField& values, double p) {
  return lp_of(values.values, p, values.cell_area(), [](const cd& v) { return std::abs(v); });
}

double lebesgue_norm(const RealPhysicalField& values, double p) {
  return lp_of(values.values, p, values.cell_area(), [](double v) { return std::abs(v); });
}

double lebesgue_norm(const SpectralField& f, double p) {
  check_exponent(p);
  return lebesgue_norm(to_physical(f), p);
}

double lebesgue_norm_dealiased(const SpectralField& f, double p) {
  check_exponent(p);
  const GridSpec& g = f.grid();
  return lebesgue_norm(to_physical(f, dealiased_size(g.nx), dealiased_size(g.ny)), p);
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto& t = lattice_tables(f.grid());
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!t.active[i]) continue;
    const double w = s == 0.0 ? 1.0 : std::pow(t.bracket[i], 2.0 * s);
    acc += w * std::norm(f[i]);
  }
  return std::sqrt(acc) / f.grid().L;
}

double weighted_profile_norm(const SpectralField& profile, double p) {
  check_exponent(p);
  PhysicalField v = to_physical(profile);
  for (int i = 0; i < v.m0; ++i) {
    const double x = v.x(i);
    for (int j = 0; j < v.m1; ++j) {
      const double y = v.y(j);
      v.values[static_cast<std::size_t>(i) * v.m1 + j] *= std::sqrt(1.0 + x * x + y * y);
    }
  }
  return lebesgue_norm(v, p);
}

}  // namespace epkg
