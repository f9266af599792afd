#include "epkg/estimates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "epkg/errors.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"

namespace epkg {

BernsteinReport bernstein_check(const SpectralField& f, double M, double p, double q, double s,
                                double window) {
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1");
  if (p > q) throw InvalidArgument("Bernstein check needs p <= q");
  if (!(M > 0.0)) throw InvalidArgument("M must be positive");
  const SpectralField pm = lp_project(f, M, LpKind::at);
  const double base_p = lebesgue_norm(pm, p);
  if (base_p == 0.0) throw InvalidArgument("P_M f vanishes; nothing to compare");

  BernsteinReport r;
  r.M = M;
  r.p = p;
  r.q = q;
  r.s = s;
  r.window = window;
  r.derivative_ratio =
      lebesgue_norm(apply_multiplier(MultiplierSpec::abs_grad_power(s), pm), p) / (std::pow(M, s) * base_p);
  r.inverse_ratio =
      lebesgue_norm(apply_multiplier(MultiplierSpec::abs_grad_power(-s), pm), p) / (std::pow(M, -s) * base_p);
  const double gain = std::pow(M, 2.0 / p - (std::isinf(q) ? 0.0 : 2.0 / q));
  r.embedding_ratio = lebesgue_norm(pm, q) / (gain * base_p);
  const auto inside = [window](double v) { return v >= 1.0 / window && v <= window; };
  r.within = inside(r.derivative_ratio) && inside(r.inverse_ratio) && r.embedding_ratio <= window;
  return r;
}

namespace {

int next_even_pow2(double v) {
  const auto n = static_cast<unsigned>(std::max(8.0, std::ceil(v)));
  return static_cast<int>(std::bit_ceil(n));
}

KernelReport kernel_on_box(double M, double t, double L, int n) {
  const GridSpec g = GridSpec::square(n, L);
  const auto& tab = lattice_tables(g);
  SpectralField k(g, false);
  for (std::size_t i = 0; i < k.size(); ++i)
    if (tab.active[i]) k[i] = bump(tab.kabs[i] / M) * std::polar(1.0, t * tab.bracket[i]);
  const PhysicalField K = to_physical(k);
  double total = 0.0, frame = 0.0;
  const double edge = 0.4 * L;
  for (int i = 0; i < K.m0; ++i) {
    const double x = std::abs(K.x(i));
    for (int j = 0; j < K.m1; ++j) {
      const double a = std::abs(K.values[static_cast<std::size_t>(i) * K.m1 + j]);
      total += a;
      if (x > edge || std::abs(K.y(j)) > edge) frame += a;
    }
  }
  KernelReport r;
  r.M = M;
  r.t = t;
  r.l1 = total * K.cell_area();
  r.box_length = L;
  r.points = n;
  r.tail_fraction = total > 0 ? frame / total : 0.0;
  return r;
}

}  // namespace

KernelReport kernel_l1_norm(double M, double t, const KernelOptions& opts) {
  if (!(M > 0.0)) throw InvalidArgument("M must be positive");
  if (!(t >= 0.0)) throw InvalidArgument("t must be non-negative");
  const double kmax = 25.0 / 24.0 * M;
  // The plateau edge has width M/24 and its transform decays slowly; start
  // with a box a few hundred kernel scales wide plus the propagation distance.
  double L = 2.0 * t + 400.0 / M;
  for (;;) {
    // two samples per shortest wavelength in each direction
    const int n = next_even_pow2(2.0 * L * kmax / std::numbers::pi + 4.0);
    if (n > opts.max_points)
      throw Error("kernel_l1_norm: box would need " + std::to_string(n) + " points per side (budget " +
                  std::to_string(opts.max_points) + ")");
    KernelReport r = kernel_on_box(M, t, L, n);
    if (r.tail_fraction < opts.tail_fraction) return r;
    L *= 2.0;
  }
}

}  // namespace epkg
