#include "epkg/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "epkg/errors.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"

namespace epkg {

void ParamSet::validate() const {
  for (double v : {N, N_prime, N1, delta1, delta2, eps1})
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("parameters must be positive and finite");
  if (!(N1 < N_prime && N_prime < N)) throw InvalidArgument("need N1 < N' < N");
  if (!(eps1 < delta2 / N1 && delta2 < 1.0)) throw InvalidArgument("need eps1 < delta2/N1 < delta2 < 1");
  if (!(delta1 < delta2 / N1)) throw InvalidArgument("need delta1 < delta2/N1");
}

namespace {

// Coefficients are "zero" at ξ = 0 when below this fraction of the field's scale.
constexpr double kZeroModeTol = 1e-12;
constexpr double kCurlTol = 1e-10;

bool zero_mode_vanishes(const SpectralField& f) {
  return std::abs(f[0]) <= kZeroModeTol * f.max_abs();
}

// Multiplies coefficient i by sym(i) on active slots.
template <class Sym>
SpectralField with_symbol(const SpectralField& f, bool is_real, Sym sym) {
  SpectralField out(f.grid(), is_real);
  const auto& t = lattice_tables(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i)
    if (t.active[i]) out[i] = sym(i) * f[i];
  return out;
}

struct HParts {
  SpectralField h1, h2;
};

// Fourier coefficients of Re h and Im h.
HParts split(const SpectralField& h) {
  const GridSpec& g = h.grid();
  HParts p{SpectralField(g, true), SpectralField(g, true)};
  for (std::size_t i = 0; i < h.size(); ++i) {
    const cd a = h[i];
    const cd b = std::conj(h[g.negated(i)]);
    p.h1[i] = 0.5 * (a + b);
    p.h2[i] = cd(0.0, -0.5) * (a - b);
  }
  p.h1.clear_off_lattice();
  p.h2.clear_off_lattice();
  return p;
}

struct Velocity {
  SpectralField u, v1, v2;
};

Velocity recover(const SpectralField& h) {
  const auto& t = lattice_tables(h.grid());
  const HParts p = split(h);
  Velocity r;
  r.u = with_symbol(p.h1, true, [&](std::size_t i) { return cd(t.kabs[i] / t.bracket[i]); });
  r.v1 = with_symbol(p.h2, true, [&](std::size_t i) { return cd(0.0, -t.ux[i]); });
  r.v2 = with_symbol(p.h2, true, [&](std::size_t i) { return cd(0.0, -t.uy[i]); });
  return r;
}

struct Products {
  SpectralField uv1, uv2, quad;  // u v1, u v2, u² + |v|²
};

Products dealiased_products(const Velocity& s) {
  const GridSpec& g = s.u.grid();
  const int m0 = dealiased_size(g.nx), m1 = dealiased_size(g.ny);
  const RealPhysicalField u = to_physical_real(s.u, m0, m1);
  const RealPhysicalField v1 = to_physical_real(s.v1, m0, m1);
  const RealPhysicalField v2 = to_physical_real(s.v2, m0, m1);
  RealPhysicalField a = u, b = u, c = u;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double uu = u.values[i], x = v1.values[i], y = v2.values[i];
    a.values[i] = uu * x;
    b.values[i] = uu * y;
    c.values[i] = uu * uu + x * x + y * y;
  }
  return {from_physical(a), from_physical(b), from_physical(c)};
}

}  // namespace

SpectralField poisson_solve(const SpectralField& u) {
  if (!zero_mode_vanishes(u)) throw NeutralityViolation("density perturbation has nonzero mean");
  const auto& t = lattice_tables(u.grid());
  SpectralField psi = with_symbol(u, u.is_real(), [&](std::size_t i) {
    return t.kabs[i] == 0.0 ? cd{} : cd(-1.0 / (t.kabs[i] * t.kabs[i]));
  });
  psi[0] = 0.0;
  return psi;
}

DiagonalState diagonalize(const FluidState& s, double t) {
  require_same_grid(s.u, s.v1);
  require_same_grid(s.u, s.v2);
  if (!zero_mode_vanishes(s.u)) throw NeutralityViolation("density perturbation has nonzero mean");
  if (!zero_mode_vanishes(s.v1) || !zero_mode_vanishes(s.v2))
    throw PreconditionError("velocity must have zero mean to be a gradient on the torus");
  const GridSpec& g = s.u.grid();
  const auto& tab = lattice_tables(g);
  double curl2 = 0.0, v2sum = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    curl2 += std::norm(cd(0.0, 1.0) * (tab.kx[i] * s.v2[i] - tab.ky[i] * s.v1[i]));
    v2sum += std::norm(s.v1[i]) + std::norm(s.v2[i]);
  }
  if (std::sqrt(curl2) > kCurlTol * std::sqrt(v2sum))
    throw RotationalInput("velocity field is not irrotational (relative curl " +
                          std::to_string(std::sqrt(curl2 / std::max(v2sum, 1e-300))) + ")");
  DiagonalState d{SpectralField(g, false), t};
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!tab.active[i]) continue;
    const double r = tab.kabs[i];
    d.h[i] = (tab.bracket[i] / r) * s.u[i] - (tab.kx[i] * s.v1[i] + tab.ky[i] * s.v2[i]) / r;
  }
  return d;
}

FluidState undiagonalize(const DiagonalState& d) {
  Velocity r = recover(d.h);
  FluidState s;
  s.psi = poisson_solve(r.u);
  s.u = std::move(r.u);
  s.v1 = std::move(r.v1);
  s.v2 = std::move(r.v2);
  return s;
}

SpectralField nonlinearity(const SpectralField& h) {
  const GridSpec& g = h.grid();
  const auto& t = lattice_tables(g);
  const Products p = dealiased_products(recover(h));
  SpectralField out(g, false);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!t.active[i]) continue;
    const cd div = cd(0.0, 1.0) * (t.kx[i] * p.uv1[i] + t.ky[i] * p.uv2[i]);
    out[i] = -(t.bracket[i] / t.kabs[i]) * div + cd(0.0, 0.5 * t.kabs[i]) * p.quad[i];
  }
  return out;
}

SpectralField time_derivative(const SpectralField& h, bool nonlinear) {
  const auto& t = lattice_tables(h.grid());
  SpectralField out = nonlinear ? nonlinearity(h) : SpectralField(h.grid(), false);
  for (std::size_t i = 0; i < h.size(); ++i)
    if (t.active[i]) out[i] += cd(0.0, t.bracket[i]) * h[i];
  return out;
}

double kg_residual(const std::vector<FluidState>& snapshots, double dt, bool include_nonlinear) {
  if (snapshots.size() < 5) throw InvalidArgument("kg_residual needs at least 5 snapshots");
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  const GridSpec& g = snapshots.front().u.grid();
  const auto& t = lattice_tables(g);
  const std::size_t n = snapshots.size();

  // ∇·(uv) and u² + |v|² at every snapshot
  std::vector<SpectralField> div(n), quad(n);
  if (include_nonlinear) {
    for (std::size_t k = 0; k < n; ++k) {
      const auto& s = snapshots[k];
      require_same_grid(s.u, snapshots.front().u);
      Products p = dealiased_products({s.u, s.v1, s.v2});
      div[k] = SpectralField(g, true);
      for (std::size_t i = 0; i < g.size(); ++i)
        div[k][i] = cd(0.0, 1.0) * (t.kx[i] * p.uv1[i] + t.ky[i] * p.uv2[i]);
      quad[k] = std::move(p.quad);
    }
  }

  double worst = 0.0;
  for (std::size_t k = 2; k + 2 < n; ++k) {
    const auto u = [&](int off) -> const SpectralField& { return snapshots[k + off].u; };
    double res2 = 0.0, scale2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!t.active[i]) continue;
      const double k2 = t.kabs[i] * t.kabs[i];
      const cd utt = (-u(-2)[i] + 16.0 * u(-1)[i] - 30.0 * u(0)[i] + 16.0 * u(1)[i] - u(2)[i]) / (12.0 * dt * dt);
      cd r = utt + (k2 + 1.0) * u(0)[i];
      if (include_nonlinear) {
        const cd dtdiv = (div[k - 2][i] - 8.0 * div[k - 1][i] + 8.0 * div[k + 1][i] - div[k + 2][i]) / (12.0 * dt);
        r -= -0.5 * k2 * quad[k][i] - dtdiv;
      }
      res2 += std::norm(r);
      scale2 += std::norm((k2 + 1.0) * u(0)[i]);
    }
    const double rel = scale2 > 0.0 ? std::sqrt(res2 / scale2) : std::sqrt(res2);
    worst = std::max(worst, rel);
  }
  return worst;
}

DensityProfile parse_density_profile(const std::string& name) {
  if (name == "zero") return DensityProfile::zero;
  if (name == "gaussian") return DensityProfile::gaussian;
  if (name == "laplacian_gaussian") return DensityProfile::laplacian_gaussian;
  if (name == "random_smooth") return DensityProfile::random_smooth;
  throw InvalidArgument("unknown density profile '" + name + "'");
}

PotentialProfile parse_potential_profile(const std::string& name) {
  if (name == "zero") return PotentialProfile::zero;
  if (name == "gaussian") return PotentialProfile::gaussian;
  if (name == "random_smooth") return PotentialProfile::random_smooth;
  throw InvalidArgument("unknown potential profile '" + name + "'");
}

std::string to_string(DensityProfile p) {
  switch (p) {
    case DensityProfile::zero: return "zero";
    case DensityProfile::gaussian: return "gaussian";
    case DensityProfile::laplacian_gaussian: return "laplacian_gaussian";
    case DensityProfile::random_smooth: return "random_smooth";
  }
  return "?";
}

std::string to_string(PotentialProfile p) {
  switch (p) {
    case PotentialProfile::zero: return "zero";
    case PotentialProfile::gaussian: return "gaussian";
    case PotentialProfile::random_smooth: return "random_smooth";
  }
  return "?";
}

XNormRaw xnorm_raw(const SpectralField& h, double t, const ParamSet& params) {
  XNormRaw x;
  const auto& tab = lattice_tables(h.grid());
  const SpectralField d = with_symbol(h, false, [&](std::size_t i) {
    return cd(std::sqrt(tab.kabs[i]) * tab.bracket[i]);
  });
  x.sup_decay = lebesgue_norm_dealiased(d, kInf);
  x.hN = sobolev_norm(h, params.N);
  x.hN_prime = sobolev_norm(h, params.N_prime);
  x.lq = lebesgue_norm_dealiased(h, params.q());
  x.weighted = weighted_profile_norm(apply_multiplier(MultiplierSpec::kg_semigroup(-t), h), 2.0 + params.eps1);
  return x;
}

namespace {

enum class Shape { gaussian, laplacian_gaussian };

std::vector<double> sample_shape(const GridSpec& g, Shape shape, double sigma) {
  std::vector<double> v(g.size());
  const double s2 = sigma * sigma;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double x = g.x(i), y = g.y(j);
      const double q = (x * x + y * y) / (2.0 * s2);
      const double gauss = std::exp(-q);
      // Laplacian of the Gaussian scaled to unit peak magnitude
      v[static_cast<std::size_t>(i) * g.ny + j] = shape == Shape::gaussian ? gauss : (q - 1.0) * gauss;
    }
  return v;
}

// Gaussian-filtered white noise under a Gaussian window of width L/10, unit peak.
std::vector<double> sample_random(const GridSpec& g, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> noise(g.size());
  for (auto& x : noise) x = normal(rng);
  SpectralField c = from_physical(g, std::span<const double>(noise));
  const auto& t = lattice_tables(g);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::exp(-0.5 * sigma * sigma * t.kabs[i] * t.kabs[i]);
  std::vector<double> v = to_physical_real(c).values;
  const double w = 0.1 * g.L;
  double peak = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double x = g.x(i), y = g.y(j);
      auto& e = v[static_cast<std::size_t>(i) * g.ny + j];
      e *= std::exp(-(x * x + y * y) / (2.0 * w * w));
      peak = std::max(peak, std::abs(e));
    }
  if (peak > 0.0)
    for (auto& e : v) e /= peak;
  return v;
}

void check_frame_mass(const GridSpec& g, const std::vector<double>& v, const char* what) {
  const double edge = 0.4 * g.L;
  double total = 0.0, frame = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const double a = std::abs(v[static_cast<std::size_t>(i) * g.ny + j]);
      total += a;
      if (std::abs(g.x(i)) > edge || std::abs(g.y(j)) > edge) frame += a;
    }
  if (total > 0.0 && frame >= 0.01 * total)
    throw PreconditionError(std::string(what) + " profile puts " + std::to_string(100.0 * frame / total) +
                            "% of its mass near the box boundary");
}

}  // namespace

InitialData make_initial_data(const GridSpec& g, const InitialDataSpec& spec, const ParamSet& params) {
  if (!(spec.amplitude >= 0.0) || !std::isfinite(spec.amplitude))
    throw InvalidArgument("amplitude must be non-negative");
  params.validate();
  std::mt19937_64 rng(spec.seed);
  const auto& t = lattice_tables(g);

  FluidState s{SpectralField(g, true), SpectralField(g, true), SpectralField(g, true), SpectralField(g, true)};
  if (spec.density != DensityProfile::zero) {
    if (!(spec.density_sigma > 0.0)) throw InvalidArgument("density_sigma must be positive");
    const std::vector<double> p =
        spec.density == DensityProfile::random_smooth
            ? sample_random(g, spec.density_sigma, rng)
            : sample_shape(g, spec.density == DensityProfile::gaussian ? Shape::gaussian : Shape::laplacian_gaussian,
                           spec.density_sigma);
    check_frame_mass(g, p, "density");
    s.u = from_physical(g, std::span<const double>(p));
    s.u *= spec.amplitude;
    s.u[0] = 0.0;
  }
  if (spec.potential != PotentialProfile::zero) {
    if (!(spec.potential_sigma > 0.0)) throw InvalidArgument("potential_sigma must be positive");
    const std::vector<double> p = spec.potential == PotentialProfile::random_smooth
                                      ? sample_random(g, spec.potential_sigma, rng)
                                      : sample_shape(g, Shape::gaussian, spec.potential_sigma);
    check_frame_mass(g, p, "potential");
    const SpectralField phi = from_physical(g, std::span<const double>(p));
    for (std::size_t i = 0; i < g.size(); ++i) {
      s.v1[i] = cd(0.0, spec.amplitude * t.kx[i]) * phi[i];
      s.v2[i] = cd(0.0, spec.amplitude * t.ky[i]) * phi[i];
    }
  }
  s.psi = poisson_solve(s.u);

  InitialData out;
  out.state = diagonalize(s, 0.0);
  out.fluid = std::move(s);
  const auto u = to_physical_real(out.fluid.u);
  const double umin = u.values.empty() ? 0.0 : *std::min_element(u.values.begin(), u.values.end());
  out.min_density = 1.0 + umin;
  if (!(out.min_density > 0.0)) throw PreconditionError("initial density 1 + u is not positive");
  out.initial_norms = xnorm_raw(out.state.h, 0.0, params);
  return out;
}

}  // namespace epkg
