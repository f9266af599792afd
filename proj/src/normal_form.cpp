#include "epkg/normal_form.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "epkg/errors.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "epkg/quadratic.hpp"
#include "json.hpp"

namespace epkg {

namespace {

constexpr int kTableMax = 32;

bool small_grid(const GridSpec& g) { return g.nx <= kTableMax && g.ny <= kTableMax; }

// Slot fields at time s: H₊ = e^{is⟨∇⟩}f = ĥ(s), H₋ its reflected conjugate.
struct Slots {
  SpectralField plus, minus;
  const SpectralField& operator()(Slot s) const { return s == Slot::f ? plus : minus; }
  const SpectralField& operator()(int sign) const { return sign > 0 ? plus : minus; }
};

Slots slots_at(const Profile& p) {
  Slots s;
  s.plus = apply_multiplier(MultiplierSpec::kg_semigroup(p.t), p.f);
  s.minus = s.plus.reflected_conjugate();
  return s;
}

SpectralField back_to_profile(const SpectralField& x, double t) {
  SpectralField out = apply_multiplier(MultiplierSpec::kg_semigroup(-t), x);
  out[0] = 0.0;
  return out;
}

int combo_index(const SignCombo& c) {
  const auto all = quadratic_combos();
  for (int i = 0; i < 4; ++i)
    if (all[i] == c) return i;
  throw Error("unknown quadratic combo");
}

cd boundary_symbol(const SignCombo& c, Vec2 xi, Vec2 eta) {
  const cd m = m0_value(c, xi, eta);
  if (m == 0.0) return 0.0;
  return m / cd(0.0, -quadratic_phase(c, xi, eta));
}

// Symbol tables per grid, built on first use.
struct Tables {
  std::once_flag m0_once, s_once, cubic_once;
  std::array<BilinearTable, 4> m0, s;
  std::array<BilinearTable, 8> outer, inner;  // outer: 2·combo + (diff_eta ? 0 : 1); inner: 2·combo + (d > 0 ? 0 : 1)
};

std::shared_ptr<Tables> tables_for(const GridSpec& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, std::shared_ptr<Tables>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{g.nx, g.ny, g.L}];
  if (!slot) slot = std::make_shared<Tables>();
  return slot;
}

const std::array<BilinearTable, 4>& m0_tables(const GridSpec& g) {
  auto t = tables_for(g);
  std::call_once(t->m0_once, [&] {
    const auto terms = quadratic_terms();
    for (int k = 0; k < 4; ++k) t->m0[k] = BilinearTable(m0_symbol(terms[k].combo), g);
  });
  return t->m0;
}

const std::array<BilinearTable, 4>& boundary_tables(const GridSpec& g) {
  auto t = tables_for(g);
  std::call_once(t->s_once, [&] {
    const auto terms = quadratic_terms();
    for (int k = 0; k < 4; ++k) {
      const SignCombo c = terms[k].combo;
      t->s[k] = BilinearTable(BilinearSymbol{[c](Vec2 x, Vec2 e) { return boundary_symbol(c, x, e); }, {}}, g);
    }
  });
  return t->s;
}

const Tables& cubic_tables(const GridSpec& g) {
  auto t = tables_for(g);
  std::call_once(t->cubic_once, [&] {
    for (const auto& c : cubic_contributions()) {
      const int oi = 2 * combo_index(c.outer.combo) + (c.differentiate_eta ? 0 : 1);
      const int d = slot_sign(c.differentiate_eta ? c.outer.eta_slot : c.outer.zeta_slot);
      const int ii = 2 * combo_index(c.inner.combo) + (d > 0 ? 0 : 1);
      if (t->outer[oi].active().empty())
        t->outer[oi] = BilinearTable(BilinearSymbol{[c](Vec2 x, Vec2 e) { return m1_outer_value(c, x, e); }, {}}, g);
      if (t->inner[ii].active().empty())
        t->inner[ii] = BilinearTable(BilinearSymbol{[c](Vec2 e, Vec2 s) { return m1_inner_value(c, e, s); }, {}}, g);
    }
  });
  return *t;
}

// Σ_c T(m_c, H_ζ, H_η) at one snapshot, still in h-space.
SpectralField quadratic_h_space(const Slots& h) {
  const GridSpec& g = h.plus.grid();
  if (!small_grid(g)) return nonlinearity(h.plus);
  const auto& tab = m0_tables(g);
  const auto terms = quadratic_terms();
  SpectralField out(g, false);
  for (int k = 0; k < 4; ++k) out += bilinear_apply(tab[k], h(terms[k].zeta_slot), h(terms[k].eta_slot));
  out[0] = 0.0;
  return out;
}

// Σ over the 32 contributions of T_outer(H_{s1}, T_inner(H_{s2}, H_{s3})), in h-space.
SpectralField cubic_h_space(const Slots& h) {
  const GridSpec& g = h.plus.grid();
  const Tables& tab = cubic_tables(g);
  std::array<SpectralField, 8> inner_cache;
  std::array<bool, 8> have{};
  SpectralField out(g, false);
  for (const auto& c : cubic_contributions()) {
    const int oi = 2 * combo_index(c.outer.combo) + (c.differentiate_eta ? 0 : 1);
    const int d = slot_sign(c.differentiate_eta ? c.outer.eta_slot : c.outer.zeta_slot);
    const int ii = 2 * combo_index(c.inner.combo) + (d > 0 ? 0 : 1);
    if (!have[ii]) {
      inner_cache[ii] = bilinear_apply(tab.inner[ii], h(c.slots[1]), h(c.slots[2]));
      have[ii] = true;
    }
    out += bilinear_apply(tab.outer[oi], h(c.slots[0]), inner_cache[ii]);
  }
  return out;
}

// Index of the snapshot at time t and the Simpson node count, after validation.
std::size_t simpson_end(const Trajectory& traj, double t) {
  if (traj.profiles.empty()) throw PreconditionError("trajectory has no stored profiles");
  if (traj.profiles.size() != traj.times.size()) throw PreconditionError("trajectory times and profiles differ in length");
  if (std::abs(traj.times.front()) > 1e-12) throw PreconditionError("trajectory must start at t = 0");
  const double h = traj.snapshot_dt();
  if (!(h > 0)) throw PreconditionError("trajectory has no snapshot spacing");
  const double kd = t / h;
  const long k = std::lround(kd);
  if (k < 0 || std::abs(kd - k) > 1e-8 || static_cast<std::size_t>(k) >= traj.times.size())
    throw InvalidArgument("t is not a recorded snapshot time");
  for (long j = 1; j <= k; ++j)
    if (std::abs(traj.times[j] - traj.times[j - 1] - h) > 1e-9 * std::max(1.0, h))
      throw PreconditionError("snapshots are not uniformly spaced");
  if (k % 2 != 0)
    throw InvalidArgument("Simpson quadrature needs an odd number of snapshots on [0, t]; got " + std::to_string(k + 1));
  return static_cast<std::size_t>(k);
}

template <class Integrand>
SpectralField simpson(const Trajectory& traj, std::size_t k, Integrand&& integrand) {
  const GridSpec& g = traj.profiles.front().f.grid();
  SpectralField acc(g, false);
  if (k == 0) return acc;
  const double h = traj.snapshot_dt();
  for (std::size_t j = 0; j <= k; ++j) {
    const double w = (j == 0 || j == k) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc.axpy(w * h / 3.0, integrand(traj.profiles[j]));
  }
  acc[0] = 0.0;
  return acc;
}

// Direct sum of g over a support window, all four combos fused per (ξ, η).
// S_ab = m_ab/(-iφ_ab) is real, so the symbol needs no complex arithmetic.
SpectralField fused_g(const Slots& h, double support_tol) {
  const GridSpec& g = h.plus.grid();
  const LatticeTables& lt = lattice_tables(g);
  const int Jx = g.jmax_x(), Jy = g.jmax_y();
  const int ny = 2 * Jy + 1;
  const std::size_t n = static_cast<std::size_t>(2 * Jx + 1) * ny;
  std::vector<double> R(n), B(n), IB(n), UX(n), UY(n), PR(n), PI(n), MR(n), MI(n);
  const double hmax = h.plus.max_abs();
  const double cut = support_tol * hmax;
  int Wx = 0, Wy = 0;
  for (int jx = -Jx; jx <= Jx; ++jx)
    for (int jy = -Jy; jy <= Jy; ++jy) {
      const std::size_t c = static_cast<std::size_t>(jx + Jx) * ny + (jy + Jy);
      const std::size_t s = g.index(jx, jy);
      R[c] = lt.kabs[s];
      B[c] = lt.bracket[s];
      IB[c] = 1.0 / lt.bracket[s];
      UX[c] = lt.ux[s];
      UY[c] = lt.uy[s];
      PR[c] = h.plus[s].real();
      PI[c] = h.plus[s].imag();
      MR[c] = h.minus[s].real();
      MI[c] = h.minus[s].imag();
      if (std::abs(h.plus[s]) > cut) {
        Wx = std::max(Wx, std::abs(jx));
        Wy = std::max(Wy, std::abs(jy));
      }
    }
  SpectralField out(g, false);
  if (hmax == 0.0) return out;
  const int Xx = std::min(Jx, 2 * Wx);
  const double scale = -quadratic_normalization() / 4.0 * g.dk() * g.dk();

#pragma omp parallel for schedule(dynamic, 1)
  for (int xi_x = -Xx; xi_x <= Xx; ++xi_x) {
    std::vector<double> acc_re(ny, 0.0), acc_im(ny, 0.0);
    double* __restrict ar = acc_re.data() + Jy;
    double* __restrict ai = acc_im.data() + Jy;
    const long ix = static_cast<long>(xi_x + Jx) * ny + Jy;
    for (int eta_x = -Wx; eta_x <= Wx; ++eta_x) {
      const int zx = xi_x - eta_x;
      if (zx < -Wx || zx > Wx) continue;
      for (int eta_y = -Wy; eta_y <= Wy; ++eta_y) {
        const std::size_t ce = static_cast<std::size_t>(eta_x + Jx) * ny + (eta_y + Jy);
        const double re = R[ce];
        if (re == 0.0) continue;
        const double hpr = PR[ce], hpi = PI[ce], hmr = MR[ce], hmi = MI[ce];
        if (hpr == 0.0 && hpi == 0.0 && hmr == 0.0 && hmi == 0.0) continue;
        const double be = B[ce], uex = UX[ce], uey = UY[ce];
        const double c11 = 0.5 * re * IB[ce], c12 = re * IB[ce];
        const int lo = std::max(-Jy, eta_y - Wy), hi = std::min(Jy, eta_y + Wy);
        const long iz = static_cast<long>(zx + Jx) * ny + Jy - eta_y;
        const double* __restrict rx = R.data() + ix;
        const double* __restrict bx = B.data() + ix;
        const double* __restrict uxx = UX.data() + ix;
        const double* __restrict uxy = UY.data() + ix;
        const double* __restrict rz = R.data() + iz;
        const double* __restrict bz = B.data() + iz;
        const double* __restrict ibz = IB.data() + iz;
        const double* __restrict uzx = UX.data() + iz;
        const double* __restrict uzy = UY.data() + iz;
        const double* __restrict zpr = PR.data() + iz;
        const double* __restrict zpi = PI.data() + iz;
        const double* __restrict zmr = MR.data() + iz;
        const double* __restrict zmi = MI.data() + iz;
#pragma omp simd
        for (int y = lo; y <= hi; ++y) {
          const double k11 = c11 * rx[y] * rz[y] * ibz[y];
          const double k12 = -bx[y] * c12 * (uxx[y] * uzx[y] + uxy[y] * uzy[y]);
          const double k22 = -0.5 * rx[y] * (uex * uzx[y] + uey * uzy[y]);
          const double spp = (k11 - k12 - k22) / (bx[y] - be - bz[y]);
          const double spm = (k11 + k12 + k22) / (bx[y] - be + bz[y]);
          const double smp = (k11 - k12 + k22) / (bx[y] + be - bz[y]);
          const double smm = (k11 + k12 - k22) / (bx[y] + be + bz[y]);
          const double tpr = spp * zpr[y] + spm * zmr[y], tpi = spp * zpi[y] + spm * zmi[y];
          const double tmr = smp * zpr[y] + smm * zmr[y], tmi = smp * zpi[y] + smm * zmi[y];
          ar[y] += hpr * tpr - hpi * tpi + hmr * tmr - hmi * tmi;
          ai[y] += hpr * tpi + hpi * tpr + hmr * tmi + hmi * tmr;
        }
      }
    }
    for (int y = -Jy; y <= Jy; ++y) out[g.index(xi_x, y)] = scale * cd(ar[y], ai[y]);
  }
  out[0] = 0.0;
  return out;
}

SpectralField g_h_space(const Slots& h, const GOptions& opts) {
  const GridSpec& g = h.plus.grid();
  GMethod m = opts.method;
  if (m == GMethod::automatic) m = small_grid(g) ? GMethod::table : GMethod::fused;
  const auto terms = quadratic_terms();
  SpectralField out(g, false);
  switch (m) {
    case GMethod::table: {
      const auto& tab = boundary_tables(g);
      for (int k = 0; k < 4; ++k) out += bilinear_apply(tab[k], h(terms[k].zeta_slot), h(terms[k].eta_slot));
      break;
    }
    case GMethod::generic:
      for (const auto& t : terms) {
        const SignCombo c = t.combo;
        const BilinearSymbol s{[c](Vec2 x, Vec2 e) { return boundary_symbol(c, x, e); }, {}};
        out += bilinear_apply(s, h(t.zeta_slot), h(t.eta_slot));
      }
      break;
    case GMethod::fused:
      return fused_g(h, opts.support_tol);
    case GMethod::automatic:
      break;
  }
  out[0] = 0.0;
  return out;
}

}  // namespace

SpectralField duhamel_rhs(const Trajectory& traj, double t) {
  const std::size_t k = simpson_end(traj, t);
  return simpson(traj, k,
                 [](const Profile& p) { return back_to_profile(quadratic_h_space(slots_at(p)), p.t); });
}

SpectralField boundary_term_g(const Profile& p, const GOptions& opts) {
  return back_to_profile(g_h_space(slots_at(p), opts), p.t);
}

SpectralField transformed_data(const SpectralField& h0) {
  if (std::abs(h0[0]) != 0.0) throw PreconditionError("transformed_data needs a vanishing zero mode");
  SpectralField out = h0 - boundary_term_g(Profile{h0, 0.0});
  out[0] = 0.0;
  return out;
}

SpectralField cubic_term(const Trajectory& traj, double t) {
  const std::size_t k = simpson_end(traj, t);
  const GridSpec& g = traj.profiles.front().f.grid();
  if (!small_grid(g))
    throw InvalidArgument("cubic_term supports grids up to " + std::to_string(kTableMax) + " points per side");
  return simpson(traj, k, [](const Profile& p) { return back_to_profile(cubic_h_space(slots_at(p)), p.t); });
}

Decomposition decompose(const Trajectory& traj, double t) {
  const std::size_t k = simpson_end(traj, t);
  Decomposition d;
  d.t = traj.times[k];
  d.nodes = k + 1;
  d.snapshot_dt = traj.snapshot_dt();
  d.h0_tilde = transformed_data(traj.profiles.front().f);
  d.g = boundary_term_g(traj.profiles[k]);
  d.f_cubic = cubic_term(traj, t);
  const SpectralField& f = traj.profiles[k].f;
  const SpectralField r = f - d.h0_tilde - d.g - d.f_cubic;
  d.residual = l2_norm_spectral(r);
  d.f_norm = l2_norm_spectral(f);
  d.relative_residual = d.f_norm > 0 ? d.residual / d.f_norm : d.residual;
  return d;
}

GDecayScan g_decay_scan(const std::vector<Profile>& profiles, const ParamSet& params, const GOptions& opts) {
  GDecayScan out;
  out.series = NormSeries({"g_hNprime", "g_hNprime_half", "t_g_hNprime_half"});
  const double q = 2.0 + params.eps1;
  for (const auto& p : profiles) {
    const SpectralField g = boundary_term_g(p, opts);
    const double half = sobolev_norm(g, 0.5 * params.N_prime);
    out.series.add_row(p.t, {sobolev_norm(g, params.N_prime), half, std::sqrt(1.0 + p.t * p.t) * half});
    if (p.t <= 0.5 * wrap_horizon(g.grid())) {
      out.weighted_times.push_back(p.t);
      out.weighted.push_back(weighted_profile_norm(g, q));
    }
  }
  return out;
}

std::string decomposition_json(const Decomposition& d) {
  nlohmann::json j;
  j["t"] = d.t;
  j["snapshot_dt"] = d.snapshot_dt;
  j["simpson_nodes"] = d.nodes;
  j["f_l2"] = d.f_norm;
  j["h0_tilde_l2"] = l2_norm_spectral(d.h0_tilde);
  j["g_l2"] = l2_norm_spectral(d.g);
  j["f_cubic_l2"] = l2_norm_spectral(d.f_cubic);
  j["residual"] = d.residual;
  j["relative_residual"] = d.relative_residual;
  // Simpson error constant implied by the measured residual: residual / (t·dt⁴).
  const double budget = d.t * std::pow(d.snapshot_dt, 4);
  j["budget_constant"] = budget > 0 ? d.residual / budget : 0.0;
  return j.dump(2);
}

}  // namespace epkg
