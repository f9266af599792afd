#include "epkg/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "epkg/errors.hpp"
#include "epkg/norms.hpp"

namespace epkg {

namespace {

std::vector<cd> phase_table(const GridSpec& g, double s) {
  const auto& t = lattice_tables(g);
  std::vector<cd> e(g.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = t.active[i] ? std::polar(1.0, s * t.bracket[i]) : cd{};
  return e;
}

SpectralField times_table(const SpectralField& f, const std::vector<cd>& e, bool conj) {
  SpectralField out(f.grid(), false);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = (conj ? std::conj(e[i]) : e[i]) * f[i];
  return out;
}

bool all_finite(const SpectralField& f) {
  for (const auto& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// e^{-is⟨∇⟩} N(e^{is⟨∇⟩} f), with e = e^{is⟨ξ⟩} tabulated.
SpectralField profile_rhs(const SpectralField& f, const std::vector<cd>& e) {
  SpectralField n = nonlinearity(times_table(f, e, false));
  return times_table(n, e, true);
}

}  // namespace

Profile to_profile(const DiagonalState& d) {
  return {times_table(d.h, phase_table(d.h.grid(), -d.t), false), d.t};
}

DiagonalState to_state(const Profile& p) {
  return {times_table(p.f, phase_table(p.f.grid(), p.t), false), p.t};
}

Profile step(const Profile& p, double dt, bool nonlinear) {
  if (dt == 0.0 || !std::isfinite(dt)) throw InvalidArgument("time step must be nonzero and finite");
  if (!nonlinear) return {p.f, p.t + dt};
  const GridSpec& g = p.f.grid();
  const double last_l2 = l2_norm_spectral(p.f);
  const auto check = [&](const SpectralField& k, double at) {
    if (!all_finite(k))
      throw BlowUpError("non-finite value in a Runge-Kutta stage at t = " + std::to_string(at), p.t, last_l2);
  };
  const auto e0 = phase_table(g, p.t);
  const auto eh = phase_table(g, p.t + 0.5 * dt);
  const auto e1 = phase_table(g, p.t + dt);

  const SpectralField k1 = profile_rhs(p.f, e0);
  check(k1, p.t);
  SpectralField y = p.f;
  y.axpy(0.5 * dt, k1);
  const SpectralField k2 = profile_rhs(y, eh);
  check(k2, p.t + 0.5 * dt);
  y = p.f;
  y.axpy(0.5 * dt, k2);
  const SpectralField k3 = profile_rhs(y, eh);
  check(k3, p.t + 0.5 * dt);
  y = p.f;
  y.axpy(dt, k3);
  const SpectralField k4 = profile_rhs(y, e1);
  check(k4, p.t + dt);

  Profile out{p.f, p.t + dt};
  out.f.set_real(false);
  for (std::size_t i = 0; i < out.f.size(); ++i)
    out.f[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  out.f[0] = 0.0;
  check(out.f, p.t + dt);
  return out;
}

Trajectory run(const DiagonalState& data, double T_end, double dt, int record_stride, const RunOptions& opts) {
  const GridSpec& g = data.h.grid();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (record_stride < 1) throw InvalidArgument("record_stride must be >= 1");
  if (!(T_end >= data.t)) throw InvalidArgument("T_end precedes the data time");
  if (T_end > wrap_horizon(g) * (1.0 + 1e-12))
    throw PreconditionError("T_end = " + std::to_string(T_end) + " exceeds the wrap-around horizon 0.45 L = " +
                            std::to_string(wrap_horizon(g)));
  const double span = T_end - data.t;
  const long long nsteps = std::llround(span / dt);
  if (std::abs(static_cast<double>(nsteps) * dt - span) > 1e-9 * std::max(1.0, span))
    throw InvalidArgument("T_end - t0 must be an integer multiple of dt");

  Trajectory traj;
  traj.dt = dt;
  traj.record_stride = record_stride;
  traj.nonlinear = opts.nonlinear;
  Profile p = to_profile(data);
  p.f[0] = 0.0;
  const double t0 = data.t;
  auto record = [&](const Profile& q) {
    traj.times.push_back(q.t);
    if (opts.keep_profiles) traj.profiles.push_back(q);
    if (opts.observer) opts.observer(q);
  };
  record(p);
  for (long long k = 1; k <= nsteps; ++k) {
    p = step(p, dt, opts.nonlinear);
    // pin the clock to the step count so long runs do not drift
    p.t = t0 + static_cast<double>(k) * dt;
    if (k % record_stride == 0) record(p);
  }
  return traj;
}

double partial_t_f_norm(const Profile& p, const ParamSet& params, bool nonlinear) {
  if (!nonlinear) return 0.0;
  return lebesgue_norm_dealiased(nonlinearity(to_state(p).h), params.q());
}

ScalarSeries partial_t_f_decay(const Trajectory& traj, const ParamSet& params) {
  if (traj.profiles.size() < 5) throw InvalidArgument("partial_t_f_decay needs at least 5 stored snapshots");
  ScalarSeries s;
  for (const auto& p : traj.profiles) {
    s.times.push_back(p.t);
    s.values.push_back(partial_t_f_norm(p, params, traj.nonlinear));
  }
  return s;
}

EnergySample energy_sample(const Profile& p, const ParamSet& params) {
  const DiagonalState d = to_state(p);
  const FluidState s = undiagonalize(d);
  const GridSpec& g = d.h.grid();
  const auto& t = lattice_tables(g);
  const int m0 = dealiased_size(g.nx), m1 = dealiased_size(g.ny);

  auto deriv = [&](const SpectralField& f, int axis) {
    SpectralField o(g, f.is_real());
    for (std::size_t i = 0; i < g.size(); ++i) o[i] = cd(0.0, axis == 0 ? t.kx[i] : t.ky[i]) * f[i];
    return o;
  };
  const PhysicalField hx = to_physical(deriv(d.h, 0), m0, m1);
  const PhysicalField hy = to_physical(deriv(d.h, 1), m0, m1);
  SpectralField bu(g, true);
  for (std::size_t i = 0; i < g.size(); ++i) bu[i] = t.bracket[i] * s.u[i];
  const RealPhysicalField ub = to_physical_real(bu, m0, m1);
  const RealPhysicalField v11 = to_physical_real(deriv(s.v1, 0), m0, m1);
  const RealPhysicalField v12 = to_physical_real(deriv(s.v1, 1), m0, m1);
  const RealPhysicalField v21 = to_physical_real(deriv(s.v2, 0), m0, m1);
  const RealPhysicalField v22 = to_physical_real(deriv(s.v2, 1), m0, m1);
  double gh = 0, gu = 0, gv = 0;
  for (std::size_t i = 0; i < hx.values.size(); ++i) {
    gh = std::max(gh, std::sqrt(std::norm(hx.values[i]) + std::norm(hy.values[i])));
    gu = std::max(gu, std::abs(ub.values[i]));
    gv = std::max(gv, std::sqrt(v11.values[i] * v11.values[i] + v12.values[i] * v12.values[i] +
                                v21.values[i] * v21.values[i] + v22.values[i] * v22.values[i]));
  }
  EnergySample e;
  e.t = p.t;
  const double hn = sobolev_norm(d.h, params.N);
  e.energy = hn * hn;
  e.D = gh + gu + gv;
  SpectralField sd(g, false);
  for (std::size_t i = 0; i < g.size(); ++i) sd[i] = std::sqrt(t.kabs[i]) * t.bracket[i] * d.h[i];
  e.sup_decay = lebesgue_norm_dealiased(sd, kInf);
  return e;
}

EnergyReport energy_growth_from_samples(const std::vector<EnergySample>& s) {
  if (s.size() < 3) throw InvalidArgument("energy check needs at least 3 snapshots");
  EnergyReport r;
  for (const auto& e : s) {
    const double dom = e.sup_decay > 0.0 ? e.D / e.sup_decay : 0.0;
    r.domination.push_back(dom);
    r.max_domination = std::max(r.max_domination, dom);
  }
  for (std::size_t k = 1; k + 1 < s.size(); ++k) {
    const double h = s[k + 1].t - s[k - 1].t;
    if (!(h > 0.0)) throw InvalidArgument("snapshot times must increase");
    const double dE = (s[k + 1].energy - s[k - 1].energy) / h;
    const double den = s[k].D * s[k].energy;
    const double ratio = den > 0.0 ? dE / den : 0.0;
    r.times.push_back(s[k].t);
    r.ratio.push_back(ratio);
    r.max_ratio = std::max(r.max_ratio, std::abs(ratio));
  }
  return r;
}

EnergyReport energy_growth_check(const Trajectory& traj, const ParamSet& params) {
  std::vector<EnergySample> s;
  s.reserve(traj.profiles.size());
  for (const auto& p : traj.profiles) s.push_back(energy_sample(p, params));
  return energy_growth_from_samples(s);
}

ScatteringReport scattering_from_profiles(const std::vector<Profile>& at, double N_prime) {
  if (at.size() < 3) throw InvalidArgument("scattering check needs at least 3 snapshots");
  ScatteringReport r;
  for (const auto& p : at) r.times.push_back(p.t);
  for (std::size_t j = 0; j + 1 < at.size(); ++j) {
    if (!(at[j + 1].t > at[j].t)) throw InvalidArgument("scattering times must increase");
    r.increments.push_back(sobolev_norm(at[j + 1].f - at[j].f, N_prime));
  }
  r.strictly_decreasing = true;
  r.decreasing_with_slack = true;
  for (std::size_t j = 1; j < r.increments.size(); ++j) {
    if (!(r.increments[j] < r.increments[j - 1])) r.strictly_decreasing = false;
    if (r.increments[j] > 1.1 * r.increments[j - 1]) r.decreasing_with_slack = false;
  }
  const double first = r.increments.front();
  r.last_over_first = first > 0.0 ? r.increments.back() / first : 0.0;
  return r;
}

ScatteringReport scattering_check(const Trajectory& traj, const std::vector<double>& times, double N_prime) {
  std::vector<Profile> at;
  const double tol = 1e-9 * std::max(1.0, traj.times.empty() ? 1.0 : traj.times.back());
  for (double t : times) {
    auto it = std::find_if(traj.profiles.begin(), traj.profiles.end(),
                           [&](const Profile& p) { return std::abs(p.t - t) <= tol; });
    if (it == traj.profiles.end())
      throw InvalidArgument("no stored snapshot at t = " + std::to_string(t));
    at.push_back(*it);
  }
  return scattering_from_profiles(at, N_prime);
}

}  // namespace epkg
