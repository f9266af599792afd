#include "epkg/harness.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <random>
#include <set>

#include "epkg/errors.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "epkg/reports.hpp"

namespace epkg {

namespace {

double jb(double t) { return std::sqrt(1.0 + t * t); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void say(const LogFn& log, const std::string& s) {
  if (log) log(s);
}

CriterionResult make(std::string id, std::string desc, bool pass, double measured, std::string req,
                     std::string detail = {}) {
  return {std::move(id), std::move(desc), pass, measured, std::move(req), std::move(detail)};
}

// Snapshot times closest to n log-spaced points in [t0, t1], deduplicated.
std::set<long> log_spaced_records(double t0, double t1, int n, double snap) {
  std::set<long> out;
  if (n <= 0) return out;
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? t0 : t0 * std::pow(t1 / t0, static_cast<double>(k) / (n - 1));
    long r = std::lround(t / snap);
    if (r * snap < t0 - 1e-9) ++r;
    if (r * snap > t1 + 1e-9) --r;
    out.insert(r);
  }
  return out;
}

}  // namespace

XNormRow compute_xnorm_components(const Profile& p, const ParamSet& params) {
  XNormRow r;
  r.t = p.t;
  const SpectralField h = apply_multiplier(MultiplierSpec::kg_semigroup(p.t), p.f);
  r.raw = xnorm_raw(h, p.t, params);
  const double w = jb(p.t);
  r.t_sup_decay = w * r.raw.sup_decay;
  r.t_hN = std::pow(w, -params.delta1) * r.raw.hN;
  r.t_lq = std::pow(w, 1.0 - 2.0 / params.q()) * r.raw.lq;
  return r;
}

std::vector<std::string> xnorm_columns() {
  return {"sup_decay", "hN", "hNprime", "lq", "weighted", "t_sup_decay", "t_hN", "t_lq"};
}

std::vector<double> xnorm_values(const XNormRow& r) {
  return {r.raw.sup_decay, r.raw.hN, r.raw.hN_prime, r.raw.lq, r.raw.weighted, r.t_sup_decay, r.t_hN, r.t_lq};
}

DecayFit decay_fit(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1) {
  if (t.size() != v.size()) throw DimensionMismatch("decay_fit: times and values differ in length");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    if (!(v[i] > 0) || !(t[i] > 0))
      throw InvalidArgument("decay_fit: nonpositive value " + num(v[i]) + " at t = " + num(t[i]));
    x.push_back(std::log(t[i]));
    y.push_back(std::log(v[i]));
  }
  if (x.size() < 8)
    throw InvalidArgument("decay_fit: need at least 8 points in [" + num(t0) + ", " + num(t1) + "], got " +
                          std::to_string(x.size()));
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) throw InvalidArgument("decay_fit: window contains a single time");
  DecayFit f;
  f.exponent = sxy / sxx;
  f.intercept = my - f.exponent * mx;
  double sse = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.exponent * x[i]);
    sse += e * e;
  }
  f.r2 = syy > 0 ? 1.0 - sse / syy : 1.0;
  f.points = x.size();
  f.t0 = t0;
  f.t1 = t1;
  return f;
}

DecayFit decay_fit(const NormSeries& s, const std::string& column, double t0, double t1) {
  return decay_fit(s.times(), s.column(column), t0, t1);
}

double spread(const std::vector<double>& t, const std::vector<double>& v, double t0, double t1) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t0 || t[i] > t1) continue;
    lo = std::min(lo, v[i]);
    hi = std::max(hi, v[i]);
  }
  if (!(lo > 0)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

bool all_pass(const std::vector<CriterionResult>& c) {
  for (const auto& x : c)
    if (!x.pass) return false;
  return true;
}

std::string format_criterion(const CriterionResult& c) {
  std::string s = (c.pass ? "PASS " : "FAIL ") + c.id + ": " + c.description + " | measured " + num(c.measured) +
                  " | required " + c.requirement;
  if (!c.detail.empty()) s += " | " + c.detail;
  return s;
}

int configure_threads(bool deterministic) {
  int n = 0;
  if (const char* env = std::getenv("EPKG_NUM_THREADS")) n = std::atoi(env);
  if (deterministic) n = 1;
  if (n > 0) omp_set_num_threads(n);
  return n > 0 ? n : omp_get_max_threads();
}

SimulationResult run_simulation(const RunConfig& cfg_in, const LogFn& log) {
  const auto t_start = std::chrono::steady_clock::now();
  RunConfig cfg = cfg_in;
  if (cfg.task == "linear-decay") cfg.nonlinear = false;
  cfg.validate();
  const GridSpec grid = GridSpec::square(cfg.n, cfg.L);
  const InitialData data = make_initial_data(grid, cfg.data, cfg.params);

  SimulationResult res;
  res.config = cfg;
  res.wrap_horizon = wrap_horizon(grid);
  res.initial = data.initial_norms;

  auto cols = xnorm_columns();
  cols.push_back("dtf_lq");
  res.norms = NormSeries(cols);

  const double snap = cfg.dt * cfg.record_stride;
  const double t1 = cfg.fit_end();
  const std::set<long> g_records = log_spaced_records(cfg.fit_t0, t1, cfg.g_samples, snap);
  const std::vector<double> scatter_times = {12.5, 25.0, 50.0, 100.0};
  std::set<long> scatter_records;
  const bool scatter = cfg.nonlinear && cfg.T_end >= 100.0 - 1e-9;
  if (scatter)
    for (double t : scatter_times) {
      const long r = std::lround(t / snap);
      if (std::abs(r * snap - t) < 1e-9) scatter_records.insert(r);
    }
  std::vector<Profile> g_profiles, scatter_profiles;
  std::vector<EnergySample> energy;
  std::unique_ptr<TrajectoryWriter> writer;
  if (!cfg.trajectory_path.empty())
    writer = std::make_unique<TrajectoryWriter>(cfg.trajectory_path, cfg.dt, cfg.record_stride, cfg.nonlinear);

  long record = 0;
  double next_log = 0;
  RunOptions ro;
  ro.nonlinear = cfg.nonlinear;
  ro.keep_profiles = false;
  ro.observer = [&](const Profile& p) {
    const XNormRow row = compute_xnorm_components(p, cfg.params);
    auto values = xnorm_values(row);
    values.push_back(partial_t_f_norm(p, cfg.params, cfg.nonlinear));
    res.norms.add_row(p.t, values);
    energy.push_back(energy_sample(p, cfg.params));
    if (g_records.count(record)) g_profiles.push_back(p);
    if (scatter_records.count(record)) scatter_profiles.push_back(p);
    if (writer) writer->append(p);
    if (p.t >= next_log) {
      say(log, "t = " + num(p.t) + "  sup_decay = " + num(row.raw.sup_decay) + "  hN = " + num(row.raw.hN) + "  (" +
                   num(seconds_since(t_start)) + " s)");
      next_log += 10.0;
    }
    ++record;
  };
  say(log, "integrating " + std::to_string(cfg.n) + "^2, L = " + num(cfg.L) + ", T = " + num(cfg.T_end) +
               (cfg.nonlinear ? " (nonlinear)" : " (linear)"));
  run(data.state, cfg.T_end, cfg.dt, cfg.record_stride, ro);
  if (writer) writer->close();

  say(log, "boundary term at " + std::to_string(g_profiles.size()) + " times");
  res.g = g_decay_scan(g_profiles, cfg.params);
  if (energy.size() >= 3) res.energy = energy_growth_from_samples(energy);
  if (scatter_profiles.size() == scatter_times.size())
    res.scattering = scattering_from_profiles(scatter_profiles, cfg.params.N_prime);

  const auto& hN = res.norms.column("hN");
  for (double v : hN) res.hN_max_ratio = std::max(res.hN_max_ratio, v / res.initial.hN);

  const double t0 = cfg.fit_t0;
  auto fit = [&](const std::string& key, const std::vector<double>& t, const std::vector<double>& v) -> const DecayFit* {
    try {
      res.fits[key] = decay_fit(t, v, t0, t1);
      return &res.fits[key];
    } catch (const InvalidArgument& e) {
      say(log, "fit " + key + " skipped: " + e.what());
      return nullptr;
    }
  };
  const std::string window = "t in [" + num(t0) + ", " + num(t1) + "]";
  const DecayFit* sup = fit("sup_decay", res.norms.times(), res.norms.column("sup_decay"));
  const DecayFit* gh = fit("g_hNprime_half", res.g.series.times(), res.g.series.column("g_hNprime_half"));
  fit("g_hNprime", res.g.series.times(), res.g.series.column("g_hNprime"));
  auto missing = [&](const char* id, const char* what) {
    res.criteria.push_back(make(id, what, false, std::nan(""), "fit", "not enough points in " + window));
  };

  if (!cfg.nonlinear) {
    if (sup)
      res.criteria.push_back(make("1", "linear sup_decay exponent", std::abs(sup->exponent + 1.0) <= 0.15 && sup->r2 >= 0.98,
                                  sup->exponent, "-1 +- 0.15 with r2 >= 0.98", "r2 = " + num(sup->r2) + ", " + window));
    else
      missing("1", "linear sup_decay exponent");
    const double sp = spread(res.norms.times(), res.norms.column("t_sup_decay"), t0, t1);
    res.criteria.push_back(make("linear-t-sup", "<t> sup_decay spread (max/min)", sp <= 4.0, sp, "<= 4", window));
    if (gh)
      res.criteria.push_back(make("linear-g", "free-wave g H^{N'/2} exponent", gh->exponent <= -0.8, gh->exponent, "<= -0.8"));
    else
      missing("linear-g", "free-wave g H^{N'/2} exponent");
  } else {
    const DecayFit* lq = fit("lq", res.norms.times(), res.norms.column("lq"));
    const DecayFit* dtf = fit("dtf_lq", res.norms.times(), res.norms.column("dtf_lq"));
    if (sup && lq) {
      const bool ok = sup->exponent >= -1.15 && sup->exponent <= -0.85 && lq->exponent >= -1.05 && lq->exponent <= -0.75 &&
                      res.hN_max_ratio <= 1.5;
      res.criteria.push_back(make("2", "nonlinear sup_decay exponent", ok, sup->exponent, "[-1.15, -0.85]",
                                  "lq exponent " + num(lq->exponent) + " in [-1.05, -0.75]; max hN/hN(0) " +
                                      num(res.hN_max_ratio) + " <= 1.5"));
    } else {
      missing("2", "nonlinear decay exponents");
    }
    if (gh) {
      const double sp = spread(res.g.series.times(), res.g.series.column("t_g_hNprime_half"), t0, t1);
      res.criteria.push_back(make("3", "<t> ||g||_{H^{N'/2}} spread (max/min)", sp <= 5.0 && gh->exponent <= -0.8, sp, "<= 5",
                                  "g H^{N'/2} exponent " + num(gh->exponent) + " <= -0.8"));
    } else {
      missing("3", "boundary-term decay");
    }
    if (dtf)
      res.criteria.push_back(make("4", "d_t f L^q exponent", dtf->exponent >= -2.3 && dtf->exponent <= -1.7, dtf->exponent,
                                  "[-2.3, -1.7]", "r2 = " + num(dtf->r2)));
    else
      missing("4", "d_t f L^q exponent");
    if (!res.scattering.increments.empty()) {
      const auto& inc = res.scattering.increments;
      const bool dec = inc[1] < inc[0] && inc[2] < inc[1];
      const double ratio = inc[2] / inc[0];
      res.criteria.push_back(make("10", "scattering increments at t = 12.5, 25, 50", dec && ratio <= 0.2, ratio,
                                  "strictly decreasing, last/first <= 0.2",
                                  "increments " + num(inc[0]) + ", " + num(inc[1]) + ", " + num(inc[2])));
    }
  }
  res.seconds = seconds_since(t_start);
  if (!cfg.nonlinear)
    res.criteria.push_back(make("runtime", "linear run wall time (s)", res.seconds <= 600, res.seconds, "<= 600"));

  if (!cfg.csv_path.empty()) res.norms.write_csv(cfg.csv_path);
  if (!cfg.g_csv_path.empty()) res.g.series.write_csv(cfg.g_csv_path);
  if (!cfg.json_path.empty()) write_text(cfg.json_path, simulation_json(res));
  return res;
}

KernelScan kernel_scan(const std::vector<double>& Ms, const std::vector<double>& ts, const KernelOptions& opts) {
  KernelScan out;
  for (double M : Ms)
    for (double t : ts) {
      const KernelReport r = kernel_l1_norm(M, t, opts);
      out.constant = std::max(out.constant, r.l1 / jb(M * t));
      out.reports.push_back(r);
    }
  return out;
}

LemmaReport verify_lemmas(const LemmaOptions& opts_in, const LogFn& log) {
  const auto t_start = std::chrono::steady_clock::now();
  LemmaReport rep;
  rep.options = opts_in;
  LemmaOptions& opts = rep.options;
  if (opts.lattices.empty())
    opts.lattices = {GridSpec::square(16, 4.0 * std::numbers::pi), GridSpec::square(64, 32.0)};

  say(log, "phase lower bound: random samples");
  rep.phase_random = phase_lower_bound_scan(opts.samples, opts.phase_radius, opts.seed);
  double phase_min = std::numeric_limits<double>::infinity();
  for (const auto& b : rep.phase_random) phase_min = std::min(phase_min, b.min_product);
  for (const auto& g : opts.lattices) {
    say(log, "phase lower bound: lattice " + std::to_string(g.nx) + "^2");
    rep.phase_lattice.emplace_back(g, phase_lower_bound_lattice(g));
    for (const auto& b : rep.phase_lattice.back().second) phase_min = std::min(phase_min, b.min_product);
  }
  rep.criteria.push_back(make("6", "phase lower bound min |phi|<|xi|+|eta|>", phase_min >= 0.05, phase_min, ">= 0.05",
                              "4 combos, random radius " + num(opts.phase_radius) + " and " +
                                  std::to_string(opts.lattices.size()) + " lattices"));

  say(log, "deformation matrix");
  rep.deform = deform_scan(opts.samples, opts.deform_radius, opts.seed + 1);
  {
    const auto& d = rep.deform;
    const bool ok = d.max_residual <= 1e-10 && d.max_norm <= 1.0 + 1e-9 && d.min_lower_product >= 0.3;
    rep.criteria.push_back(make("7", "deformation residual", ok, d.max_residual, "<= 1e-10",
                                "max ||Q|| " + num(d.max_norm) + " <= 1+1e-9; min ||Q||<|x|+|y|>^3 " +
                                    num(d.min_lower_product) + " >= 0.3"));
  }

  say(log, "phase factorization");
  double worst_fraction = 1.0;
  std::string fdetail;
  for (int w = 1; w <= 3; ++w) {
    rep.factorization[w - 1] =
        phase_factorization_scan(w, opts.factorization_samples, opts.factorization_radius, opts.seed + 1 + w);
    const auto& f = rep.factorization[w - 1];
    worst_fraction = std::min(worst_fraction, f.fraction_ok);
    fdetail += "phi" + std::to_string(w) + ": ok " + num(f.fraction_ok) + ", singular " + std::to_string(f.singular) + "; ";
  }
  rep.criteria.push_back(make("8", "phase factorization fraction with residual <= 1e-10", worst_fraction >= 0.999,
                              worst_fraction, ">= 0.999", fdetail));

  say(log, "Bernstein ratios");
  {
    const GridSpec g = GridSpec::square(64, 32.0);
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> nd;
    std::vector<double> noise(g.size());
    for (auto& x : noise) x = nd(rng);
    const SpectralField f = from_physical(g, noise);
    bool ok = true;
    double worst = 1.0;
    for (double M : {1.0, 2.0, 4.0})
      for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 2.0}, std::pair{2.0, kInf}, std::pair{1.0, kInf}}) {
        rep.bernstein.push_back(bernstein_check(f, M, p, q, 1.0));
        const auto& b = rep.bernstein.back();
        ok = ok && b.within;
        worst = std::max({worst, b.derivative_ratio, 1.0 / b.derivative_ratio, b.inverse_ratio, 1.0 / b.inverse_ratio,
                          b.embedding_ratio});
      }
    rep.criteria.push_back(make("bernstein", "Bernstein ratios within window", ok, worst, "<= 4"));
  }

  if (opts.kernel) {
    say(log, "propagator kernel");
    rep.kernel = kernel_scan({0.25, 1.0, 4.0}, {0.0, 1.0, 4.0, 16.0});
    rep.criteria.push_back(make("9", "max ||K||_1/<Mt>", rep.kernel.constant <= 20.0, rep.kernel.constant, "<= 20"));
  }
  rep.seconds = seconds_since(t_start);
  return rep;
}

NormalFormCheck normal_form_check(const NormalFormOptions& opts, const LogFn& log) {
  const auto t_start = std::chrono::steady_clock::now();
  NormalFormCheck out;
  out.options = opts;
  const GridSpec grid = GridSpec::square(opts.n, opts.L);
  InitialDataSpec spec;
  spec.amplitude = opts.amplitude;
  spec.density_sigma = opts.sigma;
  spec.potential_sigma = opts.sigma;
  const InitialData data = make_initial_data(grid, spec);

  auto decomposition = [&](double t, double dt) {
    say(log, "decomposition at t = " + num(t) + ", snapshot dt = " + num(dt));
    const Trajectory traj = run(data.state, t, dt, 1);
    return decompose(traj, t);
  };
  out.base = decomposition(opts.t, opts.snapshot_dt);
  out.refined = decomposition(opts.t, 0.5 * opts.snapshot_dt);
  out.refinement_ratio = out.refined.residual > 0 ? out.base.residual / out.refined.residual
                                                  : std::numeric_limits<double>::infinity();
  const bool ok = out.base.relative_residual <= 1e-6 && out.refinement_ratio >= 8.0;
  out.criteria.push_back(make("5", "normal-form relative residual", ok, out.base.relative_residual, "<= 1e-6",
                              "snapshot-dt halving ratio " + num(out.refinement_ratio) + " >= 8"));
  if (opts.t_long > 0) {
    out.long_time = decomposition(opts.t_long, opts.snapshot_dt);
    out.long_ratio = out.base.residual > 0 ? out.long_time.residual / out.base.residual : 0.0;
    out.criteria.push_back(make("normal-form-long", "residual at t_long / residual at t", out.long_ratio <= 10.0,
                                out.long_ratio, "<= 10", "t_long = " + num(opts.t_long)));
  }
  out.seconds = seconds_since(t_start);
  out.criteria.push_back(make("normal-form-runtime", "normal-form check wall time (s)", out.seconds <= 300, out.seconds,
                              "<= 300"));
  return out;
}

}  // namespace epkg
