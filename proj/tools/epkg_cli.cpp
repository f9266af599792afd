// Command-line driver: runs, scans and fits. Exit status 0 iff every assertion passes,
// 1 if an assertion fails, 2 on bad input.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "epkg/errors.hpp"
#include "epkg/harness.hpp"
#include "epkg/reports.hpp"

namespace {

using namespace epkg;

int report(const std::vector<CriterionResult>& cs) {
  for (const auto& c : cs) std::cerr << format_criterion(c) << "\n";
  return all_pass(cs) ? 0 : 1;
}

void emit(const std::string& json, const std::string& path) {
  if (path.empty())
    std::cout << json << "\n";
  else
    write_text(path, json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-Poisson / Klein-Gordon decay toolkit"};
  app.require_subcommand(1);
  bool deterministic = false, quiet = false;
  app.add_flag("--deterministic", deterministic, "single-threaded strict mode");
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  std::string config_path;
  auto* sim = app.add_subcommand("simulate", "integrate, record norms, fit exponents");
  sim->add_option("-c,--config", config_path, "run config file")->required();
  auto* lin = app.add_subcommand("linear-decay", "free Klein-Gordon run from the config data");
  lin->add_option("-c,--config", config_path, "run config file")->required();

  std::string csv, column;
  double t0 = 5, t1 = 100, emin = -1e300, emax = 1e300, r2min = 0;
  auto* fit = app.add_subcommand("decay-fit", "log-log fit of a CSV column");
  fit->add_option("--csv", csv, "NormSeries CSV")->required();
  fit->add_option("--column", column, "column name")->required();
  fit->add_option("--t0", t0, "window start");
  fit->add_option("--t1", t1, "window end");
  fit->add_option("--min-exponent", emin, "assert exponent >= value");
  fit->add_option("--max-exponent", emax, "assert exponent <= value");
  fit->add_option("--min-r2", r2min, "assert r2 >= value");

  LemmaOptions lo;
  std::string json_path;
  auto* lem = app.add_subcommand("verify-lemmas", "phase, deformation, factorization, Bernstein and kernel scans");
  lem->add_option("--samples", lo.samples, "random samples for the phase and deformation scans");
  lem->add_option("--radius", lo.phase_radius, "sampling radius of the phase scan");
  lem->add_option("--deform-radius", lo.deform_radius, "sampling radius of the deformation scan");
  lem->add_option("--factorization-samples", lo.factorization_samples, "samples per factorized phase");
  lem->add_option("--factorization-radius", lo.factorization_radius, "sampling radius of the factorization scan");
  lem->add_option("--seed", lo.seed, "RNG seed");
  bool no_kernel = false;
  lem->add_flag("--no-kernel", no_kernel, "skip the kernel L1 scan");
  lem->add_option("--json", json_path, "write the report here instead of stdout");

  NormalFormOptions no;
  auto* nf = app.add_subcommand("normal-form-check", "decomposition residual on a small grid");
  nf->add_option("--n", no.n, "grid points per side (<= 32)");
  nf->add_option("--L", no.L, "box length");
  nf->add_option("--eps", no.amplitude, "data amplitude");
  nf->add_option("--sigma", no.sigma, "data width");
  nf->add_option("--t", no.t, "decomposition time");
  nf->add_option("--dt", no.snapshot_dt, "snapshot spacing (integrator step)");
  nf->add_option("--t-long", no.t_long, "second decomposition time (0 to skip)");
  nf->add_option("--json", json_path, "write the report here instead of stdout");

  std::vector<double> Ms{0.25, 1.0, 4.0}, ts{0.0, 1.0, 4.0, 16.0};
  double bound = 20.0;
  auto* ks = app.add_subcommand("kernel-scan", "||K||_1 of the localized propagator over (M, t)");
  ks->add_option("--M", Ms, "frequency scales");
  ks->add_option("--t", ts, "times");
  ks->add_option("--bound", bound, "assert max ||K||_1/<Mt> <= bound");
  ks->add_option("--json", json_path, "write the report here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  configure_threads(deterministic);
  const LogFn log = quiet ? LogFn{} : LogFn([](const std::string& s) { std::cerr << s << "\n"; });

  try {
    if (sim->parsed() || lin->parsed()) {
      RunConfig cfg = load_config(config_path);
      if (lin->parsed()) cfg.task = "linear-decay";
      const SimulationResult r = run_simulation(cfg, log);
      if (!quiet) std::cerr << "wrote " << cfg.csv_path << " and " << cfg.json_path << "\n";
      return report(r.criteria);
    }
    if (fit->parsed()) {
      const DecayFit f = decay_fit(NormSeries::read_csv(csv), column, t0, t1);
      std::cout << fit_json(f) << "\n";
      const bool ok = f.exponent >= emin && f.exponent <= emax && f.r2 >= r2min;
      if (!ok) std::cerr << "FAIL decay-fit: exponent " << f.exponent << ", r2 " << f.r2 << "\n";
      return ok ? 0 : 1;
    }
    if (lem->parsed()) {
      lo.kernel = !no_kernel;
      const LemmaReport r = verify_lemmas(lo, log);
      emit(lemma_json(r), json_path);
      return report(r.criteria);
    }
    if (nf->parsed()) {
      const NormalFormCheck c = normal_form_check(no, log);
      emit(normal_form_json(c), json_path);
      return report(c.criteria);
    }
    if (ks->parsed()) {
      const KernelScan k = kernel_scan(Ms, ts);
      emit(kernel_scan_json(k), json_path);
      const bool ok = k.constant <= bound;
      std::cerr << (ok ? "PASS" : "FAIL") << " kernel-scan: max ||K||_1/<Mt> = " << k.constant << " (bound " << bound
                << ")\n";
      return ok ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
