#include "epkg/reports.hpp"

#include <cmath>
#include <fstream>

#include "epkg/errors.hpp"
#include "json.hpp"

namespace epkg {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(Vec2 v) { return json::array({v.x, v.y}); }

json to_json(const std::vector<CriterionResult>& cs) {
  json a = json::array();
  for (const auto& c : cs)
    a.push_back({{"id", c.id},
                 {"description", c.description},
                 {"pass", c.pass},
                 {"measured", number(c.measured)},
                 {"requirement", c.requirement},
                 {"detail", c.detail}});
  return a;
}

json to_json(const DecayFit& f) {
  return {{"exponent", number(f.exponent)}, {"intercept", number(f.intercept)}, {"r2", number(f.r2)},
          {"points", f.points},             {"t0", f.t0},                      {"t1", f.t1}};
}

json to_json(const XNormRaw& x) {
  return {{"sup_decay", number(x.sup_decay)}, {"hN", number(x.hN)}, {"hNprime", number(x.hN_prime)},
          {"lq", number(x.lq)},               {"weighted", number(x.weighted)}};
}

json to_json(const KernelScan& k) {
  json a = json::array();
  for (const auto& r : k.reports)
    a.push_back({{"M", r.M}, {"t", r.t}, {"l1", number(r.l1)}, {"box_length", r.box_length}, {"points", r.points},
                 {"tail_fraction", number(r.tail_fraction)}});
  return {{"constant", number(k.constant)}, {"reports", a}};
}

json to_json(const Decomposition& d) { return json::parse(decomposition_json(d)); }

json phase_bounds(const std::array<PhaseBound, 4>& b) {
  json a = json::array();
  for (const auto& x : b)
    a.push_back({{"combo", x.combo.name()}, {"min_product", number(x.min_product)}, {"worst_xi", vec(x.worst_xi)},
                 {"worst_eta", vec(x.worst_eta)}, {"samples", x.samples}});
  return a;
}

bool all(const std::vector<CriterionResult>& cs) {
  for (const auto& c : cs)
    if (!c.pass) return false;
  return true;
}

}  // namespace

std::string criteria_json(const std::vector<CriterionResult>& c) { return to_json(c).dump(2); }

std::string fit_json(const DecayFit& f) { return to_json(f).dump(2); }

std::string simulation_json(const SimulationResult& r) {
  const RunConfig& c = r.config;
  json j;
  j["config"] = {{"n", c.n},
                 {"L", c.L},
                 {"dt", c.dt},
                 {"T_end", c.T_end},
                 {"record_stride", c.record_stride},
                 {"nonlinear", c.nonlinear},
                 {"task", c.task},
                 {"amplitude", c.data.amplitude},
                 {"density", to_string(c.data.density)},
                 {"density_sigma", c.data.density_sigma},
                 {"potential", to_string(c.data.potential)},
                 {"potential_sigma", c.data.potential_sigma},
                 {"seed", c.data.seed},
                 {"params",
                  {{"N", c.params.N},
                   {"N_prime", c.params.N_prime},
                   {"N1", c.params.N1},
                   {"delta1", c.params.delta1},
                   {"delta2", c.params.delta2},
                   {"eps1", c.params.eps1},
                   {"q", c.params.q()}}}};
  j["wrap_horizon"] = r.wrap_horizon;
  j["fit_window"] = {c.fit_t0, c.fit_end()};
  j["initial_norms"] = to_json(r.initial);
  if (r.norms.size() > 0) {
    json fin;
    for (const auto& col : r.norms.columns()) fin[col] = number(r.norms.column(col).back());
    fin["t"] = r.norms.times().back();
    j["final_norms"] = fin;
  }
  json fits;
  for (const auto& [k, f] : r.fits) fits[k] = to_json(f);
  j["fits"] = fits;
  j["hN_max_ratio"] = number(r.hN_max_ratio);
  j["energy"] = {{"max_ratio", number(r.energy.max_ratio)}, {"max_domination", number(r.energy.max_domination)}};
  json g = json::array();
  for (std::size_t i = 0; i < r.g.series.size(); ++i) {
    json row{{"t", r.g.series.times()[i]}};
    for (const auto& col : r.g.series.columns()) row[col] = number(r.g.series.column(col)[i]);
    g.push_back(row);
  }
  j["g"] = g;
  json gw = json::array();
  for (std::size_t i = 0; i < r.g.weighted.size(); ++i) gw.push_back({r.g.weighted_times[i], number(r.g.weighted[i])});
  j["g_weighted"] = gw;
  if (!r.scattering.increments.empty())
    j["scattering"] = {{"times", r.scattering.times},
                       {"increments", r.scattering.increments},
                       {"strictly_decreasing", r.scattering.strictly_decreasing},
                       {"last_over_first", number(r.scattering.last_over_first)}};
  j["criteria"] = to_json(r.criteria);
  j["pass"] = all(r.criteria);
  j["seconds"] = r.seconds;
  return j.dump(2);
}

std::string lemma_json(const LemmaReport& r) {
  json j;
  j["samples"] = r.options.samples;
  j["phase_random"] = {{"radius", r.options.phase_radius}, {"bounds", phase_bounds(r.phase_random)}};
  json lat = json::array();
  for (const auto& [g, b] : r.phase_lattice) lat.push_back({{"n", g.nx}, {"L", g.L}, {"bounds", phase_bounds(b)}});
  j["phase_lattice"] = lat;
  j["deform"] = {{"samples", r.deform.samples},
                 {"radius", r.options.deform_radius},
                 {"max_residual", number(r.deform.max_residual)},
                 {"max_norm", number(r.deform.max_norm)},
                 {"min_lower_product", number(r.deform.min_lower_product)},
                 {"worst_x", vec(r.deform.worst_x)},
                 {"worst_y", vec(r.deform.worst_y)}};
  json fac = json::array();
  for (const auto& f : r.factorization)
    fac.push_back({{"phase", f.which},
                   {"samples", f.samples},
                   {"singular", f.singular},
                   {"within_tolerance", f.within_tolerance},
                   {"fraction_ok", number(f.fraction_ok)},
                   {"max_residual", number(f.max_residual)},
                   {"bound_exponent", number(f.bound_exponent)},
                   {"bound_constant", number(f.bound_constant)}});
  j["factorization"] = {{"radius", r.options.factorization_radius}, {"phases", fac}};
  json b = json::array();
  for (const auto& x : r.bernstein)
    b.push_back({{"M", x.M},
                 {"p", number(x.p)},
                 {"q", number(x.q)},
                 {"s", x.s},
                 {"derivative_ratio", number(x.derivative_ratio)},
                 {"inverse_ratio", number(x.inverse_ratio)},
                 {"embedding_ratio", number(x.embedding_ratio)},
                 {"within", x.within}});
  j["bernstein"] = b;
  if (!r.kernel.reports.empty()) j["kernel"] = to_json(r.kernel);
  j["criteria"] = to_json(r.criteria);
  j["pass"] = all(r.criteria);
  j["seconds"] = r.seconds;
  return j.dump(2);
}

std::string kernel_scan_json(const KernelScan& k) { return to_json(k).dump(2); }

std::string normal_form_json(const NormalFormCheck& c) {
  json j;
  const auto& o = c.options;
  j["options"] = {{"n", o.n}, {"L", o.L}, {"amplitude", o.amplitude}, {"sigma", o.sigma},
                  {"t", o.t}, {"snapshot_dt", o.snapshot_dt}, {"t_long", o.t_long}};
  j["base"] = to_json(c.base);
  j["refined"] = to_json(c.refined);
  j["refinement_ratio"] = number(c.refinement_ratio);
  if (o.t_long > 0) {
    j["long_time"] = to_json(c.long_time);
    j["long_ratio"] = number(c.long_ratio);
  }
  j["criteria"] = to_json(c.criteria);
  j["pass"] = all(c.criteria);
  j["seconds"] = c.seconds;
  return j.dump(2);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << text << "\n";
  if (!os) throw Error("write failed for " + path);
}

}  // namespace epkg
