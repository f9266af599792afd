#include "epkg/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "epkg/errors.hpp"
#include "epkg/integrator.hpp"

namespace epkg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(int line, const std::string& key) {
  return "line " + std::to_string(line) + ", key '" + key + "'";
}

double to_double(const std::string& v, int line, const std::string& key) {
  double x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError("expected a number at " + where(line, key) + ", got '" + v + "'", line, key);
  return x;
}

long to_long(const std::string& v, int line, const std::string& key) {
  long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size())
    throw ConfigError("expected an integer at " + where(line, key) + ", got '" + v + "'", line, key);
  return x;
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("expected true/false at " + where(line, key) + ", got '" + v + "'", line, key);
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"grid.n", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.n = static_cast<int>(to_long(v, l, k)); }},
      {"grid.L", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.L = to_double(v, l, k); }},
      {"time.dt", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.dt = to_double(v, l, k); }},
      {"time.T_end", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.T_end = to_double(v, l, k); }},
      {"time.record_stride",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.record_stride = static_cast<int>(to_long(v, l, k)); }},
      {"data.amplitude", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.data.amplitude = to_double(v, l, k); }},
      {"data.density",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) {
         try {
           c.data.density = parse_density_profile(v);
         } catch (const InvalidArgument& e) {
           throw ConfigError(std::string(e.what()) + " at " + where(l, k), l, k);
         }
       }},
      {"data.density_sigma",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.data.density_sigma = to_double(v, l, k); }},
      {"data.potential",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) {
         try {
           c.data.potential = parse_potential_profile(v);
         } catch (const InvalidArgument& e) {
           throw ConfigError(std::string(e.what()) + " at " + where(l, k), l, k);
         }
       }},
      {"data.potential_sigma",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.data.potential_sigma = to_double(v, l, k); }},
      {"data.seed",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) {
         const long s = to_long(v, l, k);
         if (s < 0) throw ConfigError("seed must be non-negative at " + where(l, k), l, k);
         c.data.seed = static_cast<std::uint64_t>(s);
       }},
      {"params.N", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.N = to_double(v, l, k); }},
      {"params.N_prime", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.N_prime = to_double(v, l, k); }},
      {"params.N1", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.N1 = to_double(v, l, k); }},
      {"params.delta1", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.delta1 = to_double(v, l, k); }},
      {"params.delta2", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.delta2 = to_double(v, l, k); }},
      {"params.eps1", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.params.eps1 = to_double(v, l, k); }},
      {"output.csv", [](RunConfig& c, const std::string& v, int, const std::string&) { c.csv_path = v; }},
      {"output.json", [](RunConfig& c, const std::string& v, int, const std::string&) { c.json_path = v; }},
      {"output.g_csv", [](RunConfig& c, const std::string& v, int, const std::string&) { c.g_csv_path = v; }},
      {"output.trajectory", [](RunConfig& c, const std::string& v, int, const std::string&) { c.trajectory_path = v; }},
      {"run.task",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) {
         if (v != "simulate" && v != "linear-decay")
           throw ConfigError("task must be simulate or linear-decay at " + where(l, k), l, k);
         c.task = v;
       }},
      {"run.nonlinear", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.nonlinear = to_bool(v, l, k); }},
      {"run.fit_t0", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.fit_t0 = to_double(v, l, k); }},
      {"run.fit_t1", [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.fit_t1 = to_double(v, l, k); }},
      {"run.g_samples",
       [](RunConfig& c, const std::string& v, int l, const std::string& k) { c.g_samples = static_cast<int>(to_long(v, l, k)); }},
  };
  return m;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double RunConfig::fit_end() const {
  const double wrap = wrap_horizon(GridSpec::square(n, L));
  return fit_t1 > 0 ? fit_t1 : std::min(T_end, wrap);
}

void RunConfig::validate() const {
  auto fail = [](const std::string& key, const std::string& msg) { throw ConfigError(key + ": " + msg, 0, key); };
  if (n < 4 || n % 2) fail("grid.n", "must be an even integer >= 4");
  if (!(L > 0)) fail("grid.L", "must be positive");
  if (!(dt > 0)) fail("time.dt", "must be positive");
  if (!(T_end > 0)) fail("time.T_end", "must be positive");
  const double steps = T_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) fail("time.T_end", "must be a multiple of dt");
  if (record_stride < 1) fail("time.record_stride", "must be >= 1");
  if (T_end > wrap_horizon(GridSpec::square(n, L))) fail("time.T_end", "exceeds the wrap-around horizon 0.45 L");
  if (data.amplitude < 0) fail("data.amplitude", "must be non-negative");
  if (!(data.density_sigma > 0)) fail("data.density_sigma", "must be positive");
  if (!(data.potential_sigma > 0)) fail("data.potential_sigma", "must be positive");
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    fail("params", e.what());
  }
  if (!(fit_t0 > 0)) fail("run.fit_t0", "must be positive");
  if (!(fit_end() > fit_t0)) fail("run.fit_t1", "fit window is empty");
  if (g_samples < 0) fail("run.g_samples", "must be non-negative");
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream is(text);
  std::string raw, section;
  int line = 0, keys = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header on line " + std::to_string(line), line, s);
      section = trim(s.substr(1, s.size() - 2));
      static const char* known[] = {"grid", "time", "data", "params", "output", "run"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("unknown section [" + section + "] on line " + std::to_string(line), line, section);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value on line " + std::to_string(line), line, s);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key outside a section at " + where(line, key), line, key);
    const std::string full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw ConfigError("unknown key at " + where(line, full), line, full);
    if (value.empty()) throw ConfigError("missing value at " + where(line, full), line, full);
    it->second(c, value, line, full);
    ++keys;
  }
  if (keys == 0) throw ConfigError("config is empty", 0, "");
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path, 0, "");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\nn = " << c.n << "\nL = " << num(c.L) << "\n\n";
  os << "[time]\ndt = " << num(c.dt) << "\nT_end = " << num(c.T_end) << "\nrecord_stride = " << c.record_stride << "\n\n";
  os << "[data]\namplitude = " << num(c.data.amplitude) << "\ndensity = " << to_string(c.data.density)
     << "\ndensity_sigma = " << num(c.data.density_sigma) << "\npotential = " << to_string(c.data.potential)
     << "\npotential_sigma = " << num(c.data.potential_sigma) << "\nseed = " << c.data.seed << "\n\n";
  os << "[params]\nN = " << num(c.params.N) << "\nN_prime = " << num(c.params.N_prime) << "\nN1 = " << num(c.params.N1)
     << "\ndelta1 = " << num(c.params.delta1) << "\ndelta2 = " << num(c.params.delta2) << "\neps1 = " << num(c.params.eps1)
     << "\n\n";
  os << "[output]\ncsv = " << c.csv_path << "\njson = " << c.json_path << "\n";
  if (!c.g_csv_path.empty()) os << "g_csv = " << c.g_csv_path << "\n";
  if (!c.trajectory_path.empty()) os << "trajectory = " << c.trajectory_path << "\n";
  os << "\n[run]\ntask = " << c.task << "\nnonlinear = " << (c.nonlinear ? "true" : "false") << "\nfit_t0 = " << num(c.fit_t0)
     << "\nfit_t1 = " << num(c.fit_t1) << "\ng_samples = " << c.g_samples << "\n";
  return os.str();
}

}  // namespace epkg
