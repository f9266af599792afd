#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epkg/config.hpp"
#include "epkg/errors.hpp"
#include "epkg/harness.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "epkg/quadratic.hpp"
#include "epkg/reports.hpp"

namespace py = pybind11;
using namespace epkg;

namespace {

using CArray = py::array_t<cd, py::array::c_style | py::array::forcecast>;

// Coefficients as an (nx, ny) array in FFT storage order.
CArray coeffs_array(const SpectralField& f) {
  const GridSpec& g = f.grid();
  CArray a({g.nx, g.ny});
  std::copy(f.coeffs().begin(), f.coeffs().end(), a.mutable_data());
  return a;
}

SpectralField field_from_array(const GridSpec& g, const CArray& a, bool real) {
  if (a.ndim() != 2 || a.shape(0) != g.nx || a.shape(1) != g.ny)
    throw DimensionMismatch("coefficient array must have shape (nx, ny)");
  SpectralField f(g, std::vector<cd>(a.data(), a.data() + a.size()), real);
  f.clear_off_lattice();
  return f;
}

py::array_t<double> physical_array(const SpectralField& f) {
  const RealPhysicalField p = to_physical_real(f);
  py::array_t<double> a({p.m0, p.m1});
  std::copy(p.values.begin(), p.values.end(), a.mutable_data());
  return a;
}

}  // namespace

PYBIND11_MODULE(_epkg, m) {
  m.doc() = "Spectral Euler-Poisson / Klein-Gordon toolkit";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<BlowUpError>(m, "BlowUpError", base.ptr());

  py::class_<GridSpec>(m, "GridSpec")
      .def(py::init(&GridSpec::make), py::arg("nx"), py::arg("ny"), py::arg("L"))
      .def_static("square", &GridSpec::square, py::arg("n"), py::arg("L"))
      .def_readonly("nx", &GridSpec::nx)
      .def_readonly("ny", &GridSpec::ny)
      .def_readonly("L", &GridSpec::L)
      .def_property_readonly("dk", &GridSpec::dk)
      .def("__eq__", [](const GridSpec& a, const GridSpec& b) { return a == b; })
      .def("__repr__", [](const GridSpec& g) {
        return "GridSpec(" + std::to_string(g.nx) + ", " + std::to_string(g.ny) + ", " + std::to_string(g.L) + ")";
      });

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init<const GridSpec&, bool>(), py::arg("grid"), py::arg("is_real") = false)
      .def_static("from_coeffs", &field_from_array, py::arg("grid"), py::arg("coeffs"), py::arg("is_real") = false)
      .def_static("from_values",
                  [](const GridSpec& g, py::array_t<double, py::array::c_style | py::array::forcecast> v) {
                    if (v.ndim() != 2 || v.shape(0) != g.nx || v.shape(1) != g.ny)
                      throw DimensionMismatch("value array must have shape (nx, ny)");
                    return from_physical(g, std::span<const double>(v.data(), v.size()));
                  })
      .def_property_readonly("grid", &SpectralField::grid)
      .def_property_readonly("is_real", &SpectralField::is_real)
      .def_property_readonly("coeffs", &coeffs_array)
      .def("values", &physical_array, "Real point values on the native grid.")
      .def("at", py::overload_cast<int, int>(&SpectralField::at, py::const_))
      .def("max_abs", &SpectralField::max_abs)
      .def("l2_norm", &l2_norm_spectral)
      .def("lebesgue_norm", [](const SpectralField& f, double p) { return lebesgue_norm(f, p); })
      .def("sobolev_norm", &sobolev_norm)
      .def("__add__", [](const SpectralField& a, const SpectralField& b) { return a + b; })
      .def("__sub__", [](const SpectralField& a, const SpectralField& b) { return a - b; })
      .def("__mul__", [](const SpectralField& a, cd s) { return s * a; })
      .def("__rmul__", [](const SpectralField& a, cd s) { return s * a; });

  m.def("riesz", [](const SpectralField& f, int j) { return apply_multiplier(MultiplierSpec::riesz(j), f); });
  m.def("abs_grad_power",
        [](const SpectralField& f, double s) { return apply_multiplier(MultiplierSpec::abs_grad_power(s), f); });
  m.def("bracket_power",
        [](const SpectralField& f, double s) { return apply_multiplier(MultiplierSpec::bracket_power(s), f); });
  m.def("kg_semigroup",
        [](const SpectralField& f, double t) { return apply_multiplier(MultiplierSpec::kg_semigroup(t), f); });
  m.def(
      "lp_project",
      [](const SpectralField& f, double N, const std::string& kind) {
        if (kind == "at") return lp_project(f, N, LpKind::at);
        if (kind == "leq") return lp_project(f, N, LpKind::leq);
        if (kind == "gt") return lp_project(f, N, LpKind::gt);
        if (kind == "fat") return lp_project(f, N, LpKind::fat);
        throw InvalidArgument("kind must be at, leq, gt or fat");
      },
      py::arg("f"), py::arg("N"), py::arg("kind") = "at");

  py::class_<ParamSet>(m, "ParamSet")
      .def(py::init<>())
      .def_readwrite("N", &ParamSet::N)
      .def_readwrite("N_prime", &ParamSet::N_prime)
      .def_readwrite("N1", &ParamSet::N1)
      .def_readwrite("delta1", &ParamSet::delta1)
      .def_readwrite("delta2", &ParamSet::delta2)
      .def_readwrite("eps1", &ParamSet::eps1)
      .def_property_readonly("q", &ParamSet::q)
      .def("validate", &ParamSet::validate);

  py::class_<XNormRaw>(m, "XNormRaw")
      .def_readonly("sup_decay", &XNormRaw::sup_decay)
      .def_readonly("hN", &XNormRaw::hN)
      .def_readonly("hN_prime", &XNormRaw::hN_prime)
      .def_readonly("lq", &XNormRaw::lq)
      .def_readonly("weighted", &XNormRaw::weighted);

  m.def(
      "initial_data",
      [](const GridSpec& g, double amplitude, const std::string& density, double density_sigma,
         const std::string& potential, double potential_sigma, std::uint64_t seed) {
        InitialDataSpec s;
        s.amplitude = amplitude;
        s.density = parse_density_profile(density);
        s.density_sigma = density_sigma;
        s.potential = parse_potential_profile(potential);
        s.potential_sigma = potential_sigma;
        s.seed = seed;
        return make_initial_data(g, s).state.h;
      },
      py::arg("grid"), py::arg("amplitude") = 0.01, py::arg("density") = "laplacian_gaussian",
      py::arg("density_sigma") = 2.0, py::arg("potential") = "gaussian", py::arg("potential_sigma") = 2.0,
      py::arg("seed") = 1, "Diagonal variable h at t = 0.");
  m.def("nonlinearity", py::overload_cast<const SpectralField&>(&nonlinearity));
  m.def("xnorm_raw", &xnorm_raw, py::arg("h"), py::arg("t"), py::arg("params") = ParamSet{});

  py::class_<Profile>(m, "Profile")
      .def(py::init([](const SpectralField& f, double t) { return Profile{f, t}; }), py::arg("f"), py::arg("t") = 0.0)
      .def_readonly("f", &Profile::f)
      .def_readonly("t", &Profile::t)
      .def_property_readonly("h", [](const Profile& p) { return to_state(p).h; });
  m.def("profile_from_h",
        [](const SpectralField& h, double t) { return to_profile(DiagonalState{h, t}); }, py::arg("h"),
        py::arg("t") = 0.0);
  m.def("step", &step, py::arg("p"), py::arg("dt"), py::arg("nonlinear") = true);
  m.def(
      "run",
      [](const SpectralField& h0, double T_end, double dt, int stride, bool nonlinear) {
        RunOptions o;
        o.nonlinear = nonlinear;
        return run(DiagonalState{h0, 0.0}, T_end, dt, stride, o).profiles;
      },
      py::arg("h0"), py::arg("T_end"), py::arg("dt"), py::arg("record_stride") = 1, py::arg("nonlinear") = true,
      py::call_guard<py::gil_scoped_release>(), "Stored profiles of a run starting at t = 0.");

  m.def("phase", [](const std::vector<int>& signs, std::array<double, 2> xi, std::array<double, 2> eta) {
    if (signs.size() != 2) throw InvalidArgument("quadratic phase needs two signs");
    return PhaseSpec{SignCombo::quadratic(signs[0], signs[1])}.value({xi[0], xi[1]}, {eta[0], eta[1]});
  });
  m.def(
      "phase_lower_bound",
      [](std::size_t samples, double radius, std::uint64_t seed) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& b : phase_lower_bound_scan(samples, radius, seed)) out.emplace_back(b.combo.name(), b.min_product);
        return out;
      },
      py::arg("samples") = 10000, py::arg("radius") = 20.0, py::arg("seed") = 7);
  m.def("deform_residual", [](std::array<double, 2> x, std::array<double, 2> y) {
    const DeformResult r = deform_Q({x[0], x[1]}, {y[0], y[1]});
    return std::make_pair(r.norm, r.residual);
  });
  m.def("kernel_l1_norm", [](double M, double t) { return kernel_l1_norm(M, t).l1; });

  py::class_<DecayFit>(m, "DecayFit")
      .def_readonly("exponent", &DecayFit::exponent)
      .def_readonly("intercept", &DecayFit::intercept)
      .def_readonly("r2", &DecayFit::r2)
      .def_readonly("points", &DecayFit::points);
  m.def("decay_fit", py::overload_cast<const std::vector<double>&, const std::vector<double>&, double, double>(&decay_fit),
        py::arg("t"), py::arg("v"), py::arg("t0"), py::arg("t1"));

  m.def("boundary_term_g", [](const Profile& p) { return boundary_term_g(p); });
  m.def("transformed_data", &transformed_data);
  m.def(
      "normal_form_check",
      [](int n, double L, double amplitude, double t, double dt) {
        NormalFormOptions o;
        o.n = n;
        o.L = L;
        o.amplitude = amplitude;
        o.t = t;
        o.snapshot_dt = dt;
        o.t_long = 0;
        return normal_form_json(normal_form_check(o));
      },
      py::arg("n") = 8, py::arg("L") = 8.0, py::arg("amplitude") = 0.01, py::arg("t") = 0.5, py::arg("dt") = 0.025,
      py::call_guard<py::gil_scoped_release>(), "JSON report of the decomposition residual check.");

  m.def("parse_config", [](const std::string& text) { return to_config_text(parse_config(text)); },
        "Validates a run config and returns its normalized text.");
}
