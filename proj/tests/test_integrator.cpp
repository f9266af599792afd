#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "epkg/errors.hpp"
#include "epkg/integrator.hpp"
#include "epkg/multiplier.hpp"
#include "epkg/norms.hpp"
#include "test_util.hpp"

using namespace epkg;
using epkg::testing::max_diff;

namespace {

constexpr double pi = std::numbers::pi;

InitialData small_data(double amp = 0.01, int n = 16, double L = 4 * pi) {
  InitialDataSpec spec;
  spec.amplitude = amp;
  spec.density_sigma = spec.potential_sigma = 1.0;
  return make_initial_data(GridSpec::square(n, L), spec);
}

Profile advance(const Profile& p, double T, double dt) {
  Profile q = p;
  const long n = std::lround(T / dt);
  for (long k = 0; k < n; ++k) q = step(q, dt);
  return q;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("epkg_test_" + name)).string();
}

}  // namespace

TEST_CASE("single steps") {
  const InitialData d = small_data();
  const Profile p = to_profile(d.state);
  SUBCASE("linear flow is exact") {
    const Profile q = step(p, 0.3, false);
    CHECK(max_diff(q.f, p.f) == 0.0);
    CHECK(q.t == doctest::Approx(0.3));
  }
  SUBCASE("zero profile stays zero") {
    const Profile z{SpectralField(p.f.grid(), false), 0.0};
    CHECK(step(z, 0.1).f.max_abs() == 0.0);
  }
  SUBCASE("profile and state conversions are inverse") {
    const Profile moved{apply_multiplier(MultiplierSpec::kg_semigroup(-2.0), d.state.h), 2.0};
    CHECK(max_diff(to_state(moved).h, d.state.h) < 1e-15);
    CHECK(max_diff(to_profile(to_state(moved)).f, moved.f) < 1e-15);
  }
  SUBCASE("fourth-order convergence") {
    const Profile ref = advance(p, 1.0, 0.05 / 16);
    const double e1 = l2_norm_spectral(advance(p, 1.0, 0.1).f - ref.f);
    const double e2 = l2_norm_spectral(advance(p, 1.0, 0.05).f - ref.f);
    MESSAGE("RK4 errors " << e1 << " " << e2 << " ratio " << e1 / e2);
    CHECK(e1 / e2 >= 12.0);
    CHECK(e1 / e2 <= 20.0);
  }
  SUBCASE("time reversal") {
    const double dt = 0.05;
    const Profile there = advance(p, 0.5, dt);
    Profile back = there;
    for (int k = 0; k < 10; ++k) back = step(back, -dt);
    const double err = l2_norm_spectral(back.f - p.f) / l2_norm_spectral(p.f);
    MESSAGE("reversal error " << err);
    CHECK(err < 1e-9);
    CHECK(std::abs(back.t) < 1e-14);
  }
  SUBCASE("zero mode and blow-up detection") {
    CHECK(advance(p, 0.5, 0.05).f[0] == cd(0.0));
    Profile bad = p;
    bad.f.at(1, 1) = cd(std::numeric_limits<double>::quiet_NaN(), 0);
    CHECK_THROWS_AS(step(bad, 0.1), BlowUpError);
    CHECK_THROWS_AS(step(p, 0.0), InvalidArgument);
  }
}

TEST_CASE("runs") {
  SUBCASE("zero data") {
    const Trajectory tr = run(small_data(0.0).state, 1.0, 0.1, 2);
    CHECK(tr.times.size() == 6);
    for (const auto& p : tr.profiles) CHECK(p.f.max_abs() == 0.0);
  }
  SUBCASE("recording and clock") {
    const Trajectory tr = run(small_data().state, 1.0, 0.05, 4);
    REQUIRE(tr.times.size() == 6);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      CHECK(tr.times[k] == doctest::Approx(0.2 * k).epsilon(1e-14));
      CHECK(tr.profiles[k].t == tr.times[k]);
      CHECK(tr.profiles[k].f[0] == cd(0.0));
    }
    CHECK(tr.snapshot_dt() == doctest::Approx(0.2));
  }
  SUBCASE("norm continuity is quadratic in the amplitude") {
    double c_prev = 0;
    for (double amp : {0.02, 0.01}) {
      const InitialData d = small_data(amp);
      const double dt = 0.05;
      const Trajectory tr = run(d.state, 1.0, dt, 1);
      double worst = 0;
      for (std::size_t k = 1; k < tr.profiles.size(); ++k)
        worst = std::max(worst, std::abs(l2_norm_spectral(tr.profiles[k].f) - l2_norm_spectral(tr.profiles[k - 1].f)));
      // d‖f‖/dt = Re⟨f, ∂_t f⟩/‖f‖ with ∂_t f quadratic
      const double C = worst / (amp * amp * dt);
      MESSAGE("norm continuity constant at eps = " << amp << ": " << C);
      if (c_prev > 0) CHECK(C == doctest::Approx(c_prev).epsilon(0.3));
      c_prev = C;
    }
  }
  SUBCASE("preconditions") {
    const DiagonalState s = small_data().state;
    CHECK_THROWS_AS(run(s, 6.0, 0.05, 1), PreconditionError);  // 0.45 L ≈ 5.65
    CHECK_THROWS_AS(run(s, 1.0, 0.3, 1), InvalidArgument);
    CHECK_THROWS_AS(run(s, 1.0, 0.1, 0), InvalidArgument);
  }
}

TEST_CASE("trajectory files") {
  const Trajectory tr = run(small_data(0.01, 8, 8.0).state, 0.5, 0.05, 2);
  const std::string path = temp_path("traj.bin");
  write_trajectory(path, tr);
  const Trajectory back = read_trajectory(path);
  CHECK(back.dt == tr.dt);
  CHECK(back.record_stride == tr.record_stride);
  CHECK(back.nonlinear == tr.nonlinear);
  REQUIRE(back.profiles.size() == tr.profiles.size());
  for (std::size_t k = 0; k < tr.profiles.size(); ++k) {
    CHECK(back.times[k] == tr.times[k]);
    CHECK(back.profiles[k].f.grid() == tr.profiles[k].f.grid());
    CHECK(max_diff(back.profiles[k].f, tr.profiles[k].f) == 0.0);
  }
  SUBCASE("header layout") {
    std::ifstream is(path, std::ios::binary);
    char magic[8];
    is.read(magic, 8);
    CHECK(std::string(magic, 8) == "EPKGTRAJ");
    CHECK(std::filesystem::file_size(path) ==
          32 + tr.profiles.size() * (8 + 16 + 16 * tr.profiles[0].f.size()));
  }
  SUBCASE("streaming writer matches") {
    const std::string p2 = temp_path("traj_stream.bin");
    {
      TrajectoryWriter w(p2, tr.dt, tr.record_stride, tr.nonlinear);
      for (const auto& p : tr.profiles) w.append(p);
    }
    const Trajectory s = read_trajectory(p2);
    CHECK(s.profiles.size() == tr.profiles.size());
    CHECK(max_diff(s.profiles.back().f, tr.profiles.back().f) == 0.0);
    std::filesystem::remove(p2);
  }
  SUBCASE("truncated and foreign files") {
    const std::string p3 = temp_path("traj_cut.bin");
    std::filesystem::copy_file(path, p3, std::filesystem::copy_options::overwrite_existing);
    std::filesystem::resize_file(p3, std::filesystem::file_size(p3) - 5);
    CHECK_THROWS_AS(read_trajectory(p3), Error);
    std::ofstream(p3, std::ios::binary) << "not a trajectory";
    CHECK_THROWS_AS(read_trajectory(p3), Error);
    std::filesystem::remove(p3);
  }
  std::filesystem::remove(path);
}

TEST_CASE("trajectory diagnostics") {
  const ParamSet params;
  const InitialData d = small_data();
  RunOptions lin;
  lin.nonlinear = false;
  const Trajectory free = run(d.state, 1.0, 0.1, 2, lin);
  const Trajectory full = run(d.state, 1.0, 0.1, 2);
  SUBCASE("time derivative of the profile") {
    for (double v : partial_t_f_decay(free, params).values) CHECK(v == 0.0);
    const ScalarSeries s = partial_t_f_decay(full, params);
    CHECK(s.values.size() == 6);
    for (double v : s.values) CHECK(v > 0.0);
    // ∂_t f is N(h) transported, so its L^q norm is that of N(h)
    CHECK(s.values[0] == doctest::Approx(lebesgue_norm_dealiased(nonlinearity(d.state.h), params.q())));
    CHECK(partial_t_f_decay(run(small_data(0).state, 1.0, 0.1, 2), params).values[3] == 0.0);
    const Trajectory shortrun = run(d.state, 0.2, 0.1, 1);
    CHECK_THROWS_AS(partial_t_f_decay(shortrun, params), InvalidArgument);
  }
  SUBCASE("energy growth") {
    const EnergyReport lin_r = energy_growth_check(free, params);
    CHECK(lin_r.max_ratio <= 1e-8);
    const EnergyReport nl = energy_growth_check(full, params);
    MESSAGE("energy ratio " << nl.max_ratio << ", domination " << nl.max_domination);
    CHECK(std::isfinite(nl.max_ratio));
    CHECK(nl.max_ratio <= 50.0);
    CHECK(nl.max_domination <= 10.0);
  }
  SUBCASE("scattering increments") {
    const ScatteringReport lin_s = scattering_check(free, {0.2, 0.4, 0.8}, params.N_prime);
    for (double v : lin_s.increments) CHECK(v == 0.0);
    const ScatteringReport s = scattering_check(full, {0.2, 0.4, 0.8}, params.N_prime);
    CHECK(s.increments.size() == 2);
    CHECK(s.increments[0] > 0);
    CHECK_THROWS_AS(scattering_check(full, {0.2, 0.3, 0.8}, params.N_prime), InvalidArgument);
  }
}
