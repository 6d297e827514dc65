#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "caplab/rotational_solver.hpp"

using namespace caplab;

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

TEST_CASE("Clifford initial radius gives the constant profile") {
  const auto prof = integrate_profile(kInvSqrt2, 4.0);
  for (size_t i = 0; i < prof.t_grid.size(); ++i) {
    CHECK(std::abs(prof.r[i] - kInvSqrt2) < 1e-12);
    CHECK(std::abs(prof.rp[i]) < 1e-12);
  }
}

TEST_CASE("integrator converges under tolerance tightening") {
  // Step-halving style oracle: a loose-tolerance run must agree with a
  // tight-tolerance run to well within the loose tolerance.
  const double r0 = 0.9;
  const auto coarse = integrate_profile(r0, 3.0, 1e-7);
  const auto fine = integrate_profile(r0, 3.0, 1e-12);
  double rc, rpc, rf, rpf;
  for (double t : {0.5, 1.1, 2.0, 2.9}) {
    coarse.eval(t, rc, rpc);
    fine.eval(t, rf, rpf);
    CHECK(std::abs(rc - rf) < 10 * 1e-7);
    CHECK(std::abs(rpc - rpf) < 10 * 1e-7);
  }
}

TEST_CASE("profile band guards reject degenerate starts") {
  CHECK_THROWS_AS(integrate_profile(0.9999, 4.0), DomainError);
  CHECK_THROWS_AS(integrate_profile(0.001, 4.0), DomainError);
}

TEST_CASE("embedding lands on the unit sphere") {
  const auto prof = integrate_profile(0.55, 3.0);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> us(0, 2 * M_PI), ut(-prof.t_end(), prof.t_end());
  for (int k = 0; k < 1000; ++k) {
    const SpherePoint p = embed(prof, us(rng), ut(rng));
    CHECK(std::abs(p.x.norm() - 1.0) < 1e-12);
  }
  // Clifford value at the origin of coordinates: (r, 0, w, 0).
  const auto cliff = integrate_profile(kInvSqrt2, 2.0);
  const SpherePoint p0 = embed(cliff, 0.0, 0.0);
  CHECK(std::abs(p0[0] - kInvSqrt2) < 1e-12);
  CHECK(std::abs(p0[1]) < 1e-14);
  CHECK(std::abs(p0[2] - kInvSqrt2) < 1e-12);
  CHECK(std::abs(p0[3]) < 1e-14);
}

TEST_CASE("embedding t-derivative matches finite differences") {
  const auto prof = integrate_profile(0.8, 3.0);
  const double h = 1e-6;
  for (double t : {0.2, 0.9, 1.7}) {
    for (double s : {0.3, 2.1}) {
      const Vec4 fd = (embed(prof, s, t + h).x - embed(prof, s, t - h).x) / (2 * h);
      // closed form: x_t = (r' cos t - r sin t, r' sin t + r cos t, w' cos s, w' sin s)
      double r, rp;
      prof.eval(t, r, rp);
      const double w = std::sqrt(1 - r * r), wp = -r * rp / w;
      const Vec4 xt(rp * std::cos(t) - r * std::sin(t), rp * std::sin(t) + r * std::cos(t),
                    wp * std::cos(s), wp * std::sin(s));
      CHECK((fd - xt).norm() < 1e-7);
    }
  }
}

TEST_CASE("nu0 closed form and its t-derivative") {
  const auto prof = integrate_profile(0.65, 3.0);
  const double h = 1e-6;
  for (double t : {0.1, 0.8, 1.9}) {
    double r, rp;
    prof.eval(t, r, rp);
    const double D = std::sqrt(rp * rp + r * r * (1 - r * r));
    const double expect = (r * (1 - r * r) * std::cos(t) + rp * std::sin(t)) / D;
    CHECK(std::abs(nu0(prof, t) - expect) < 1e-12);
    CHECK(std::abs(nu0_from_state(t, r, rp) - expect) < 1e-14);
    // derivative oracle against central differences of nu0 itself
    const double fd = (nu0(prof, t + h) - nu0(prof, t - h)) / (2 * h);
    CHECK(std::abs(nu0_t_from_state(t, r, rp) - fd) < 1e-6);
  }
}

TEST_CASE("profile forms satisfy the closed-form metric and minimality") {
  const auto prof = integrate_profile(0.45, 3.0);
  for (double t : {0.0, 0.6, 1.4, 2.2}) {
    double r, rp;
    prof.eval(t, r, rp);
    const auto F = profile_forms(t, r, rp);
    CHECK(std::abs(F.gtt - (r * r + rp * rp / (1 - r * r))) < 1e-12);
    CHECK(std::abs(F.gss - (1 - r * r)) < 1e-12);
    // minimality: trace of the shape operator vanishes
    CHECK(std::abs(F.Att / F.gtt + F.Ass / F.gss) < 1e-8);
    // A_ss closed form
    CHECK(std::abs(F.Ass - (-r * r * (1 - r * r) / F.D)) < 1e-10);
  }
}

TEST_CASE("free boundary contact against the pinned family values") {
  struct Fix {
    double r0, R;
  };
  for (const Fix f : {Fix{0.9948616, 0.22}, Fix{0.89494692, 0.98},
                      Fix{kInvSqrt2, M_PI / 2}, Fix{0.44732078, 1.95},
                      Fix{0.10178492, 1.84}}) {
    const auto prof = integrate_profile(f.r0, 8.0);
    const auto c = find_free_boundary(prof);
    CHECK(std::abs(c.params.R - f.R) < 5e-6);
    CHECK(std::abs(c.params.gamma - M_PI / 2) < 1e-10);
    CHECK(std::abs(c.x0_boundary - std::cos(c.params.R)) < 1e-10);
    // root residual: nu0 vanishes at the contact parameter
    CHECK(std::abs(nu0(prof, c.t_plus)) < 1e-10);
  }
}

TEST_CASE("Clifford capillary boundary at t_b = pi/4") {
  const auto prof = integrate_profile(kInvSqrt2, 2.0);
  const auto c = find_capillary_boundary(prof, M_PI / 4);
  // boundary circle of the Clifford torus truncated at t = pi/4 sits at
  // x0 = cos(pi/4)/sqrt(2) = 1/2, i.e. R = pi/3
  CHECK(std::abs(c.t_plus - M_PI / 4) < 1e-14);
  CHECK(std::abs(c.params.R - M_PI / 3) < 1e-12);
  CHECK(std::abs(std::cos(c.params.gamma) -
                 std::abs(nu0(prof, M_PI / 4)) / std::sin(c.params.R)) < 1e-10);
}

TEST_CASE("family sweep: Clifford row, maximum radius, determinism") {
  std::vector<double> grid;
  for (int i = 0; i <= 120; ++i) grid.push_back(0.08 + (0.99 - 0.08) * i / 120.0);
  grid.push_back(kInvSqrt2);
  const auto serial = sweep_family(grid, /*parallel=*/false);
  const auto par = sweep_family(grid, /*parallel=*/true);
  REQUIRE(serial.rows.size() == grid.size());
  // bitwise-identical results independent of scheduling
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(serial.rows[i].status == par.rows[i].status);
    if (serial.rows[i].status == "ok") {
      CHECK(serial.rows[i].R == par.rows[i].R);
      CHECK(serial.rows[i].t_plus == par.rows[i].t_plus);
    }
  }
  // the Clifford member has R = pi/2 exactly
  const auto& last = serial.rows.back();
  CHECK(last.status == "ok");
  CHECK(std::abs(last.R - M_PI / 2) < 1e-8);
  // maximum contact radius of the family exceeds pi/2
  CHECK(serial.Rbar > M_PI / 2);
  CHECK(std::abs(serial.Rbar - 1.9968450615020379) < 1e-6);
  CHECK(std::abs(serial.r0_at_Rbar - 0.31958961647644168) < 1e-3);
  CHECK(par.Rbar == serial.Rbar);
}

TEST_CASE("critical catenoid truncation parameter") {
  const double t0 = catenoid_t0();
  CHECK(std::abs(t0 * std::tanh(t0) - 1.0) < 1e-12);
  CHECK(t0 == doctest::Approx(1.1996786402577338).epsilon(1e-10));
}
