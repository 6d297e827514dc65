#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "caplab/polar_dual.hpp"

using namespace caplab;

namespace {

RotationalAnnulus make_fb(double r0, int n_t = 256, int n_s = 64) {
  const auto prof = integrate_profile(r0, 8.0);
  return build_annulus(prof, find_free_boundary(prof), n_t, n_s);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

TEST_CASE("dual contact parameters round trip") {
  // Free-boundary caps (gamma = pi/2) always dualize to the hemisphere.
  for (double R : {0.22, 0.98, M_PI / 2, 1.4, 1.95, 2.6}) {
    const CapParams p(R, M_PI / 2, +1);
    const CapParams d = dual_params(p);
    CHECK(std::abs(d.R - M_PI / 2) < 1e-12);
    CHECK(std::abs(d.gamma - std::min(R, M_PI - R)) < 1e-12);
  }
  // general capillary data: applying the map twice returns the same boundary
  // sphere (the cap radius comes back as R or its complement pi - R)
  for (double R : {0.4, 1.1, 2.0}) {
    for (double g : {0.3, 1.0, 1.5}) {
      const CapParams p(R, g, +1);
      const CapParams dd = dual_params(dual_params(p));
      CHECK(std::min(std::abs(dd.R - p.R), std::abs(dd.R - (M_PI - p.R))) < 1e-12);
      CHECK(std::abs(dd.gamma - p.gamma) < 1e-12);
    }
  }
  // the equatorial free-boundary pair is self-dual
  const CapParams eq = dual_params(CapParams(M_PI / 2, M_PI / 2, +1));
  CHECK(std::abs(eq.R - M_PI / 2) < 1e-14);
  CHECK(std::abs(eq.gamma - M_PI / 2) < 1e-14);
}

TEST_CASE("Clifford annulus is self-dual up to the isometry swapping planes") {
  const auto surf = make_fb(kInvSqrt2);
  const auto dual = dual_surface(surf);
  // x~ = eps nu; for the Clifford torus nu = (swap of the two rotation planes)
  // so |<x~, e0>| must trace the same profile: |x~| = 1 and x~0 = w cos t-ish.
  for (int i = 0; i < surf.n_t; ++i) {
    const int q = surf.idx(i, 0);
    CHECK(std::abs(dual.points[q].norm() - 1.0) < 1e-12);
  }
  // self-duality of the contact data
  CHECK(std::abs(dual.dual_params.R - M_PI / 2) < 1e-10);
  CHECK(std::abs(dual.dual_params.gamma - M_PI / 2) < 1e-10);
  // Psi = |A|^2/2 = 1 identically
  for (int i = 0; i < surf.n_t; ++i) CHECK(std::abs(dual.Psi[i] - 1.0) < 1e-10);
}

TEST_CASE("duality residuals across the family") {
  for (double r0 : {0.9, 0.55, 0.35, 0.2}) {
    const auto surf = make_fb(r0);
    const auto dual = dual_surface(surf);
    CHECK(dual.metric_residual < 1e-6);
    CHECK(dual.ortho_residual < 1e-4);
    CHECK(dual.boundary_residual < 1e-8);
    CHECK(dual.atilde_residual < 1e-4);
    CHECK(dual.psi_product_residual < 1e-6);
    CHECK(std::abs(dual.dual_params.R - M_PI / 2) < 1e-8);
  }
}

TEST_CASE("double dual returns the original surface") {
  for (double r0 : {kInvSqrt2, 0.9, 0.35}) {
    const auto surf = make_fb(r0);
    const auto dual = dual_surface(surf);
    CHECK(double_dual_check(surf, dual) < 1e-8);
  }
}

TEST_CASE("umbilic degeneracy is rejected") {
  // the dual construction divides by Psi = |A|^2/2, so a surface with a
  // totally geodesic point must be refused rather than produce NaNs
  auto surf = make_fb(0.9, 64, 16);
  surf.Att.setZero();
  surf.Ass.setZero();
  CHECK_THROWS_AS(dual_surface(surf), UmbilicError);
  // genuine family members never degenerate: Psi stays positive
  const auto dual = dual_surface(make_fb(0.9, 64, 16));
  CHECK(dual.Psi.minCoeff() > 0);
}

TEST_CASE("projected Gauss map is an immersion") {
  // defined only for sub-equatorial members (R < pi/2)
  for (double r0 : {0.9, 0.9948616}) {
    const auto surf = make_fb(r0, 128, 32);
    const auto rep = projected_gauss_map(surf);
    CHECK(rep.n.size() == static_cast<size_t>(surf.n_t * surf.n_s));
    CHECK(rep.min_abs_det > 0);
    // a sign flip would force a near-zero determinant on this fine lattice
    CHECK(rep.min_abs_det > 0.1);
    CHECK(rep.min_signed_det < 0);
  }
  CHECK_THROWS_AS(projected_gauss_map(make_fb(0.55, 64, 16)), DomainError);
}

TEST_CASE("duals of super-equatorial members are not radial graphs over the cap") {
  // R > pi/2 members dualize into the hemisphere with gamma~ = pi - R < pi/2;
  // the dual surface has boundary x~0 = cos(pi/2) = 0 on the equator.
  const auto surf = make_fb(0.44732078); // R = 1.95
  const auto dual = dual_surface(surf);
  double max_x0 = -1e300, min_x0 = 1e300;
  for (const auto& p : dual.points) {
    max_x0 = std::max(max_x0, p[0]);
    min_x0 = std::min(min_x0, p[0]);
  }
  // dual crosses the equatorial level: not contained in the open upper cap
  CHECK(min_x0 < 1e-8);
  CHECK(max_x0 > 0.1);
}
