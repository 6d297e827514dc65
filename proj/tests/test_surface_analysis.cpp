#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "caplab/surface_analysis.hpp"

using namespace caplab;

namespace {

RotationalAnnulus make_fb(double r0, int n_t = 256, int n_s = 64) {
  const auto prof = integrate_profile(r0, 8.0);
  return build_annulus(prof, find_free_boundary(prof), n_t, n_s);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

TEST_CASE("annulus lattice invariants") {
  for (double r0 : {kInvSqrt2, 0.9, 0.35}) {
    const auto surf = make_fb(r0, 192, 48);
    // closed-form metric is diagonal; check the cross term via FD tangents
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> ui(1, surf.n_t - 2), uj(0, surf.n_s - 1);
    for (int k = 0; k < 200; ++k) {
      const int i = ui(rng), j = uj(rng);
      const Vec4 xt = surf_xt(surf, i, j), xs = surf_xs(surf, i, j);
      CHECK(std::abs(xt.dot(xs)) < 1e-10);
      CHECK(std::abs(surf.normals[surf.idx(i, j)].norm() - 1.0) < 1e-12);
      CHECK(std::abs(surf.normals[surf.idx(i, j)].dot(surf.points[surf.idx(i, j)])) < 1e-12);
      CHECK(std::abs(xt.squaredNorm() - surf.gtt[i]) < 1e-9);
      CHECK(std::abs(xs.squaredNorm() - surf.gss[i]) < 1e-10);
    }
    // minimality of the closed-form shape operator
    for (int i = 0; i < surf.n_t; ++i)
      CHECK(std::abs(surf.Att[i] / surf.gtt[i] + surf.Ass[i] / surf.gss[i]) < 1e-8);
    // assembly-time FD deviation is recorded and small
    CHECK(surf.fd_deviation > 0);
    CHECK(surf.fd_deviation < 1e-2);
  }
}

TEST_CASE("five boundary relations of the free-boundary annulus") {
  for (double r0 : {kInvSqrt2, 0.9, 0.55, 0.35, 0.2}) {
    const auto surf = make_fb(r0);
    const auto rep = boundary_relations_check(surf);
    CHECK(rep.max_residual < 1e-8);
    for (double r : rep.rel) CHECK(r < 1e-8);
  }
}

TEST_CASE("boundary second fundamental form A(eta, eta)") {
  // Clifford: |A|^2 = 2, A(eta,eta) = +-1 depending on the conormal direction;
  // both boundaries must agree by symmetry.
  const auto surf = make_fb(kInvSqrt2);
  const double ap = a_eta_eta(surf, true), am = a_eta_eta(surf, false);
  CHECK(std::abs(std::abs(ap) - 1.0) < 1e-8);
  CHECK(std::abs(ap - am) < 1e-8);
}

TEST_CASE("Hopf quantity is constant along the family") {
  const auto cliff = make_fb(kInvSqrt2);
  const auto hc = hopf_constancy(cliff);
  CHECK(std::abs(hc.max - 1.0) < 1e-10);
  CHECK(std::abs(hc.min - 1.0) < 1e-10);
  for (double r0 : {0.9, 0.55, 0.2}) {
    const auto rep = hopf_constancy(make_fb(r0));
    CHECK(rep.spread < 1e-6);
    CHECK(rep.min > 0);
  }
}

TEST_CASE("radial graph property") {
  // Every free-boundary member is a radial graph: nu0 keeps one sign up to
  // the first contact, which is where the truncation happens.
  CHECK(radial_graph_check(make_fb(0.9948616)).is_graph);
  CHECK(radial_graph_check(make_fb(0.89494692)).is_graph);
  CHECK(radial_graph_check(make_fb(0.10178492)).is_graph);
  // Truncating past the first zero of nu0 breaks the property: the Clifford
  // profile has nu0 = cos(t)/sqrt(2), so t_b = 2 > pi/2 captures a sign change.
  const auto prof = integrate_profile(kInvSqrt2, 3.0);
  const auto cap = build_annulus(prof, find_capillary_boundary(prof, 2.0), 128, 32);
  CHECK_FALSE(radial_graph_check(cap).is_graph);
}

TEST_CASE("constrained membership in the half-space x0 > 0") {
  const auto shallow = make_fb(0.9948616); // R = 0.22
  const auto crep = constrained_check(shallow);
  CHECK(crep.constrained);
  CHECK(crep.min_x0 > 0);
  CHECK(crep.max_rho < M_PI / 2);
  const auto deep = make_fb(0.10178492); // R = 1.84, return branch
  CHECK_FALSE(constrained_check(deep).constrained);
}

TEST_CASE("two-piece structure of linear slices") {
  const auto surf = make_fb(0.55);
  // a orthogonal to e0: the nodal set of <x, a> cuts the annulus into one
  // positive and one negative component for each rotation-plane direction
  for (const Vec4 a : {Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 0, 0, 1)}) {
    const auto [np, nm] = two_piece_slices(surf, a);
    CHECK(np >= 1);
    CHECK(nm >= 1);
    CHECK(np + nm <= 4);
  }
}

TEST_CASE("Green identity for the linear coordinates") {
  for (double r0 : {kInvSqrt2, 0.9, 0.35}) {
    const auto surf = make_fb(r0, 512, 64);
    for (const Vec4 a : {Vec4(0, 1, 0, 0), Vec4(0, 0, 1, 0)}) {
      CHECK(std::abs(green_identity_check(surf, a)) < 1e-4);
    }
  }
}

TEST_CASE("measured lattice reproduces the closed forms with FD convergence") {
  auto deviations = [](const RotationalAnnulus& surf) {
    const auto m = measure_lattice(surf.points, surf.t_nodes, surf.s_nodes, Ambient::Sphere,
                                   &surf.normals);
    double dev_g = 0, dev_A = 0, maxH = 0;
    for (int i = 2; i < m.n_t - 2; ++i)
      for (int j = 0; j < m.n_s; ++j) {
        const int q = m.idx(i, j);
        dev_g = std::max({dev_g, std::abs(m.g11[q] - surf.gtt[i]),
                          std::abs(m.g22[q] - surf.gss[i]), std::abs(m.g12[q])});
        dev_A = std::max({dev_A, std::abs(m.A11[q] - surf.Att[i]),
                          std::abs(m.A22[q] - surf.Ass[i]), std::abs(m.A12[q])});
        maxH = std::max(maxH, std::abs(m.H[q]));
      }
    return std::array<double, 3>{dev_g, dev_A, maxH};
  };
  // refine both directions: the flat s-difference error hs^2/6 dominates
  const auto coarse = deviations(make_fb(0.8, 256, 64));
  const auto fine = deviations(make_fb(0.8, 512, 128));
  for (int q = 0; q < 3; ++q) {
    CHECK(coarse[q] < 1e-2);
    CHECK(fine[q] < coarse[q] / 3.0); // second order in the t-spacing
  }
  CHECK(fine[2] < 1e-3);
}

TEST_CASE("critical catenoid is minimal and free-boundary in the unit ball") {
  const auto cat = critical_catenoid(256, 64);
  CHECK(cat.ambient == Ambient::Euclid);
  // boundary on the unit sphere, meeting it orthogonally
  for (int j = 0; j < cat.n_s; ++j) {
    for (int i : {0, cat.n_t - 1}) {
      const int q = cat.idx(i, j);
      CHECK(std::abs(cat.points[q].norm() - 1.0) < 1e-10);
      // free boundary: normal tangent to the sphere <=> <nu, x> = 0
      CHECK(std::abs(cat.normals[q].dot(cat.points[q])) < 1e-8);
    }
  }
  for (int i = 0; i < cat.n_t; ++i)
    CHECK(std::abs(cat.Att[i] / cat.gtt[i] + cat.Ass[i] / cat.gss[i]) < 1e-10);
}

TEST_CASE("normal graph perturbation stays admissible") {
  // normal_graph requires the base boundary on the equatorial sphere x0 = 0,
  // so only the R = pi/2 member qualifies.
  const auto surf = make_fb(kInvSqrt2, 128, 32);
  // Neumann lattice field: cos(m pi (t+T)/(2T)) profiles with even m
  Eigen::VectorXd u(surf.n_t * surf.n_s);
  const double T = surf.contact.t_plus;
  for (int i = 0; i < surf.n_t; ++i)
    for (int j = 0; j < surf.n_s; ++j)
      u[surf.idx(i, j)] = 0.01 * std::cos(M_PI * (surf.t_nodes[i] + T) / T) *
                          (1.0 + 0.3 * std::cos(surf.s_nodes[j]));
  const auto res = normal_graph(surf, u);
  CHECK(res.boundary_offset < 1e-10);  // boundary stays on the equatorial sphere
  CHECK(res.contact_residual < 0.05);  // contact angle perturbs at O(|u|)
  CHECK(max_mean_curvature(res.surface) > 1e-4); // no longer minimal

  // the zero graph reproduces the base surface
  const auto base = normal_graph(surf, Eigen::VectorXd::Zero(surf.n_t * surf.n_s));
  CHECK(base.contact_residual < 1e-5);
  CHECK(max_mean_curvature(base.surface) < 1e-3);

  // non-Neumann field is rejected
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(surf.n_t * surf.n_s);
  for (int i = 0; i < surf.n_t; ++i)
    for (int j = 0; j < surf.n_s; ++j)
      bad[surf.idx(i, j)] = 0.05 * (surf.t_nodes[i] / T);
  CHECK_THROWS_AS(normal_graph(surf, bad), DomainError);
}
