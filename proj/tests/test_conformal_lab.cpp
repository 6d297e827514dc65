#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "caplab/conformal_lab.hpp"

using namespace caplab;

namespace {

RotationalAnnulus make_fb(double r0, int n_t = 256, int n_s = 64) {
  const auto prof = integrate_profile(r0, 8.0);
  return build_annulus(prof, find_free_boundary(prof), n_t, n_s);
}

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

} // namespace

TEST_CASE("radial curvature condition on the space form profile") {
  const auto prof = space_form_profile(400);
  const auto rep = condition_A_eval(prof);
  CHECK(rep.verdict == AVerdict::IdenticallyZero);
  CHECK(rep.values.cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("radial curvature condition on the Gaussian profile") {
  // phi = -r^2/8: (phi'/r)' = 0, so the expression reduces to
  // -r (phi'/r)^2 = -r/16 < 0 for r > 0
  const auto prof = gaussian_profile(400, 1.0);
  const auto rep = condition_A_eval(prof);
  CHECK(rep.verdict == AVerdict::StrictlyNegative);
  for (int i = 0; i < prof.r.size(); ++i) {
    const double r = prof.r[i];
    CHECK(rep.values[i] == doctest::Approx(-r / 16.0).epsilon(1e-10));
  }
}

TEST_CASE("mixed-sign profile is classified as mixed") {
  auto phi = [](double r) { return 0.3 * std::sin(4 * r); };
  auto phip = [](double r) { return 1.2 * std::cos(4 * r); };
  auto phipp = [](double r) { return -4.8 * std::sin(4 * r); };
  const auto prof = custom_profile(phi, phip, phipp, 400, 1.0, "wiggle");
  CHECK(condition_A_eval(prof).verdict == AVerdict::Mixed);
}

TEST_CASE("Ricci radial gap agrees in sign with the curvature condition") {
  for (int which = 0; which < 2; ++which) {
    const auto prof = which == 0 ? space_form_profile(300) : gaussian_profile(300, 1.0);
    const auto A = condition_A_eval(prof);
    const auto ric = ricci_radial_gap(prof);
    CHECK(ric.sign_agreement);
    // gap and condition value carry opposite signs (anti-correlated)
    for (int i = 0; i < prof.r.size(); ++i)
      CHECK(A.values[i] * ric.gap[i] <= 1e-12);
  }
}

TEST_CASE("coordinate identity in the stereographic ball model") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1, 1);
  for (double r0 : {kInvSqrt2, 0.9, 0.9948616}) {
    // refine both lattice directions: the field depends on s as well
    const auto coarse = make_fb(r0, 256, 32);
    const auto fine = make_fb(r0, 512, 64);
    for (int k = 0; k < 2; ++k) {
      Vec3 a(u(rng), u(rng), u(rng));
      a.normalize();
      const auto [ic, bc] = ua_identity_check(coarse, a);
      const auto [iff, bf] = ua_identity_check(fine, a);
      CHECK(iff < 1e-2);
      CHECK(bf < 1e-2);
      CHECK(iff < ic / 3.0 + 1e-9);
    }
  }
}

TEST_CASE("foliation derivative is negative and matches the FD oracle in sign") {
  const auto prof = gaussian_profile(400, 1.0);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> us(0.05, 0.7), ur(0.1, 0.9);
  for (int k = 0; k < 1000; ++k) {
    const double s = us(rng), r = ur(rng);
    const double d = foliation_derivative(1.0, prof, s, r);
    CHECK(d < 0);
  }
  // quantitative cross-check against the mean-curvature oracle at a few points
  for (double s : {0.1, 0.35, 0.6}) {
    for (double r : {0.3, 0.6}) {
      const double d = foliation_derivative(1.0, prof, s, r);
      const double h = foliation_leaf_mean_curvature(1.0, prof, s, r);
      // the leaf above the equator bends with the sign dictated by the
      // derivative of the graph; both computations must agree in sign
      CHECK(d * h >= 0.0);
    }
  }
}

TEST_CASE("weighted Killing orthogonality on perturbed graphs") {
  const auto surf = make_fb(kInvSqrt2, 128, 32);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  const double T = surf.contact.t_plus;
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd field(surf.n_t * surf.n_s);
    const double a1 = 0.01 * u(rng), a2 = 0.01 * u(rng);
    for (int i = 0; i < surf.n_t; ++i)
      for (int j = 0; j < surf.n_s; ++j)
        field[surf.idx(i, j)] =
            a1 * std::cos(M_PI * (surf.t_nodes[i] + T) / T) +
            a2 * std::cos(2 * M_PI * (surf.t_nodes[i] + T) / T) * std::cos(surf.s_nodes[j]);
    const auto graph = normal_graph(surf, field);
    for (int gen = 1; gen <= 3; ++gen) {
      CHECK(killing_orthogonality(graph.surface, gen, M_PI / 2) < 1e-4);
    }
  }
}

TEST_CASE("conformal mean curvature formula matches the area derivative") {
  const auto prof = gaussian_profile(500, 1.0);
  for (double r : {0.25, 0.5, 0.8}) {
    const auto rep = conformal_hypersurface_check(r, prof);
    CHECK(rep.residual < 1e-6);
    CHECK(std::abs(rep.formula - rep.fd) < 1e-6);
  }
  const auto sf = space_form_profile(500);
  const auto rep = conformal_hypersurface_check(0.5, sf);
  CHECK(rep.residual < 1e-6);
}
