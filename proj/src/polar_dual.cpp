#include "caplab/polar_dual.hpp"

#include <cmath>

namespace caplab {

namespace {

double det3(const Vec4& a, const Vec4& b, const Vec4& c, int i, int j, int k) {
  return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
         a[k] * (b[i] * c[j] - b[j] * c[i]);
}

Vec4 cross4(const Vec4& p, const Vec4& u, const Vec4& v) {
  return Vec4(det3(p, u, v, 1, 2, 3), -det3(p, u, v, 0, 2, 3), det3(p, u, v, 0, 1, 3),
              -det3(p, u, v, 0, 1, 2));
}

} // namespace

CapParams dual_params(const CapParams& p) {
  const double cosRt = -p.epsilon * std::sin(p.R) * std::cos(p.gamma);
  const double Rt = std::acos(clamp1(cosRt));
  const double sinRt = std::sin(Rt);
  if (sinRt < 1e-12) throw DegenerateDual("dual_params: sin R~ < 1e-12");
  const double sg = std::sin(p.R) * std::sin(p.gamma) / sinRt;
  const double gt = std::asin(clamp1(sg));
  CapParams out(Rt, gt, p.epsilon);
  if (std::abs(std::sin(out.gamma) * sinRt - std::sin(p.R) * std::sin(p.gamma)) > 1e-14)
    throw DegenerateDual("dual_params: sin gamma~ sin R~ != sin R sin gamma");
  return out;
}

DualSurface dual_surface(const RotationalAnnulus& surf) {
  if (surf.ambient != Ambient::Sphere) throw DomainError("dual_surface: spherical ambient only");
  DualSurface D;
  D.n_t = surf.n_t;
  D.n_s = surf.n_s;
  D.t_nodes = surf.t_nodes;
  D.s_nodes = surf.s_nodes;
  D.eps = surf.contact.params.epsilon;
  D.dual_params = dual_params(surf.contact.params);
  const int N = surf.n_t * surf.n_s;
  D.points.resize(N);
  D.normals.resize(N);
  D.xt.resize(N);
  D.xs.resize(N);
  D.Psi.resize(surf.n_t);
  const double eps = D.eps;
  for (int i = 0; i < surf.n_t; ++i) {
    const double kt = surf.Att[i] / surf.gtt[i]; // principal curvatures
    const double ks = surf.Ass[i] / surf.gss[i];
    const double A2 = kt * kt + ks * ks;
    if (A2 < 1e-16) throw UmbilicError("dual_surface: |A| < 1e-8 somewhere");
    D.Psi[i] = 0.5 * A2;
    for (int j = 0; j < surf.n_s; ++j) {
      const int q = surf.idx(i, j);
      D.points[q] = eps * surf.normals[q];
      // shape-operator pushforward: d(nu) = S(dx) diagonalizes here
      const Vec4 xt = eps * kt * surf_xt(surf, i, j);
      const Vec4 xs = eps * ks * surf_xs(surf, i, j);
      D.xt[q] = xt;
      D.xs[q] = xs;
      // dual normal nu~ = eps x, re-orthonormalized against the dual frame
      Vec4 n = eps * surf.points[q];
      n -= n.dot(D.points[q]) * D.points[q];
      n -= n.dot(xt) / xt.squaredNorm() * xt;
      n -= n.dot(xs) / xs.squaredNorm() * xs;
      const double drop = std::abs(1.0 - n.norm());
      D.ortho_residual = std::max(D.ortho_residual, drop);
      D.normals[q] = n.normalized();
      // conformality: <dx~_i, dx~_j> = Psi g_ij, off-diagonal zero
      D.metric_residual = std::max(
          {D.metric_residual, std::abs(xt.squaredNorm() - D.Psi[i] * surf.gtt[i]),
           std::abs(xs.squaredNorm() - D.Psi[i] * surf.gss[i]), std::abs(xt.dot(xs))});
      // A~ = A with nu~ = eps x
      D.atilde_residual = std::max(
          {D.atilde_residual, std::abs(eps * surf_xt(surf, i, j).dot(xt) - surf.Att[i]),
           std::abs(eps * surf_xs(surf, i, j).dot(xs) - surf.Ass[i])});
    }
    // Psi~ computed from the dual data: |A~|^2_{g~}/2 with g~ = Psi g, A~ = A
    const double psi_t = 0.5 * (kt * kt + ks * ks) / (D.Psi[i] * D.Psi[i]);
    D.psi_product_residual = std::max(D.psi_product_residual, std::abs(psi_t * D.Psi[i] - 1.0));
  }
  const double cosRt = std::cos(D.dual_params.R);
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : surf.n_t - 1;
    for (int j = 0; j < surf.n_s; ++j)
      D.boundary_residual =
          std::max(D.boundary_residual, std::abs(D.points[D.idx(i, j)][0] - cosRt));
  }
  return D;
}

double double_dual_check(const RotationalAnnulus& surf, const DualSurface& dual) {
  // normal of the dual from its own frame (not the nu~ = eps x shortcut),
  // then x~~ = eps~ nu~ with eps~ = eps; compare against +-x
  double dplus = 0, dminus = 0;
  for (int i = 0; i < dual.n_t; ++i)
    for (int j = 0; j < dual.n_s; ++j) {
      const int q = dual.idx(i, j);
      Vec4 n = cross4(dual.points[q], dual.xt[q], dual.xs[q]);
      n -= n.dot(dual.points[q]) * dual.points[q];
      n.normalize();
      if (n.dot(dual.normals[q]) < 0) n = -n;
      const Vec4 xdd = static_cast<double>(dual.eps) * n;
      dplus = std::max(dplus, (xdd - surf.points[surf.idx(i, j)]).norm());
      dminus = std::max(dminus, (xdd + surf.points[surf.idx(i, j)]).norm());
    }
  return std::min(dplus, dminus);
}

GaussMapReport projected_gauss_map(const RotationalAnnulus& surf) {
  if (surf.ambient != Ambient::Sphere)
    throw DomainError("projected_gauss_map: spherical ambient only");
  if (surf.contact.params.R >= M_PI / 2)
    throw DomainError("projected_gauss_map: requires R < pi/2");
  GaussMapReport rep;
  const int nt = surf.n_t, ns = surf.n_s;
  rep.n.resize(nt * ns);
  for (int q = 0; q < nt * ns; ++q) {
    const Vec4& nu = surf.normals[q];
    const double n0sq = nu[0] * nu[0];
    if (n0sq >= 1.0 - 1e-10)
      throw ProjectionDegenerate("projected_gauss_map: nu0^2 >= 1 - 1e-10");
    rep.n[q] = Vec3(nu[1], nu[2], nu[3]) / std::sqrt(1.0 - n0sq);
  }
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : nt - 1;
    for (int j = 0; j < ns; ++j) {
      const int q = surf.idx(i, j);
      const Vec4& nu = surf.normals[q];
      rep.boundary_match = std::max(
          rep.boundary_match, (rep.n[q] - Vec3(nu[1], nu[2], nu[3])).norm() + std::abs(nu[0]));
    }
  }
  const double ht = surf.dt(), hs = surf.ds();
  double minabs = 1e300, minsigned = 1e300;
  for (int i = 1; i < nt - 1; ++i)
    for (int j = 0; j < ns; ++j) {
      const int q = surf.idx(i, j);
      const Vec3 dnt = (rep.n[surf.idx(i + 1, j)] - rep.n[surf.idx(i - 1, j)]) / (2 * ht);
      const Vec3 dns =
          (rep.n[surf.idx(i, (j + 1) % ns)] - rep.n[surf.idx(i, (j + ns - 1) % ns)]) / (2 * hs);
      const double det =
          dnt.cross(dns).dot(rep.n[q]) / std::sqrt(surf.gtt[i] * surf.gss[i]);
      minabs = std::min(minabs, std::abs(det));
      minsigned = std::min(minsigned, det);
    }
  rep.min_abs_det = minabs;
  rep.min_signed_det = minsigned;
  return rep;
}

} // namespace caplab
