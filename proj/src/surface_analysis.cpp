#include "caplab/surface_analysis.hpp"

#include <cmath>
#include <deque>

namespace caplab {

namespace {

double det3(const Vec4& a, const Vec4& b, const Vec4& c, int i, int j, int k) {
  return a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i]) +
         a[k] * (b[i] * c[j] - b[j] * c[i]);
}

// Hodge dual of p ^ u ^ v in R^4: the vector orthogonal to all three.
Vec4 cross4(const Vec4& p, const Vec4& u, const Vec4& v) {
  return Vec4(det3(p, u, v, 1, 2, 3), -det3(p, u, v, 0, 2, 3), det3(p, u, v, 0, 1, 3),
              -det3(p, u, v, 0, 1, 2));
}

// d/dt along lattice rows: centered interior, one-sided 2nd order at edges.
Vec4 d_t(const std::vector<Vec4>& f, int n_t, int n_s, int i, int j, double h) {
  auto at = [&](int ii) -> const Vec4& { return f[ii * n_s + j]; };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * h);
  if (i == n_t - 1) return (3.0 * at(n_t - 1) - 4.0 * at(n_t - 2) + at(n_t - 3)) / (2 * h);
  return (at(i + 1) - at(i - 1)) / (2 * h);
}

Vec4 d_s(const std::vector<Vec4>& f, int n_s, int i, int j, double h) {
  const Vec4& fp = f[i * n_s + (j + 1) % n_s];
  const Vec4& fm = f[i * n_s + (j + n_s - 1) % n_s];
  return (fp - fm) / (2 * h);
}

} // namespace

RotationalAnnulus build_annulus(const ProfileSolution& prof, const ContactData& contact,
                                int n_t, int n_s) {
  if (n_t < 32 || n_s < 16) throw DomainError("build_annulus: need n_t >= 32, n_s >= 16");
  RotationalAnnulus S;
  S.profile = prof;
  S.contact = contact;
  S.ambient = Ambient::Sphere;
  S.n_t = n_t;
  S.n_s = n_s;
  S.t_nodes = Eigen::VectorXd::LinSpaced(n_t, -contact.t_plus, contact.t_plus);
  S.s_nodes = Eigen::VectorXd::LinSpaced(n_s, 0.0, 2 * M_PI * (n_s - 1) / n_s);
  for (auto* v : {&S.r, &S.rp, &S.gtt, &S.gss, &S.Att, &S.Ass, &S.na, &S.nb, &S.nc, &S.nap,
                  &S.nbp, &S.ncp})
    v->resize(n_t);
  S.points.resize(n_t * n_s);
  S.normals.resize(n_t * n_s);
  const double orient = contact.orient;
  for (int i = 0; i < n_t; ++i) {
    const double t = S.t_nodes[i];
    double r, rp;
    prof.eval(t, r, rp);
    const ProfileForms F = profile_forms(t, r, rp);
    S.r[i] = r;
    S.rp[i] = rp;
    S.gtt[i] = F.gtt;
    S.gss[i] = F.gss;
    S.Att[i] = orient * F.Att;
    S.Ass[i] = orient * F.Ass;
    S.na[i] = orient * F.a;
    S.nb[i] = orient * F.b;
    S.nc[i] = orient * F.c;
    S.nap[i] = orient * F.ap;
    S.nbp[i] = orient * F.bp;
    S.ncp[i] = orient * F.cp;
    const double w = std::sqrt(1.0 - r * r);
    for (int j = 0; j < n_s; ++j) {
      const double s = S.s_nodes[j];
      S.points[S.idx(i, j)] =
          Vec4(r * std::cos(t), r * std::sin(t), w * std::cos(s), w * std::sin(s));
      S.normals[S.idx(i, j)] =
          Vec4(S.na[i] * std::cos(t) + S.nb[i] * std::sin(t),
               S.na[i] * std::sin(t) - S.nb[i] * std::cos(t), S.nc[i] * std::cos(s),
               S.nc[i] * std::sin(s));
    }
  }
  // cross-validate the closed forms against lattice finite differences
  const double ht = S.dt(), hs = S.ds();
  double dev = 0;
  for (int i = 1; i < n_t - 1; ++i)
    for (int j = 0; j < n_s; j += std::max(1, n_s / 16)) {
      const Vec4 xt = d_t(S.points, n_t, n_s, i, j, ht);
      const Vec4 xs = d_s(S.points, n_s, i, j, hs);
      const Vec4 nt = d_t(S.normals, n_t, n_s, i, j, ht);
      const Vec4 ns = d_s(S.normals, n_s, i, j, hs);
      dev = std::max({dev, std::abs(xt.dot(xt) - S.gtt[i]), std::abs(xs.dot(xs) - S.gss[i]),
                      std::abs(xt.dot(xs)), std::abs(nt.dot(xt) - S.Att[i]),
                      std::abs(ns.dot(xs) - S.Ass[i]), std::abs(nt.dot(xs))});
    }
  S.fd_deviation = dev;
  return S;
}

RotationalAnnulus critical_catenoid(int n_t, int n_s) {
  if (n_t < 32 || n_s < 16) throw DomainError("critical_catenoid: need n_t >= 32, n_s >= 16");
  const double t0 = catenoid_t0();
  const double c = 1.0 / std::sqrt(std::cosh(t0) * std::cosh(t0) + t0 * t0);
  RotationalAnnulus S;
  S.ambient = Ambient::Euclid;
  S.n_t = n_t;
  S.n_s = n_s;
  S.contact.t_plus = t0;
  S.contact.params = CapParams(1.0, M_PI / 2, +1); // R plays the role of the ball radius
  S.contact.x0_boundary = 0;
  S.t_nodes = Eigen::VectorXd::LinSpaced(n_t, -t0, t0);
  S.s_nodes = Eigen::VectorXd::LinSpaced(n_s, 0.0, 2 * M_PI * (n_s - 1) / n_s);
  for (auto* v : {&S.r, &S.rp, &S.gtt, &S.gss, &S.Att, &S.Ass, &S.na, &S.nb, &S.nc, &S.nap,
                  &S.nbp, &S.ncp})
    v->resize(n_t);
  S.points.resize(n_t * n_s);
  S.normals.resize(n_t * n_s);
  // record the profile samples for reporting (r = c cosh t)
  S.profile.r0 = c;
  S.profile.meta.method = "closed-form";
  for (int i = 0; i < n_t; ++i) {
    const double t = S.t_nodes[i];
    const double ch = std::cosh(t), sh = std::sinh(t);
    S.r[i] = c * ch;
    S.rp[i] = c * sh;
    S.gtt[i] = c * c * ch * ch;
    S.gss[i] = c * c * ch * ch;
    S.Att[i] = -c;
    S.Ass[i] = c;
    S.na[i] = 1.0 / ch; // radial normal component in the (x,y)-plane
    S.nb[i] = 0;
    S.nc[i] = -sh / ch; // axial component
    S.nap[i] = -sh / (ch * ch);
    S.nbp[i] = 0;
    S.ncp[i] = -1.0 / (ch * ch);
    for (int j = 0; j < n_s; ++j) {
      const double s = S.s_nodes[j];
      S.points[S.idx(i, j)] = Vec4(c * ch * std::cos(s), c * ch * std::sin(s), c * t, 0);
      S.normals[S.idx(i, j)] = Vec4(std::cos(s) / ch, std::sin(s) / ch, -sh / ch, 0);
    }
  }
  return S;
}

RotationalAnnulus rebuild(const RotationalAnnulus& surf, int n_t, int n_s) {
  if (surf.ambient == Ambient::Euclid) return critical_catenoid(n_t, n_s);
  return build_annulus(surf.profile, surf.contact, n_t, n_s);
}

Vec4 surf_xt(const RotationalAnnulus& surf, int i, int j) {
  const double t = surf.t_nodes[i], s = surf.s_nodes[j];
  const double r = surf.r[i], rp = surf.rp[i];
  if (surf.ambient == Ambient::Euclid) {
    // catenoid: r = c cosh t, axis component c t
    const double c = surf.profile.r0;
    return Vec4(rp * std::cos(s), rp * std::sin(s), c, 0);
  }
  const double w = std::sqrt(1.0 - r * r);
  const double wp = -r * rp / w;
  return Vec4(rp * std::cos(t) - r * std::sin(t), rp * std::sin(t) + r * std::cos(t),
              wp * std::cos(s), wp * std::sin(s));
}

Vec4 surf_xs(const RotationalAnnulus& surf, int i, int j) {
  const double s = surf.s_nodes[j];
  if (surf.ambient == Ambient::Euclid) {
    const double r = surf.r[i];
    return Vec4(-r * std::sin(s), r * std::cos(s), 0, 0);
  }
  const double w = std::sqrt(1.0 - surf.r[i] * surf.r[i]);
  return Vec4(0, 0, -w * std::sin(s), w * std::cos(s));
}

BoundaryReport boundary_relations_check(const RotationalAnnulus& surf) {
  if (surf.ambient != Ambient::Sphere)
    throw DomainError("boundary_relations_check: spherical ambient only");
  const CapParams& P = surf.contact.params;
  const double sR = std::sin(P.R), cR = std::cos(P.R);
  const double sg = std::sin(P.gamma), cg = std::cos(P.gamma);
  BoundaryReport rep;
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? surf.n_t - 1 : 0;
    const double t = surf.t_nodes[i];
    const double eta_sign = side == 0 ? +1.0 : -1.0; // outward t-direction
    const double r = surf.r[i], rp = surf.rp[i];
    const double sq_gtt = std::sqrt(surf.gtt[i]);
    const double n0 = surf.na[i] * std::cos(t) + surf.nb[i] * std::sin(t);
    const double n0t = surf.nap[i] * std::cos(t) - surf.na[i] * std::sin(t) +
                       surf.nbp[i] * std::sin(t) + surf.nb[i] * std::cos(t);
    const double Aee = surf.Att[i] / surf.gtt[i];
    rep.rel[0] = std::max(rep.rel[0], std::abs(r * std::cos(t) - cR));
    rep.rel[1] = std::max(
        rep.rel[1], std::abs(eta_sign * (rp * std::cos(t) - r * std::sin(t)) / sq_gtt + sR * sg));
    rep.rel[2] = std::max(rep.rel[2], std::abs(n0 + sR * cg));
    // d_eta<nu,e0> = -sin R sin gamma A(eta,eta): the tan-gamma form of the same
    // relation degenerates at gamma = pi/2
    rep.rel[3] = std::max(rep.rel[3], std::abs(eta_sign * n0t / sq_gtt + sR * sg * Aee));
    if (std::abs(cR) < 1e-9) {
      // extra relation at R = pi/2 for a in {e1, e2, e3}
      const double cot_g = cg / sg;
      const double n1 = surf.na[i] * std::sin(t) - surf.nb[i] * std::cos(t);
      const double n1t = surf.nap[i] * std::sin(t) + surf.na[i] * std::cos(t) -
                         surf.nbp[i] * std::cos(t) + surf.nb[i] * std::sin(t);
      rep.rel[4] = std::max(rep.rel[4], std::abs(eta_sign * n1t / sq_gtt + cot_g * Aee * n1));
      // e2, e3 components carry cos s / sin s factors; the profile part suffices
      rep.rel[4] = std::max(rep.rel[4],
                            std::abs(eta_sign * surf.ncp[i] / sq_gtt + cot_g * Aee * surf.nc[i]));
    }
  }
  rep.max_residual = *std::max_element(rep.rel, rep.rel + 5);
  return rep;
}

double a_eta_eta(const RotationalAnnulus& surf, bool plus_boundary) {
  const int ip = surf.n_t - 1, im = 0;
  const double vp = surf.Att[ip] / surf.gtt[ip];
  const double vm = surf.Att[im] / surf.gtt[im];
  if (vp * vm <= 0) throw SignMismatch("a_eta_eta: boundary components disagree in sign");
  return plus_boundary ? vp : vm;
}

namespace {

double hopf_value(double gss, double H, double A11, double A12, double A22, double g11,
                  double g12, double g22) {
  // trace-free part in index form, |Å|^2 = g^{ik} g^{jl} Å_ij Å_kl
  const double det = g11 * g22 - g12 * g12;
  const double iu11 = g22 / det, iu12 = -g12 / det, iu22 = g11 / det;
  const double a11 = A11 - 0.5 * H * g11, a12 = A12 - 0.5 * H * g12, a22 = A22 - 0.5 * H * g22;
  double n2 = 0;
  const double au[2][2] = {{a11, a12}, {a12, a22}};
  const double gu[2][2] = {{iu11, iu12}, {iu12, iu22}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) n2 += gu[i][k] * gu[j][l] * au[i][j] * au[k][l];
  return 2.0 * gss * gss * n2;
}

} // namespace

HopfReport hopf_constancy(const RotationalAnnulus& surf) {
  HopfReport rep;
  rep.max = -1e300;
  rep.min = 1e300;
  for (int i = 0; i < surf.n_t; ++i) {
    const double H = surf.Att[i] / surf.gtt[i] + surf.Ass[i] / surf.gss[i];
    const double v = hopf_value(surf.gss[i], H, surf.Att[i], 0.0, surf.Ass[i], surf.gtt[i], 0.0,
                                surf.gss[i]);
    rep.max = std::max(rep.max, v);
    rep.min = std::min(rep.min, v);
  }
  rep.spread = (rep.max - rep.min) / rep.max;
  return rep;
}

HopfReport hopf_constancy(const MeasuredSurface& surf) {
  HopfReport rep;
  rep.max = -1e300;
  rep.min = 1e300;
  for (int i = 1; i < surf.n_t - 1; ++i)
    for (int j = 0; j < surf.n_s; ++j) {
      const int q = surf.idx(i, j);
      const double v = hopf_value(surf.g22[q], surf.H[q], surf.A11[q], surf.A12[q], surf.A22[q],
                                  surf.g11[q], surf.g12[q], surf.g22[q]);
      rep.max = std::max(rep.max, v);
      rep.min = std::min(rep.min, v);
    }
  rep.spread = (rep.max - rep.min) / rep.max;
  return rep;
}

RadialGraphReport radial_graph_check(const RotationalAnnulus& surf) {
  RadialGraphReport rep;
  double minabs = 1e300;
  bool pos = false, neg = false;
  for (int i = 1; i < surf.n_t - 1; ++i) {
    if (surf.points[surf.idx(i, 0)][0] > 1.0 - 1e-9)
      throw DomainError("radial_graph_check: surface meets the cap center e0");
    const double n0 = surf.na[i] * std::cos(surf.t_nodes[i]) + surf.nb[i] * std::sin(surf.t_nodes[i]);
    minabs = std::min(minabs, std::abs(n0));
    (n0 > 0 ? pos : neg) = true;
  }
  rep.min_abs_nu0 = minabs;
  rep.is_graph = !(pos && neg) && minabs > 1e-12;
  return rep;
}

ConstrainedReport constrained_check(const RotationalAnnulus& surf) {
  ConstrainedReport rep;
  double min_x0 = 1e300, max_rho = 0;
  for (int i = 0; i < surf.n_t; ++i) {
    const double x0 = surf.r[i] * std::cos(surf.t_nodes[i]);
    min_x0 = std::min(min_x0, x0);
    max_rho = std::max(max_rho, std::acos(clamp1(x0)));
  }
  rep.min_x0 = min_x0;
  rep.max_rho = max_rho;
  rep.constrained = min_x0 >= -1e-10;
  return rep;
}

std::pair<int, int> two_piece_slices(const RotationalAnnulus& surf, const Vec4& a_in) {
  Vec4 a = a_in.normalized();
  if (std::abs(a[0]) > 1e-12) throw DomainError("two_piece_slices: a must be orthogonal to e0");
  const int nt = surf.n_t, ns = surf.n_s;
  std::vector<int> label(nt * ns, 0);
  int zeros = 0;
  for (int q = 0; q < nt * ns; ++q) {
    const double xa = surf.points[q].dot(a);
    if (std::abs(xa) < 1e-9) {
      label[q] = 0;
      ++zeros;
    } else {
      label[q] = xa > 0 ? 1 : -1;
    }
  }
  if (zeros * 10 > nt * ns) throw DegenerateSlice("two_piece_slices: > 10% near-zero nodes");
  std::vector<int> comp(nt * ns, -1);
  int n_pos = 0, n_neg = 0;
  for (int q0 = 0; q0 < nt * ns; ++q0) {
    if (label[q0] == 0 || comp[q0] >= 0) continue;
    const int want = label[q0];
    (want > 0 ? n_pos : n_neg)++;
    std::deque<int> todo{q0};
    comp[q0] = q0;
    while (!todo.empty()) {
      const int q = todo.front();
      todo.pop_front();
      const int i = q / ns, j = q % ns;
      const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, (j + 1) % ns}, {i, (j + ns - 1) % ns}};
      for (auto& [ii, jj] : nb) {
        if (ii < 0 || ii >= nt) continue;
        const int qq = ii * ns + jj;
        if (comp[qq] < 0 && label[qq] == want) {
          comp[qq] = q0;
          todo.push_back(qq);
        }
      }
    }
  }
  return {n_pos, n_neg};
}

double green_identity_check(const RotationalAnnulus& surf, const Vec4& a_in) {
  Vec4 a = a_in.normalized();
  if (std::abs(a[0]) > 1e-12) throw DomainError("green_identity_check: a must be orthogonal to e0");
  double total = 0;
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : surf.n_t - 1;
    const double len = std::sqrt(surf.gss[i]) * surf.ds();
    double acc = 0;
    for (int j = 0; j < surf.n_s; ++j) acc += surf.points[surf.idx(i, j)].dot(a) * len;
    total += acc;
  }
  return std::abs(total);
}

MeasuredSurface measure_lattice(const std::vector<Vec4>& points, const Eigen::VectorXd& t_nodes,
                                const Eigen::VectorXd& s_nodes, Ambient ambient,
                                const std::vector<Vec4>* ref_normals) {
  MeasuredSurface M;
  M.ambient = ambient;
  M.n_t = static_cast<int>(t_nodes.size());
  M.n_s = static_cast<int>(s_nodes.size());
  M.t_nodes = t_nodes;
  M.s_nodes = s_nodes;
  M.points = points;
  const int nt = M.n_t, ns = M.n_s, N = nt * ns;
  M.normals.resize(N);
  M.xt.resize(N);
  M.xs.resize(N);
  for (auto* v : {&M.g11, &M.g12, &M.g22, &M.A11, &M.A12, &M.A22, &M.H}) v->resize(N);
  const double ht = M.dt(), hs = M.ds();
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      const int q = M.idx(i, j);
      const Vec4 xt = d_t(points, nt, ns, i, j, ht);
      const Vec4 xs = d_s(points, ns, i, j, hs);
      M.xt[q] = xt;
      M.xs[q] = xs;
      M.g11[q] = xt.dot(xt);
      M.g12[q] = xt.dot(xs);
      M.g22[q] = xs.dot(xs);
      Vec4 n;
      if (ambient == Ambient::Sphere) {
        n = cross4(points[q], xt, xs);
        n -= n.dot(points[q]) * points[q];
      } else {
        const Eigen::Vector3d n3 =
            xt.head<3>().cross(xs.head<3>());
        n = Vec4(n3[0], n3[1], n3[2], 0);
      }
      n.normalize();
      if (ref_normals && n.dot((*ref_normals)[q]) < 0) n = -n;
      M.normals[q] = n;
    }
  for (int i = 0; i < nt; ++i)
    for (int j = 0; j < ns; ++j) {
      const int q = M.idx(i, j);
      const Vec4 nt_d = d_t(M.normals, nt, ns, i, j, ht);
      const Vec4 ns_d = d_s(M.normals, ns, i, j, hs);
      M.A11[q] = nt_d.dot(M.xt[q]);
      M.A22[q] = ns_d.dot(M.xs[q]);
      M.A12[q] = 0.5 * (nt_d.dot(M.xs[q]) + ns_d.dot(M.xt[q]));
      const double det = M.g11[q] * M.g22[q] - M.g12[q] * M.g12[q];
      M.H[q] = (M.g22[q] * M.A11[q] - 2 * M.g12[q] * M.A12[q] + M.g11[q] * M.A22[q]) / det;
    }
  return M;
}

double max_mean_curvature(const MeasuredSurface& surf) {
  double m = 0;
  for (int i = 1; i < surf.n_t - 1; ++i)
    for (int j = 0; j < surf.n_s; ++j) m = std::max(m, std::abs(surf.H[surf.idx(i, j)]));
  return m;
}

NormalGraphResult normal_graph(const RotationalAnnulus& surf, const Eigen::VectorXd& u) {
  if (surf.ambient != Ambient::Sphere) throw DomainError("normal_graph: spherical ambient only");
  if (std::abs(surf.contact.x0_boundary) > 1e-9 ||
      std::abs(surf.contact.params.gamma - M_PI / 2) > 1e-9)
    throw DomainError("normal_graph: base must meet dB_{pi/2} orthogonally");
  if (u.size() != surf.n_t * surf.n_s) throw DomainError("normal_graph: field size mismatch");
  if (u.cwiseAbs().maxCoeff() >= 0.1) throw DomainError("normal_graph: ||u||_inf must be < 0.1");
  const double ht = surf.dt();
  for (int j = 0; j < surf.n_s; ++j) {
    const double d0 =
        (-3 * u[surf.idx(0, j)] + 4 * u[surf.idx(1, j)] - u[surf.idx(2, j)]) / (2 * ht);
    const double d1 = (3 * u[surf.idx(surf.n_t - 1, j)] - 4 * u[surf.idx(surf.n_t - 2, j)] +
                       u[surf.idx(surf.n_t - 3, j)]) /
                      (2 * ht);
    // coarse guard only (one-sided FD carries its own truncation error);
    // contact_residual reports the sharp orthogonality defect
    if (std::abs(d0) > 1e-4 || std::abs(d1) > 1e-4)
      throw DomainError("normal_graph: u is not Neumann on the boundary rows");
  }
  std::vector<Vec4> pts(surf.points.size());
  for (size_t q = 0; q < pts.size(); ++q)
    pts[q] = std::cos(u[q]) * surf.points[q] + std::sin(u[q]) * surf.normals[q];
  NormalGraphResult out;
  out.surface = measure_lattice(pts, surf.t_nodes, surf.s_nodes, Ambient::Sphere, &surf.normals);
  for (int side = 0; side < 2; ++side) {
    const int i = side == 0 ? 0 : surf.n_t - 1;
    for (int j = 0; j < surf.n_s; ++j) {
      const int q = surf.idx(i, j);
      out.boundary_offset = std::max(out.boundary_offset, std::abs(pts[q][0]));
      // d_rho = -e0 on dB_{pi/2}, so the contact angle residual is |nu_0|
      out.contact_residual =
          std::max(out.contact_residual, std::abs(out.surface.normals[q][0]));
    }
  }
  if (out.boundary_offset > 1e-6)
    throw ContactLost("normal_graph: boundary left dB_{pi/2}");
  return out;
}

} // namespace caplab
