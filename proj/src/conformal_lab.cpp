#include "caplab/conformal_lab.hpp"

#include <cmath>

namespace caplab {

namespace {

Eigen::VectorXd make_grid(int npts, double rbar) {
  if (npts < 8) throw DomainError("warped profile: need at least 8 grid points");
  return Eigen::VectorXd::LinSpaced(npts, rbar / npts, rbar);
}

} // namespace

WarpedProfile space_form_profile(int npts, double rbar) {
  WarpedProfile p;
  p.phi = [](double r) { return std::log(2.0 / (1.0 + r * r)); };
  p.phip = [](double r) { return -2.0 * r / (1.0 + r * r); };
  p.phipp = [](double r) {
    const double d = 1.0 + r * r;
    return -2.0 * (1.0 - r * r) / (d * d);
  };
  p.r = make_grid(npts, rbar);
  p.rbar = rbar;
  p.label = "SpaceForm";
  return p;
}

WarpedProfile gaussian_profile(int npts, double rbar, int n) {
  WarpedProfile p;
  const double c = 1.0 / (4.0 * n);
  p.phi = [c](double r) { return -c * r * r; };
  p.phip = [c](double r) { return -2.0 * c * r; };
  p.phipp = [c](double) { return -2.0 * c; };
  p.r = make_grid(npts, rbar);
  p.rbar = rbar;
  p.n = n;
  p.label = "Gaussian";
  return p;
}

WarpedProfile custom_profile(std::function<double(double)> phi, std::function<double(double)> phip,
                             std::function<double(double)> phipp, int npts, double rbar,
                             const std::string& label) {
  WarpedProfile p;
  p.phi = std::move(phi);
  p.phip = std::move(phip);
  p.phipp = std::move(phipp);
  p.r = make_grid(npts, rbar);
  p.rbar = rbar;
  p.label = label;
  return p;
}

ConditionAReport condition_A_eval(const WarpedProfile& prof) {
  ConditionAReport rep;
  const int n = static_cast<int>(prof.r.size());
  rep.values.resize(n);
  for (int i = 0; i < n; ++i) {
    const double r = prof.r[i];
    const double pp = prof.phip(r);
    // (phi'/r)' - r (phi'/r)^2 = (phi'' - phi'/r - phi'^2)/r
    rep.values[i] = (prof.phipp(r) - pp / r - pp * pp) / r;
  }
  const double vmax = rep.values.maxCoeff(), amax = rep.values.cwiseAbs().maxCoeff();
  if (amax < 1e-10)
    rep.verdict = AVerdict::IdenticallyZero;
  else if (vmax < 0)
    rep.verdict = AVerdict::StrictlyNegative;
  else
    rep.verdict = AVerdict::Mixed;
  return rep;
}

RicciGapReport ricci_radial_gap(const WarpedProfile& prof) {
  RicciGapReport rep;
  const int npts = static_cast<int>(prof.r.size());
  const int N = prof.n + 1; // ambient dimension
  rep.gap.resize(npts);
  rep.sign_agreement = true;
  const ConditionAReport condA = condition_A_eval(prof);
  for (int i = 0; i < npts; ++i) {
    const double r = prof.r[i];
    const double p1 = prof.phip(r), p2 = prof.phipp(r);
    const double lap = p2 + (N - 1) * p1 / r; // flat Laplacian of phi
    const double common = lap + (N - 2) * p1 * p1;
    const double ric_rad = -(N - 2) * (p2 - p1 * p1) - common;
    const double ric_tan = -(N - 2) * (p1 / r) - common;
    rep.gap[i] = ric_rad - ric_tan;
    const double a = condA.values[i];
    if (std::abs(a) > 1e-12 || std::abs(rep.gap[i]) > 1e-12) {
      if (!(rep.gap[i] * a < 0)) rep.sign_agreement = false;
    }
  }
  return rep;
}

namespace {

Vec3 d_t3(const std::vector<Vec3>& f, int nt, int ns, int i, int j, double h) {
  auto at = [&](int ii) -> const Vec3& { return f[ii * ns + j]; };
  if (i == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2 * h);
  if (i == nt - 1) return (3.0 * at(nt - 1) - 4.0 * at(nt - 2) + at(nt - 3)) / (2 * h);
  return (at(i + 1) - at(i - 1)) / (2 * h);
}

Vec3 d_s3(const std::vector<Vec3>& f, int ns, int i, int j, double h) {
  return (f[i * ns + (j + 1) % ns] - f[i * ns + (j + ns - 1) % ns]) / (2 * h);
}

// 2D lattice Laplacian for the s-independent diagonal annulus metric
double lap2d_s(const RotationalAnnulus& S, const Eigen::VectorXd& u, int i, int j) {
  const double ht = S.dt(), hs = S.ds();
  const int ns = S.n_s;
  auto at = [&](int ii, int jj) { return u[S.idx(ii, (jj % ns + ns) % ns)]; };
  auto w = [&](int q) { return std::sqrt(S.gtt[q] * S.gss[q]) / S.gtt[q]; };
  const double cp = 0.5 * (w(i) + w(i + 1));
  const double cm = 0.5 * (w(i) + w(i - 1));
  const double sg = std::sqrt(S.gtt[i] * S.gss[i]);
  const double tt =
      (cp * (at(i + 1, j) - at(i, j)) - cm * (at(i, j) - at(i - 1, j))) / (ht * ht * sg);
  const double ss = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (hs * hs * S.gss[i]);
  return tt + ss;
}

} // namespace

std::pair<double, double> ua_identity_check(const RotationalAnnulus& S, const Vec3& a_in) {
  if (S.ambient != Ambient::Sphere) throw DomainError("ua_identity_check: spherical ambient only");
  const Vec3 a = a_in.normalized();
  const int nt = S.n_t, ns = S.n_s, N = nt * ns;
  std::vector<Vec3> y(N);
  Eigen::VectorXd u(N);
  for (int q = 0; q < N; ++q) {
    y[q] = stereographic(SpherePoint(S.points[q]));
    const double ephi = 2.0 / (1.0 + y[q].squaredNorm());
    u[q] = ephi * y[q].dot(a);
  }
  const WarpedProfile sf = space_form_profile(16, 1.0);
  double res_int = 0;
  for (int i = 1; i < nt - 1; ++i)
    for (int j = 0; j < ns; ++j) {
      const int q = S.idx(i, j);
      const double r = y[q].norm();
      const double ephi = std::exp(sf.phi(r));
      // Euclidean unit normal of the projected lattice
      const Vec3 yt = d_t3(y, nt, ns, i, j, S.dt());
      const Vec3 ys = d_s3(y, ns, i, j, S.ds());
      Vec3 nd = yt.cross(ys);
      nd.normalize();
      const double nu_r = nd.dot(y[q] / r);
      const double coeff =
          -2.0 / (ephi * ephi) * (sf.phipp(r) - sf.phip(r) / r - sf.phip(r) * sf.phip(r)) *
          nu_r * nu_r;
      const double kt = S.Att[i] / S.gtt[i], ks = S.Ass[i] / S.gss[i];
      const double A2 = kt * kt + ks * ks;
      const double lhs = lap2d_s(S, u, i, j) + (A2 + 2.0) * u[q];
      const double rhs = (coeff + A2) * u[q];
      res_int = std::max(res_int, std::abs(lhs - rhs));
    }
  const double cotR = std::cos(S.contact.params.R) / std::sin(S.contact.params.R);
  const double ht = S.dt();
  double res_bnd = 0;
  for (int j = 0; j < ns; ++j) {
    const double dp = (3 * u[S.idx(nt - 1, j)] - 4 * u[S.idx(nt - 2, j)] + u[S.idx(nt - 3, j)]) /
                      (2 * ht) / std::sqrt(S.gtt[nt - 1]);
    const double dm = -(-3 * u[S.idx(0, j)] + 4 * u[S.idx(1, j)] - u[S.idx(2, j)]) / (2 * ht) /
                      std::sqrt(S.gtt[0]);
    res_bnd = std::max(res_bnd, std::abs(dp - cotR * u[S.idx(nt - 1, j)]));
    res_bnd = std::max(res_bnd, std::abs(dm - cotR * u[S.idx(0, j)]));
  }
  return {res_int, res_bnd};
}

double foliation_derivative(double rbar, const WarpedProfile& prof, double s, double r) {
  if (!(s > 0 && s < rbar)) throw DomainError("foliation_derivative: need 0 < s < rbar");
  if (!(r >= 0 && r <= rbar)) throw DomainError("foliation_derivative: need 0 <= r <= rbar");
  const double r2 = rbar * rbar;
  const double t = r2 * std::sqrt((r * r + s * s) / (r2 * r2 + s * s * r * r));
  return (2.0 * s * t * t / (r2 * (r * r + s * s))) *
         (-1.0 + (prof.phip(t) / t) * (r2 - t * t) / 2.0);
}

double foliation_leaf_mean_curvature(double rbar, const WarpedProfile& prof, double s, double r) {
  if (!(s > 0 && s < rbar)) throw DomainError("foliation_leaf_mean_curvature: need 0 < s < rbar");
  const Vec3 yv(s, 0, 0); // translate along the x0-axis
  const double h = 1e-4 * rbar;
  auto leaf = [&](double u1, double u2) {
    const Vec3 x(0, r + u1, u2); // equatorial-disc chart around the sample point
    return conformal_translation(yv, rbar, x).value;
  };
  const Vec3 P = leaf(0, 0);
  const Vec3 Xu = (leaf(h, 0) - leaf(-h, 0)) / (2 * h);
  const Vec3 Xv = (leaf(0, h) - leaf(0, -h)) / (2 * h);
  const Vec3 Xuu = (leaf(h, 0) - 2 * P + leaf(-h, 0)) / (h * h);
  const Vec3 Xvv = (leaf(0, h) - 2 * P + leaf(0, -h)) / (h * h);
  const Vec3 Xuv = (leaf(h, h) - leaf(h, -h) - leaf(-h, h) + leaf(-h, -h)) / (4 * h * h);
  Vec3 nd = Xu.cross(Xv).normalized();
  if (nd[0] < 0) nd = -nd; // orient toward +x0
  const double E = Xu.dot(Xu), F = Xu.dot(Xv), G = Xv.dot(Xv);
  // A(X,Y) = <d_X nu, Y> = -<nu, d^2 X>
  const double L = -nd.dot(Xuu), M = -nd.dot(Xuv), Nn = -nd.dot(Xvv);
  const double Hdelta = (G * L - 2 * F * M + E * Nn) / (E * G - F * F);
  const double rr = P.norm();
  const double dnphi = prof.phip(rr) * nd.dot(P / rr);
  return std::exp(-prof.phi(rr)) * (Hdelta + 2.0 * dnphi);
}

double killing_orthogonality(const MeasuredSurface& S, int gen, double R) {
  if (gen < 1 || gen > 3) throw DomainError("killing_orthogonality: generator index in {1,2,3}");
  const double cR = std::cos(R);
  const double ht = S.dt(), hs = S.ds();
  double acc = 0;
  for (int i = 0; i < S.n_t; ++i) {
    const double wt = (i == 0 || i == S.n_t - 1) ? 0.5 : 1.0;
    for (int j = 0; j < S.n_s; ++j) {
      const int q = S.idx(i, j);
      const Vec4& x = S.points[q];
      const Vec4& nu = S.normals[q];
      const double rho = std::acos(clamp1(x[0]));
      const double srho = std::sin(rho);
      const double den = 1.0 + cR * std::cos(rho);
      const double f = 2.0 * std::log(den);            // f_R
      const double fp = -2.0 * cR * srho / den;        // f_R'(rho)
      const double nu_rho = (std::cos(rho) * nu.dot(x) - nu[0]) / srho;
      const double Hf = S.H[q] - fp * nu_rho;
      Vec4 Kx;
      if (gen == 1)
        Kx = Vec4(0, 0, -x[3], x[2]);
      else if (gen == 2)
        Kx = Vec4(0, -x[2], x[1], 0);
      else
        Kx = Vec4(0, -x[3], 0, x[1]);
      const double detg = S.g11[q] * S.g22[q] - S.g12[q] * S.g12[q];
      acc += wt * Hf * Kx.dot(nu) * std::exp(-f) * std::sqrt(detg) * ht * hs;
    }
  }
  return std::abs(acc);
}

ConformalHCheck conformal_hypersurface_check(double r, const WarpedProfile& prof, double h) {
  if (!(r > 0 && r < prof.rbar)) throw DomainError("conformal_hypersurface_check: r out of range");
  ConformalHCheck out;
  out.formula = std::exp(-prof.phi(r)) * (2.0 / r + 2.0 * prof.phip(r));
  // normal-motion area derivative: H = d log Area / d (conformal distance)
  auto logA = [&](double rr) { return 2.0 * std::log(rr) + 2.0 * prof.phi(rr); };
  out.fd = (logA(r + h) - logA(r - h)) / (2 * h) / std::exp(prof.phi(r));
  out.residual = std::abs(out.formula - out.fd);
  return out;
}

} // namespace caplab
