#include "caplab/rotational_solver.hpp"

#include <algorithm>
#include <cmath>

namespace caplab {

static constexpr double kBandGuard = 1e-8;

std::pair<double, double> ode_rhs(double /*t*/, double r, double rp) {
  const double band = r * (1.0 - r * r);
  if (band < kBandGuard) throw SingularityError("ode_rhs: r(1-r^2) below band guard");
  const double rpp = (1.0 - 2.0 * r * r) * (2.0 * rp * rp + r * r * (1.0 - r * r)) / band;
  return {rp, rpp};
}

namespace {

// Dormand-Prince 5(4) pair, classic coefficients.
struct Dopri5 {
  double tol;
  // One adaptive step from (t, y) with initial trial h, not exceeding t_target.
  // Returns the accepted step size; updates t, y in place.
  double step(double& t, double y[2], double& h, double t_target) const {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
    auto f = [](double tt, const double yy[2], double out[2]) {
      auto [d0, d1] = ode_rhs(tt, yy[0], yy[1]);
      out[0] = d0;
      out[1] = d1;
    };
    for (int attempt = 0; attempt < 60; ++attempt) {
      if (h > t_target - t) h = t_target - t;
      if (h < 1e-14) throw StepFailure("dopri5: step size underflow");
      double k1[2], k2[2], k3[2], k4[2], k5[2], k6[2], k7[2], yt[2];
      f(t, y, k1);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
      f(t + h / 5, yt, k2);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      f(t + 3 * h / 10, yt, k3);
      for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      f(t + 4 * h / 5, yt, k4);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      f(t + 8 * h / 9, yt, k5);
      for (int i = 0; i < 2; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      f(t + h, yt, k6);
      double y5[2];
      for (int i = 0; i < 2; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      f(t + h, y5, k7);
      double errnorm = 0;
      for (int i = 0; i < 2; ++i) {
        const double e =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = tol + tol * std::abs(std::max(std::abs(y[i]), std::abs(y5[i])));
        errnorm += (e / sc) * (e / sc);
      }
      errnorm = std::sqrt(errnorm / 2);
      if (errnorm <= 1.0) {
        const double hdone = h;
        t += h;
        y[0] = y5[0];
        y[1] = y5[1];
        h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(errnorm, 1e-10), -0.2)));
        return hdone;
      }
      h *= std::min(1.0, std::max(0.2, 0.9 * std::pow(errnorm, -0.2)));
    }
    throw StepFailure("dopri5: no accepted step after 60 attempts");
  }
};

} // namespace

ProfileSolution integrate_profile(double r0, double t_max, double tol) {
  if (!(r0 > 0.005 && r0 < 0.9995))
    throw DomainError("integrate_profile: r0 outside admissible band (0.005, 0.9995)");
  if (!(tol >= 1e-13 && tol <= 1e-6)) throw DomainError("integrate_profile: tol out of [1e-13, 1e-6]");
  if (!(t_max > 0)) throw DomainError("integrate_profile: t_max <= 0");

  ProfileSolution sol;
  sol.r0 = r0;
  sol.meta.tol = tol;
  const double dt = sol.meta.dt_sample;
  const int n = static_cast<int>(std::ceil(t_max / dt - 1e-9));

  sol.t_grid.push_back(0.0);
  sol.r.push_back(r0);
  sol.rp.push_back(0.0);

  Dopri5 stepper{tol};
  double t = 0.0, y[2] = {r0, 0.0}, h = 1e-3;
  try {
    for (int k = 1; k <= n; ++k) {
      const double t_target = std::min(k * dt, t_max);
      while (t < t_target - 1e-13) {
        if (h > sol.meta.max_step) h = sol.meta.max_step;
        stepper.step(t, y, h, t_target);
      }
      sol.t_grid.push_back(t_target);
      sol.r.push_back(y[0]);
      sol.rp.push_back(y[1]);
    }
  } catch (const SingularityError&) {
    if (sol.t_grid.size() < 8) throw; // nothing usable was integrated
    // keep the truncated grid: the profile left the admissible band
  }
  return sol;
}

void ProfileSolution::eval(double t, double& r_out, double& rp_out) const {
  const double tt = std::abs(t);
  const double te = t_end();
  if (tt > te + 1e-12) throw RangeError("ProfileSolution::eval: t outside grid range");
  const int n = static_cast<int>(t_grid.size());
  int i = std::min(static_cast<int>(tt / meta.dt_sample), n - 2);
  if (i < 0) i = 0;
  const double h = t_grid[i + 1] - t_grid[i];
  const double th = (tt - t_grid[i]) / h;
  const double y0 = r[i], y1 = r[i + 1], d0 = rp[i], d1 = rp[i + 1];
  const double s0 = ode_rhs(t_grid[i], y0, d0).second;
  const double s1 = ode_rhs(t_grid[i + 1], y1, d1).second;
  const double t2 = th * th, t3 = t2 * th, t4 = t3 * th, t5 = t4 * th;
  // two-point quintic Hermite basis
  const double H0 = 1 - 10 * t3 + 15 * t4 - 6 * t5;
  const double H1 = th - 6 * t3 + 8 * t4 - 3 * t5;
  const double H2 = 0.5 * t2 - 1.5 * t3 + 1.5 * t4 - 0.5 * t5;
  const double H3 = 10 * t3 - 15 * t4 + 6 * t5;
  const double H4 = -4 * t3 + 7 * t4 - 3 * t5;
  const double H5 = 0.5 * t3 - t4 + 0.5 * t5;
  const double G0 = -30 * t2 + 60 * t3 - 30 * t4;
  const double G1 = 1 - 18 * t2 + 32 * t3 - 15 * t4;
  const double G2 = th - 4.5 * t2 + 6 * t3 - 2.5 * t4;
  const double G3 = 30 * t2 - 60 * t3 + 30 * t4;
  const double G4 = -12 * t2 + 28 * t3 - 15 * t4;
  const double G5 = 1.5 * t2 - 4 * t3 + 2.5 * t4;
  r_out = y0 * H0 + h * d0 * H1 + h * h * s0 * H2 + y1 * H3 + h * d1 * H4 + h * h * s1 * H5;
  rp_out = (y0 * G0 + y1 * G3) / h + d0 * G1 + d1 * G4 + h * (s0 * G2 + s1 * G5);
  if (t < 0) rp_out = -rp_out;
}

SpherePoint embed(const ProfileSolution& prof, double s, double t) {
  double r, rp;
  prof.eval(t, r, rp);
  const double w = std::sqrt(1.0 - r * r);
  return SpherePoint(Vec4(r * std::cos(t), r * std::sin(t), w * std::cos(s), w * std::sin(s)));
}

double nu0_from_state(double t, double r, double rp) {
  const double w2 = 1.0 - r * r;
  const double D = std::sqrt(rp * rp + r * r * w2);
  if (D < 1e-12) throw SingularityError("nu0: vanishing denominator");
  return (r * w2 * std::cos(t) + rp * std::sin(t)) / D;
}

double nu0_t_from_state(double t, double r, double rp) {
  const double w2 = 1.0 - r * r;
  const double D = std::sqrt(rp * rp + r * r * w2);
  if (D < 1e-12) throw SingularityError("nu0_t: vanishing denominator");
  return r * r * (rp * std::cos(t) - r * std::sin(t)) / D;
}

double nu0(const ProfileSolution& prof, double t) {
  double r, rp;
  prof.eval(t, r, rp);
  return nu0_from_state(t, r, rp);
}

ProfileForms profile_forms(double t, double r, double rp) {
  ProfileForms F;
  const double w2 = 1.0 - r * r;
  const double w = std::sqrt(w2);
  const double D = std::sqrt(rp * rp + r * r * w2);
  const double rpp = ode_rhs(t, r, rp).second;
  F.D = D;
  F.gtt = r * r + rp * rp / w2;
  F.gss = w2;
  F.a = r * w2 / D;
  F.b = rp / D;
  F.c = -r * r * w / D;
  F.Ass = -r * r * w2 / D;
  const double wp = -r * rp / w;
  const double wpp = -(rp * rp + r * rpp) / w - r * r * rp * rp / (w * w2);
  F.Att = -(F.a * (rpp - r) - 2.0 * F.b * rp + F.c * wpp);
  // derivatives of the normal components (quotient rule; D' from D^2 = rp^2 + r^2 - r^4)
  const double Dp = (rp * rpp + r * rp - 2.0 * r * r * r * rp) / D;
  const double N1p = rp * (1.0 - 3.0 * r * r);          // d/dt of r(1-r^2)
  const double N3p = -2.0 * r * rp * w - r * r * wp;    // d/dt of r^2 w, negated below
  F.ap = (N1p * D - r * w2 * Dp) / (D * D);
  F.bp = (rpp * D - rp * Dp) / (D * D);
  F.cp = -(N3p * D - r * r * w * Dp) / (D * D);
  return F;
}

namespace {

// nu0 numerator r(1-r^2)cos t + r' sin t along a profile.
double nu0_numer(const ProfileSolution& prof, double t) {
  double r, rp;
  prof.eval(t, r, rp);
  return r * (1.0 - r * r) * std::cos(t) + rp * std::sin(t);
}

int epsilon_sign(const ProfileSolution& prof, double t_b, int orient) {
  double r, rp;
  prof.eval(t_b, r, rp);
  const ProfileForms Fp = profile_forms(t_b, r, rp);
  prof.eval(-t_b, r, rp);
  const ProfileForms Fm = profile_forms(-t_b, r, rp);
  const double ap = orient * Fp.Att / Fp.gtt;
  const double am = orient * Fm.Att / Fm.gtt;
  if (ap * am <= 0) throw SignMismatch("A(eta,eta) sign differs between the two boundary circles");
  return ap > 0 ? +1 : -1;
}

ContactData contact_at(const ProfileSolution& prof, double t_b, bool require_free) {
  double r, rp;
  prof.eval(t_b, r, rp);
  const double cosR = r * std::cos(t_b);
  const double R = std::acos(clamp1(cosR));
  const double sin_rho = std::sqrt(std::max(1.0 - cosR * cosR, 0.0));
  if (sin_rho < 1e-12) throw InconsistentContact("contact: boundary at the pole");
  const ProfileForms F = profile_forms(t_b, r, rp);
  const double sg = -(rp * std::cos(t_b) - r * std::sin(t_b)) / (std::sqrt(F.gtt) * sin_rho);
  const double n0 = nu0_from_state(t_b, r, rp);
  const double cg_raw = -n0 / sin_rho; // <nu, d_rho> with the analytic normal
  int orient = +1;
  if (std::abs(cg_raw) > 1e-9 && cg_raw < 0) orient = -1;
  const double cg = orient * cg_raw;

  ContactData cd;
  cd.t_plus = t_b;
  cd.x0_boundary = cosR;
  cd.orient = orient;
  if (require_free) {
    if (std::abs(sg - 1.0) > 1e-8)
      throw InconsistentContact("free boundary: <eta, d_rho> differs from 1 beyond 1e-8");
    cd.params = CapParams(R, M_PI / 2, epsilon_sign(prof, t_b, orient));
  } else {
    const double gamma = std::asin(clamp1(sg));
    if (std::abs(std::cos(gamma) - cg) > 1e-6)
      throw InconsistentContact("capillary: the two gamma projections disagree beyond 1e-6");
    cd.params = CapParams(R, gamma, epsilon_sign(prof, t_b, orient));
  }
  return cd;
}

} // namespace

ContactData find_free_boundary(const ProfileSolution& prof) {
  const int n = static_cast<int>(prof.t_grid.size());
  double prev = nu0_numer(prof, prof.t_grid[0]);
  int k = -1;
  for (int i = 1; i < n; ++i) {
    const double cur = nu0_numer(prof, prof.t_grid[i]);
    if (prev > 0 && cur <= 0) {
      k = i;
      break;
    }
    prev = cur;
  }
  if (k < 0) throw NoContactError("find_free_boundary: nu0 keeps its sign up to t_max");
  double lo = prof.t_grid[k - 1], hi = prof.t_grid[k];
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (nu0_numer(prof, mid) > 0 ? lo : hi) = mid;
  }
  // secant polish
  double t_root = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double f0 = nu0_numer(prof, t_root);
    const double h = 1e-7;
    const double fp = (nu0_numer(prof, t_root + h) - nu0_numer(prof, t_root - h)) / (2 * h);
    if (std::abs(fp) < 1e-14) break;
    t_root -= f0 / fp;
  }
  return contact_at(prof, t_root, /*require_free=*/true);
}

ContactData find_capillary_boundary(const ProfileSolution& prof, double t_b) {
  if (t_b <= 0 || t_b > prof.t_end() + 1e-12)
    throw RangeError("find_capillary_boundary: t_b outside grid range");
  return contact_at(prof, t_b, /*require_free=*/false);
}

namespace {

double family_R(double r0) {
  const ProfileSolution prof = integrate_profile(r0, 4.0, 1e-11);
  return find_free_boundary(prof).params.R;
}

} // namespace

SweepResult sweep_family(const std::vector<double>& r0_grid, bool parallel) {
  SweepResult out;
  const int n = static_cast<int>(r0_grid.size());
  out.rows.resize(n);
  auto run_one = [&](int i) {
    SweepRow& row = out.rows[i];
    row.r0 = r0_grid[i];
    try {
      const ProfileSolution prof = integrate_profile(r0_grid[i], 4.0, 1e-11);
      const ContactData cd = find_free_boundary(prof);
      row.R = cd.params.R;
      row.t_plus = cd.t_plus;
    } catch (const NoContactError&) {
      row.status = "no_contact";
    } catch (const SingularityError&) {
      row.status = "singular";
    } catch (const std::exception&) {
      row.status = "error"; // never abort the sweep (and never leak across omp)
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) run_one(i);
  } else {
    for (int i = 0; i < n; ++i) run_one(i);
  }

  int best = -1;
  for (int i = 0; i < n; ++i)
    if (out.rows[i].status == "ok" && (best < 0 || out.rows[i].R > out.rows[best].R)) best = i;
  if (best < 0) throw NoContactError("sweep_family: no successful rows");

  // local golden-section refinement of the family maximum around the best row
  double lo = best > 0 && out.rows[best - 1].status == "ok" ? out.rows[best - 1].r0
                                                           : out.rows[best].r0 - 1e-3;
  double hi = best + 1 < n && out.rows[best + 1].status == "ok" ? out.rows[best + 1].r0
                                                                : out.rows[best].r0 + 1e-3;
  auto safe_R = [](double r0) {
    try {
      return family_R(r0);
    } catch (...) {
      return -1.0;
    }
  };
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = safe_R(x1), f2 = safe_R(x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = safe_R(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = safe_R(x1);
    }
  }
  out.r0_at_Rbar = 0.5 * (lo + hi);
  out.Rbar = std::max({f1, f2, out.rows[best].R});
  return out;
}

double catenoid_t0() {
  double lo = 1.0, hi = 1.5;
  auto f = [](double t) { return t * std::tanh(t) - 1.0; };
  for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace caplab
