#pragma once
// Rotational minimal-annulus profile ODE in S^3: integration, contact
// detection against dB_R, and the r0-sweep of the family.
#include <string>
#include <vector>

#include "caplab/sphere_geometry.hpp"

namespace caplab {

struct IntegratorMeta {
  std::string method = "dopri5";
  double tol = 1e-11;
  double max_step = 0.05;
  double dt_sample = 0.002;
};

// Samples of (t, r, r') on a uniform grid t >= 0; even reflection covers t < 0.
struct ProfileSolution {
  std::vector<double> t_grid, r, rp;
  double r0 = 0;
  IntegratorMeta meta;

  double t_end() const { return t_grid.empty() ? 0.0 : t_grid.back(); }
  // Quintic-Hermite dense evaluation (endpoint second derivatives from the ODE).
  void eval(double t, double& r_out, double& rp_out) const;
};

// rhs of r(1-r^2) r'' = (1-2r^2)(2 r'^2 + r^2(1-r^2)); throws SingularityError
// when the band guard r(1-r^2) < 1e-8 trips.
std::pair<double, double> ode_rhs(double t, double r, double rp);

ProfileSolution integrate_profile(double r0, double t_max, double tol = 1e-11);

SpherePoint embed(const ProfileSolution& prof, double s, double t);

// nu0 = <nu, e0> = [r(1-r^2)cos t + r' sin t] / sqrt(r'^2 + r^2(1-r^2)).
double nu0(const ProfileSolution& prof, double t);
double nu0_from_state(double t, double r, double rp);
// d/dt nu0 closed form r^2 (r' cos t - r sin t) / sqrt(r'^2 + r^2(1-r^2)).
double nu0_t_from_state(double t, double r, double rp);

// Pointwise fundamental forms of the rotational embedding as functions of the
// profile state (independent of s; A_ts = 0).
struct ProfileForms {
  double gtt, gss;     // induced metric, diagonal
  double Att, Ass;     // second fundamental form, A(X,Y) = <dX nu, Y>
  double D;            // sqrt(r'^2 + r^2(1-r^2))
  double a, b, c;      // normal components: nu = (a cos t + b sin t, a sin t - b cos t, c cos s, c sin s)
  double ap, bp, cp;   // t-derivatives of a, b, c
};
ProfileForms profile_forms(double t, double r, double rp);

struct ContactData {
  double t_plus = 0;       // symmetric truncation, t_minus = -t_plus
  CapParams params;
  double x0_boundary = 0;  // cos R
  int orient = +1;         // sign making <nu, d_rho> = cos gamma >= 0 on the boundary
};

ContactData find_free_boundary(const ProfileSolution& prof);
ContactData find_capillary_boundary(const ProfileSolution& prof, double t_b);

struct SweepRow {
  double r0 = 0, R = 0, t_plus = 0;
  std::string status = "ok";
};
struct SweepResult {
  std::vector<SweepRow> rows;
  double Rbar = 0;       // max R over successful rows, refined locally
  double r0_at_Rbar = 0;
};
SweepResult sweep_family(const std::vector<double>& r0_grid, bool parallel = true);

// Root of t tanh t = 1 (critical-catenoid truncation), by bisection on [1, 1.5].
double catenoid_t0();

} // namespace caplab
