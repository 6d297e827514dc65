#pragma once
// Warped-product profiles, the radial curvature condition, the u_a identities
// in the ball model, the foliation derivative, and the weighted orthogonality
// integral.
#include <functional>
#include <string>

#include "caplab/surface_analysis.hpp"

namespace caplab {

struct WarpedProfile {
  std::function<double(double)> phi, phip, phipp; // phi(r) and derivatives
  Eigen::VectorXd r;                              // evaluation grid in (0, rbar]
  double rbar = 1.0;
  int n = 2; // surface dimension (ambient is n+1)
  std::string label = "Custom";
};

WarpedProfile space_form_profile(int npts, double rbar = 1.0);
WarpedProfile gaussian_profile(int npts, double rbar, int n = 2);
WarpedProfile custom_profile(std::function<double(double)> phi, std::function<double(double)> phip,
                             std::function<double(double)> phipp, int npts, double rbar,
                             const std::string& label = "Custom");

enum class AVerdict { StrictlyNegative, IdenticallyZero, Mixed };

struct ConditionAReport {
  Eigen::VectorXd values; // (phi'/r)' - r (phi'/r)^2 per node
  AVerdict verdict = AVerdict::Mixed;
};
ConditionAReport condition_A_eval(const WarpedProfile& prof);

struct RicciGapReport {
  Eigen::VectorXd gap; // radial minus tangential Ricci per node
  bool sign_agreement = false;
};
RicciGapReport ricci_radial_gap(const WarpedProfile& prof);

// Residuals of the minimal-surface coordinate identity u_a = e^phi x_a in the
// stereographic ball model of S^3: (interior, boundary Robin).
std::pair<double, double> ua_identity_check(const RotationalAnnulus& surf, const Vec3& a);

// Closed-form x0-derivative of the leaf graph of the conformal-translation
// foliation, evaluated at (s, r).
double foliation_derivative(double rbar, const WarpedProfile& prof, double s, double r);
// FD oracle: mean curvature of the translated equatorial disc at the point over
// radius r, in the metric e^{2 phi} delta, normal chosen toward +x0.
double foliation_leaf_mean_curvature(double rbar, const WarpedProfile& prof, double s, double r);

// |integral of H_f <K, nu> e^{-f}| over a surface meeting dB_{pi/2}
// orthogonally, with f = f_R; gen indexes the rotation generators fixing e0.
double killing_orthogonality(const MeasuredSurface& surf, int gen, double R);

struct ConformalHCheck {
  double formula = 0, fd = 0, residual = 0;
};
// Mean curvature of the centered r-sphere in (B, e^{2 phi} delta): conformal
// formula vs a normal-motion area-derivative computation.
ConformalHCheck conformal_hypersurface_check(double r, const WarpedProfile& prof, double h = 1e-4);

} // namespace caplab
