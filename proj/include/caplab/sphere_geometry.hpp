#pragma once
// Points, tangent vectors and conformal maps on S^3 and on Euclidean balls.
#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "caplab/errors.hpp"

namespace caplab {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

inline double clamp1(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }

// Unit 4-vector in ambient R^4; constructor renormalizes to absorb roundoff.
struct SpherePoint {
  Vec4 x;
  SpherePoint() : x(1, 0, 0, 0) {}
  explicit SpherePoint(const Vec4& v) : x(v.normalized()) {}
  SpherePoint(double a, double b, double c, double d) : x(Vec4(a, b, c, d).normalized()) {}
  double operator[](int i) const { return x[i]; }
};

inline SpherePoint e0() { return SpherePoint(1, 0, 0, 0); }

// Vector attached to a base point; construction projects out any normal
// component (must already be < 1e-9 to be meaningful).
struct TangentVector {
  SpherePoint base;
  Vec4 vec;
  TangentVector(const SpherePoint& p, const Vec4& v) : base(p), vec(v - v.dot(p.x) * p.x) {}
};

// Contact data of an (R, gamma)-minimal surface: ball radius, contact angle,
// dual sign, and the cap-model curvature kappa = sin^2 R.
struct CapParams {
  double R = M_PI / 2;
  double gamma = M_PI / 2;
  int epsilon = +1;
  double kappa = 1.0;
  CapParams() = default;
  CapParams(double R_, double gamma_, int eps) : R(R_), gamma(gamma_), epsilon(eps) {
    if (!(R > 0 && R < M_PI)) throw DomainError("CapParams: R out of (0, pi)");
    if (!(gamma > 0 && gamma <= M_PI / 2 + 1e-12)) throw DomainError("CapParams: gamma out of (0, pi/2]");
    kappa = std::sin(R) * std::sin(R);
  }
};

double geodesic_distance(const SpherePoint& p, const SpherePoint& q);

// Forward stereographic projection S^3\{-e0} -> R^3, y = (x - x0 e0)/(1 + x0).
Vec3 stereographic(const SpherePoint& p);
SpherePoint stereographic_inv(const Vec3& y);
// Differential of the forward projection at p applied to ambient tangent v.
Vec3 stereographic_push(const SpherePoint& p, const Vec4& v);

// Conformal dilation fixing e0 that carries dB_R onto dB_{pi/2}.
SpherePoint conformal_dilation(double R, const SpherePoint& p);

struct ConformalTranslation {
  Vec3 value;        // Phi_y(x)
  double abs2;       // |Phi_y(x)|^2 from the closed form
  double pullback;   // conformal factor of Phi_y* delta at x
};
ConformalTranslation conformal_translation(const Vec3& y, double rbar, const Vec3& x);

// (h_R(rho), f_R(rho)) with h = 1/(1 + cos R cos rho), f = -n log h.
std::pair<double, double> cap_weight(double R, double rho, int n);

// Curvature of the geodesic sphere of radius R in the space form of curvature kappa.
double ct_coefficient(double kappa, double R);

} // namespace caplab
