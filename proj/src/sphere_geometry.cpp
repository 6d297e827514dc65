#include "caplab/sphere_geometry.hpp"

namespace caplab {

double geodesic_distance(const SpherePoint& p, const SpherePoint& q) {
  return std::acos(clamp1(p.x.dot(q.x)));
}

Vec3 stereographic(const SpherePoint& p) {
  const double x0 = p.x[0];
  if (x0 <= -1.0 + 1e-9) throw PoleError("stereographic: point at/near -e0");
  return Vec3(p.x[1], p.x[2], p.x[3]) / (1.0 + x0);
}

SpherePoint stereographic_inv(const Vec3& y) {
  const double y2 = y.squaredNorm();
  const double d = 1.0 + y2;
  return SpherePoint(Vec4((1.0 - y2) / d, 2 * y[0] / d, 2 * y[1] / d, 2 * y[2] / d));
}

Vec3 stereographic_push(const SpherePoint& p, const Vec4& v) {
  const double x0 = p.x[0];
  if (x0 <= -1.0 + 1e-9) throw PoleError("stereographic_push: point at/near -e0");
  const Vec3 vperp(v[1], v[2], v[3]);
  const Vec3 y(p.x[1], p.x[2], p.x[3]);
  return vperp / (1.0 + x0) - v[0] / ((1.0 + x0) * (1.0 + x0)) * y;
}

SpherePoint conformal_dilation(double R, const SpherePoint& p) {
  if (!(R > 0 && R < M_PI)) throw DomainError("conformal_dilation: R out of (0, pi)");
  const double lam = std::tan(M_PI / 4) / std::tan(R / 2);
  return stereographic_inv(lam * stereographic(p));
}

ConformalTranslation conformal_translation(const Vec3& y, double rbar, const Vec3& x) {
  const double y2 = y.squaredNorm();
  const double r2 = rbar * rbar;
  if (y2 >= r2) throw DomainError("conformal_translation: |y| >= rbar");
  if (x.squaredNorm() > r2 * (1 + 1e-12)) throw DomainError("conformal_translation: |x| > rbar");
  const double xy = x.dot(y);
  const double x2 = x.squaredNorm();
  const double den = r2 * r2 + 2 * r2 * xy + x2 * y2;
  ConformalTranslation out;
  out.value = r2 * ((r2 + 2 * xy + x2) * y + (r2 - y2) * x) / den;
  out.abs2 = r2 * r2 * (x + y).squaredNorm() / den;
  const double fac = r2 * (r2 - y2) / den;
  out.pullback = fac * fac;
  return out;
}

std::pair<double, double> cap_weight(double R, double rho, int n) {
  const double d = 1.0 + std::cos(R) * std::cos(rho);
  if (d <= 0) throw DomainError("cap_weight: 1 + cos R cos rho <= 0");
  return {1.0 / d, n * std::log(d)};
}

double ct_coefficient(double kappa, double R) {
  if (R <= 0) throw DomainError("ct_coefficient: R <= 0");
  if (kappa > 0) {
    const double a = R * std::sqrt(kappa);
    if (std::abs(std::sin(a)) < 1e-14) throw DomainError("ct_coefficient: R*sqrt(kappa) at multiple of pi");
    return std::sqrt(kappa) * std::cos(a) / std::sin(a);
  }
  if (kappa == 0) return 1.0 / R;
  const double a = R * std::sqrt(-kappa);
  return std::sqrt(-kappa) / std::tanh(a);
}

} // namespace caplab
