#pragma once
// Lawson polar dual x~ = eps*nu of a rotational annulus and the duality checks.
#include "caplab/surface_analysis.hpp"

namespace caplab {

struct DualSurface {
  int n_t = 0, n_s = 0;
  Eigen::VectorXd t_nodes, s_nodes;
  std::vector<Vec4> points;   // eps * nu
  std::vector<Vec4> normals;  // eps * x, re-orthonormalized against the dual tangents
  std::vector<Vec4> xt, xs;   // dual tangents via the shape operator
  Eigen::VectorXd Psi;        // |A|^2 / 2 per t-row
  CapParams dual_params;
  int eps = +1;
  // residual bookkeeping
  double metric_residual = 0;     // | <dx~_i, dx~_j> - Psi g_ij |
  double ortho_residual = 0;      // | <nu~, FD tangents> |
  double boundary_residual = 0;   // | <x~, e0> - cos R~ | on boundary rows
  double atilde_residual = 0;     // | <d nu~, d x~> - A |
  double psi_product_residual = 0;// | Psi~ Psi - 1 |
  int idx(int i, int j) const { return i * n_s + j; }
};

// (R~, gamma~) = (acos(-eps sin R cos gamma), asin(sin R sin gamma / sin R~)).
CapParams dual_params(const CapParams& p);

DualSurface dual_surface(const RotationalAnnulus& surf);

// Distance of the dual's dual to +-x; the dual normal is recomputed
// geometrically (orthogonal complement of the dual tangent frame).
double double_dual_check(const RotationalAnnulus& surf, const DualSurface& dual);

struct GaussMapReport {
  std::vector<Vec3> n;       // projected Gauss map lattice
  double min_abs_det = 0;    // over interior nodes
  double min_signed_det = 0;
  double boundary_match = 0; // max |n - nu| over boundary rows
};
GaussMapReport projected_gauss_map(const RotationalAnnulus& surf);

} // namespace caplab
