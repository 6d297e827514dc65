#pragma once
// Sampled rotational annuli: fundamental forms, boundary relations, Hopf
// constancy, graph/constraint/slice checks, and normal-graph perturbations.
#include <vector>

#include <Eigen/Dense>

#include "caplab/rotational_solver.hpp"

namespace caplab {

enum class Ambient { Sphere, Euclid }; // kappa = 1 or 0

struct RotationalAnnulus {
  ProfileSolution profile;
  ContactData contact;
  Ambient ambient = Ambient::Sphere;
  int n_t = 0, n_s = 0;
  Eigen::VectorXd t_nodes, s_nodes;
  // per-t quantities (rotational symmetry; A_ts = 0 identically)
  Eigen::VectorXd r, rp, gtt, gss, Att, Ass;
  Eigen::VectorXd na, nb, nc, nap, nbp, ncp; // normal components and t-derivatives
  // row-major lattices, index i*n_s + j
  std::vector<Vec4> points, normals;
  double fd_deviation = 0; // assembly-time cross-validation against lattice FD

  double kappa() const { return ambient == Ambient::Sphere ? 1.0 : 0.0; }
  int idx(int i, int j) const { return i * n_s + j; }
  double ds() const { return 2 * M_PI / n_s; }
  double dt() const { return t_nodes[1] - t_nodes[0]; }
};

RotationalAnnulus build_annulus(const ProfileSolution& prof, const ContactData& contact,
                                int n_t, int n_s);
// The free-boundary catenoid in the Euclidean unit ball (t0 tanh t0 = 1).
RotationalAnnulus critical_catenoid(int n_t = 256, int n_s = 64);
// Same surface at a different resolution (re-evaluates the profile).
RotationalAnnulus rebuild(const RotationalAnnulus& surf, int n_t, int n_s);

// Closed-form coordinate tangents of the sampled embedding at a lattice node.
Vec4 surf_xt(const RotationalAnnulus& surf, int i, int j);
Vec4 surf_xs(const RotationalAnnulus& surf, int i, int j);

struct BoundaryReport {
  double rel[5] = {0, 0, 0, 0, 0}; // residuals of the five boundary relations
  double max_residual = 0;
};
BoundaryReport boundary_relations_check(const RotationalAnnulus& surf);

double a_eta_eta(const RotationalAnnulus& surf, bool plus_boundary);

struct HopfReport {
  double max = 0, min = 0, spread = 0; // spread = (max-min)/max
};
HopfReport hopf_constancy(const RotationalAnnulus& surf);

struct RadialGraphReport {
  bool is_graph = false;
  double min_abs_nu0 = 0; // over interior rows
};
RadialGraphReport radial_graph_check(const RotationalAnnulus& surf);

struct ConstrainedReport {
  bool constrained = false;
  double min_x0 = 0;
  double max_rho = 0;
};
ConstrainedReport constrained_check(const RotationalAnnulus& surf);

// Connected components of {x_a > 0} and {x_a < 0} (4-neighbor, s-periodic).
std::pair<int, int> two_piece_slices(const RotationalAnnulus& surf, const Vec4& a);

double green_identity_check(const RotationalAnnulus& surf, const Vec4& a);

// Generic lattice surface with geometry measured purely by finite differences.
struct MeasuredSurface {
  Ambient ambient = Ambient::Sphere;
  int n_t = 0, n_s = 0;
  Eigen::VectorXd t_nodes, s_nodes;
  std::vector<Vec4> points, normals, xt, xs;
  Eigen::VectorXd g11, g12, g22, A11, A12, A22, H;
  int idx(int i, int j) const { return i * n_s + j; }
  double ds() const { return 2 * M_PI / n_s; }
  double dt() const { return t_nodes[1] - t_nodes[0]; }
};
MeasuredSurface measure_lattice(const std::vector<Vec4>& points, const Eigen::VectorXd& t_nodes,
                                const Eigen::VectorXd& s_nodes, Ambient ambient,
                                const std::vector<Vec4>* ref_normals = nullptr);

HopfReport hopf_constancy(const MeasuredSurface& surf);
double max_mean_curvature(const MeasuredSurface& surf);

struct NormalGraphResult {
  MeasuredSurface surface;
  double boundary_offset = 0;   // max |x0| on boundary rows (stay on dB_{pi/2})
  double contact_residual = 0;  // max |<nu_u, d_rho>| on boundary rows
};
// x_u = cos(u) x + sin(u) nu over a free-boundary base in dB_{pi/2};
// u is a lattice field (n_t*n_s) with Neumann boundary rows.
NormalGraphResult normal_graph(const RotationalAnnulus& surf, const Eigen::VectorXd& u);

} // namespace caplab
