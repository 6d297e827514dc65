#pragma once
// Index forms QS / QA on rotational annuli: Fourier separation in s, 1D
// Robin-boundary eigenproblems in t, and the kernel / Jacobi-field residuals.
#include <cstdint>

#include "caplab/surface_analysis.hpp"

namespace caplab {

enum class FormKind { QS, QA };

struct SpectralProblem {
  const RotationalAnnulus* surf = nullptr;
  FormKind form = FormKind::QS;
  double kappa = 1.0;  // ambient curvature
  double robin = 0.0;  // boundary coefficient (QS: ct_kappa(R); QA: q)
  int mode_max = 16;
  int n_nodes = 256;
};
SpectralProblem make_problem(const RotationalAnnulus& surf, FormKind form, int mode_max,
                             int n_nodes);

struct ModeEigs {
  int k = 0;
  Eigen::VectorXd eigenvalues; // lowest few, ascending
};
struct SpectralReport {
  FormKind form = FormKind::QS;
  double kappa = 1, R = 0, gamma = 0, zero_tol = 0;
  int ind = 0, nul = 0, ind0 = 0, n_nodes = 0;
  std::vector<ModeEigs> modes;
};

// Bilinear form of Fourier mode k as a symmetric stiffness/mass pair
// (generalized eigenproblem K u = lambda M u, M = lumped L2 mass).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble(const SpectralProblem& prob, int k);

SpectralReport index_nullity(const SpectralProblem& prob, double zero_tol = 0.05);

// sup-norm residuals of (Delta + 2) x_i = 0 and d_eta x_i = cot(R) x_i,
// i in {1,2,3}, on a free-boundary annulus in S^3.
std::pair<double, double> coordinate_kernel_residual(const RotationalAnnulus& surf);
// Robin residual of the x0 profile with the same coefficient (not in the kernel).
double coordinate_x0_boundary_residual(const RotationalAnnulus& surf);

// u = <K x, nu> for rotation generator gen (1: axial e2e3; 2: e1e2; 3: e1e3);
// returns (interior Jacobi residual, boundary Robin residual).
std::pair<double, double> jacobi_residual(const RotationalAnnulus& surf, int gen);

// Discrete check of the conjugation identity between the weighted Jacobi
// operator (weight f_R) and the Jacobi operator of the conformal cap metric.
double weighted_operator_check(const RotationalAnnulus& surf, double R_weight, int trials,
                               std::uint64_t seed);

} // namespace caplab
