#include "caplab/spectral.hpp"

#include <cmath>
#include <random>

namespace caplab {

SpectralProblem make_problem(const RotationalAnnulus& surf, FormKind form, int mode_max,
                             int n_nodes) {
  SpectralProblem p;
  p.surf = &surf;
  p.form = form;
  p.kappa = surf.kappa();
  p.mode_max = mode_max;
  p.n_nodes = n_nodes;
  const double R = surf.contact.params.R;
  const double gamma = surf.contact.params.gamma;
  const double ct = ct_coefficient(p.kappa, R);
  if (form == FormKind::QS) {
    p.robin = ct;
  } else {
    // q = (1/sin g) k_S(nubar,nubar) - cot g * A(eta,eta); the cap sphere is umbilic
    p.robin = ct / std::sin(gamma);
    if (std::abs(gamma - M_PI / 2) > 1e-12)
      p.robin -= std::cos(gamma) / std::sin(gamma) * a_eta_eta(surf, true);
  }
  return p;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> assemble(const SpectralProblem& prob, int k) {
  const RotationalAnnulus& S = *prob.surf;
  if (std::abs(k) > prob.mode_max) throw AssemblyError("assemble: |k| > mode_max");
  const int n = S.n_t;
  const double h = S.dt();
  Eigen::VectorXd sg(n), w(n), V(n);
  for (int i = 0; i < n; ++i) {
    sg[i] = std::sqrt(S.gtt[i] * S.gss[i]);
    w[i] = sg[i] / S.gtt[i]; // g^tt sqrt(g)
    double pot = -2.0 * prob.kappa;
    if (prob.form == FormKind::QA) {
      const double kt = S.Att[i] / S.gtt[i], ks = S.Ass[i] / S.gss[i];
      pot = -(kt * kt + ks * ks) - 2.0 * prob.kappa;
    }
    V[i] = (static_cast<double>(k) * k / S.gss[i] + pot) * sg[i];
  }
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    const double c = 0.5 * (w[i] + w[i + 1]) / h;
    K(i, i) += c;
    K(i + 1, i + 1) += c;
    K(i, i + 1) -= c;
    K(i + 1, i) -= c;
  }
  for (int i = 0; i < n; ++i) {
    const double m = (i == 0 || i == n - 1) ? h / 2 : h;
    K(i, i) += V[i] * m;
    M(i, i) = sg[i] * m;
  }
  K(0, 0) -= prob.robin * std::sqrt(S.gss[0]);
  K(n - 1, n - 1) -= prob.robin * std::sqrt(S.gss[n - 1]);
  return {K, M};
}

namespace {

Eigen::VectorXd mode_eigenvalues(const SpectralProblem& prob, int k) {
  auto [K, M] = assemble(prob, k);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

} // namespace

SpectralReport index_nullity(const SpectralProblem& prob, double zero_tol) {
  const RotationalAnnulus& base = *prob.surf;
  const RotationalAnnulus coarse =
      base.n_t == prob.n_nodes ? base : rebuild(base, prob.n_nodes, base.n_s);
  const RotationalAnnulus fine = rebuild(base, 2 * prob.n_nodes, base.n_s);
  SpectralProblem pc = prob, pf = prob;
  pc.surf = &coarse;
  pf.surf = &fine;

  SpectralReport rep;
  rep.form = prob.form;
  rep.kappa = prob.kappa;
  rep.R = base.contact.params.R;
  rep.gamma = base.contact.params.gamma;
  rep.zero_tol = zero_tol;
  rep.n_nodes = prob.n_nodes;

  bool closed = false;
  std::vector<Eigen::VectorXd> all_c(prob.mode_max + 1), all_f(prob.mode_max + 1);
  int last_k = prob.mode_max;
  for (int k = 0; k <= prob.mode_max; ++k) {
    all_c[k] = mode_eigenvalues(pc, k);
    all_f[k] = mode_eigenvalues(pf, k);
    if (all_f[k][0] > std::max(1.0, zero_tol)) {
      closed = true;
      last_k = k;
      break;
    }
  }
  if (!closed)
    throw TruncationError("index_nullity: highest mode still contributes nonpositive eigenvalues");
  for (int k = 0; k <= last_k; ++k) {
    const int mult = k == 0 ? 1 : 2; // cos ks and sin ks
    const Eigen::VectorXd& lc = all_c[k];
    const Eigen::VectorXd& lf = all_f[k];
    ModeEigs me;
    me.k = k;
    me.eigenvalues = lf.head(std::min<int>(16, lf.size()));
    rep.modes.push_back(me);
    for (int i = 0; i < lf.size(); ++i) {
      const double v = lf[i];
      if (v > zero_tol) break;
      // a discrete eigenvalue counts as zero if it is at roundoff level, or if
      // refinement moved it toward 0 at >= first order
      const bool zero = std::abs(v) <= 1e-9 ||
                        (std::abs(v) <= zero_tol && std::abs(v) <= 0.75 * std::abs(lc[i]) + 1e-12);
      if (zero)
        rep.nul += mult;
      else if (v < 0)
        rep.ind += mult;
    }
  }
  rep.ind0 = rep.ind + rep.nul;
  return rep;
}

namespace {

// 1D separated surface Laplacian of profile U with Fourier mode k.
double lap1d(const RotationalAnnulus& S, const Eigen::VectorXd& U, int k, int i) {
  const double h = S.dt();
  auto w = [&](int q) { return std::sqrt(S.gtt[q] * S.gss[q]) / S.gtt[q]; };
  const double cp = 0.5 * (w(i) + w(i + 1));
  const double cm = 0.5 * (w(i) + w(i - 1));
  const double sg = std::sqrt(S.gtt[i] * S.gss[i]);
  return (cp * (U[i + 1] - U[i]) - cm * (U[i] - U[i - 1])) / (h * h * sg) -
         static_cast<double>(k) * k / S.gss[i] * U[i];
}

// outward normal derivative of a profile at the boundary, one-sided 2nd order
double d_eta_1d(const RotationalAnnulus& S, const Eigen::VectorXd& U, bool plus) {
  const double h = S.dt();
  const int n = static_cast<int>(U.size());
  if (plus)
    return (3 * U[n - 1] - 4 * U[n - 2] + U[n - 3]) / (2 * h) / std::sqrt(S.gtt[n - 1]);
  return -(-3 * U[0] + 4 * U[1] - U[2]) / (2 * h) / std::sqrt(S.gtt[0]);
}

} // namespace

std::pair<double, double> coordinate_kernel_residual(const RotationalAnnulus& S) {
  if (S.ambient != Ambient::Sphere)
    throw DomainError("coordinate_kernel_residual: spherical ambient only");
  const double cotR = std::cos(S.contact.params.R) / std::sin(S.contact.params.R);
  double res_int = 0, res_bnd = 0;
  Eigen::VectorXd U1(S.n_t), U23(S.n_t);
  for (int i = 0; i < S.n_t; ++i) {
    U1[i] = S.r[i] * std::sin(S.t_nodes[i]);           // x1, mode 0
    U23[i] = std::sqrt(1.0 - S.r[i] * S.r[i]);         // x2/x3 profile, mode 1
  }
  for (int i = 1; i < S.n_t - 1; ++i) {
    res_int = std::max(res_int, std::abs(lap1d(S, U1, 0, i) + 2 * U1[i]));
    res_int = std::max(res_int, std::abs(lap1d(S, U23, 1, i) + 2 * U23[i]));
  }
  for (bool plus : {false, true}) {
    const int ib = plus ? S.n_t - 1 : 0;
    res_bnd = std::max(res_bnd, std::abs(d_eta_1d(S, U1, plus) - cotR * U1[ib]));
    res_bnd = std::max(res_bnd, std::abs(d_eta_1d(S, U23, plus) - cotR * U23[ib]));
  }
  return {res_int, res_bnd};
}

double coordinate_x0_boundary_residual(const RotationalAnnulus& S) {
  const double cotR = std::cos(S.contact.params.R) / std::sin(S.contact.params.R);
  Eigen::VectorXd U0(S.n_t);
  for (int i = 0; i < S.n_t; ++i) U0[i] = S.r[i] * std::cos(S.t_nodes[i]);
  double res = 0;
  for (bool plus : {false, true})
    res = std::max(res, std::abs(d_eta_1d(S, U0, plus) - cotR * U0[plus ? S.n_t - 1 : 0]));
  return res;
}

namespace {

// 2D lattice Laplacian for the (s-independent, diagonal) annulus metric
double lap2d(const RotationalAnnulus& S, const Eigen::VectorXd& u, int i, int j) {
  const double ht = S.dt(), hs = S.ds();
  const int ns = S.n_s;
  auto at = [&](int ii, int jj) { return u[S.idx(ii, (jj % ns + ns) % ns)]; };
  auto w = [&](int q) { return std::sqrt(S.gtt[q] * S.gss[q]) / S.gtt[q]; };
  const double cp = 0.5 * (w(i) + w(i + 1));
  const double cm = 0.5 * (w(i) + w(i - 1));
  const double sg = std::sqrt(S.gtt[i] * S.gss[i]);
  const double tt = (cp * (at(i + 1, j) - at(i, j)) - cm * (at(i, j) - at(i - 1, j))) /
                    (ht * ht * sg);
  const double ss = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (hs * hs * S.gss[i]);
  return tt + ss;
}

} // namespace

std::pair<double, double> jacobi_residual(const RotationalAnnulus& S, int gen) {
  if (S.ambient != Ambient::Sphere) throw DomainError("jacobi_residual: spherical ambient only");
  if (std::abs(S.contact.params.gamma - M_PI / 2) > 1e-9)
    throw DomainError("jacobi_residual: requires a free-boundary surface");
  if (gen < 1 || gen > 3) throw DomainError("jacobi_residual: generator index in {1,2,3}");
  if (gen == 1) return {0.0, 0.0}; // axial e2e3-rotation: u = <Kx, nu> vanishes identically
  // Both transverse generators give u = U(t) * {cos s | sin s} with the same
  // profile, so the residual separates into the k = 1 Fourier mode exactly.
  Eigen::VectorXd U(S.n_t);
  for (int i = 0; i < S.n_t; ++i) {
    const double t = S.t_nodes[i];
    const double w = std::sqrt(1.0 - S.r[i] * S.r[i]);
    U[i] = S.r[i] * S.nc[i] * std::sin(t) -
           w * (S.na[i] * std::sin(t) - S.nb[i] * std::cos(t));
  }
  const double q_robin = std::cos(S.contact.params.R) / std::sin(S.contact.params.R);
  double res_int = 0, res_bnd = 0;
  for (int i = 1; i < S.n_t - 1; ++i) {
    const double kt = S.Att[i] / S.gtt[i], ks = S.Ass[i] / S.gss[i];
    const double pot = kt * kt + ks * ks + 2.0;
    res_int = std::max(res_int, std::abs(lap1d(S, U, 1, i) + pot * U[i]));
  }
  for (bool plus : {false, true}) {
    const int ib = plus ? S.n_t - 1 : 0;
    res_bnd = std::max(res_bnd, std::abs(d_eta_1d(S, U, plus) - q_robin * U[ib]));
  }
  return {res_int, res_bnd};
}

double weighted_operator_check(const RotationalAnnulus& S, double R_weight, int trials,
                               std::uint64_t seed) {
  if (S.ambient != Ambient::Sphere)
    throw DomainError("weighted_operator_check: spherical ambient only");
  const int nt = S.n_t, ns = S.n_s, N = nt * ns;
  const double cR = std::cos(R_weight);
  // radial weight data per t-row
  Eigen::VectorXd phi(nt), eph(nt), dphi_t(nt), hess_phi_nu(nt), lap_phi(nt), dphi_nu(nt),
      grad_phi2(nt), A2(nt);
  for (int i = 0; i < nt; ++i) {
    const double t = S.t_nodes[i];
    const double x0 = S.r[i] * std::cos(t);
    const double rho = std::acos(clamp1(x0));
    const double srho = std::sin(rho), crho = std::cos(rho);
    const double den = 1.0 + cR * crho;
    phi[i] = -std::log(den);
    eph[i] = 1.0 / den;
    const double php = cR * srho / den;                       // phi'(rho)
    const double phpp = (cR * crho + cR * cR) / (den * den);  // phi''(rho)
    const double rho_t = -(S.rp[i] * std::cos(t) - S.r[i] * std::sin(t)) / srho;
    dphi_t[i] = php * rho_t;
    const double n0 = S.na[i] * std::cos(t) + S.nb[i] * std::sin(t);
    const double nu_rho = -n0 / srho; // <nu, d_rho>
    dphi_nu[i] = php * nu_rho;
    hess_phi_nu[i] = phpp * nu_rho * nu_rho + php * (crho / srho) * (1.0 - nu_rho * nu_rho);
    lap_phi[i] = phpp + 2.0 * (crho / srho) * php;
    grad_phi2[i] = php * php;
    const double kt = S.Att[i] / S.gtt[i], ks = S.Ass[i] / S.gss[i];
    A2[i] = kt * kt + ks * ks;
  }
  // closed-form drift of the Laplace-Beltrami operator,
  // Delta F = g^tt F_tt + b F_t + F_ss / g_ss with b = d_t(sqrt(g) g^tt)/sqrt(g)
  Eigen::VectorXd bcoef(nt);
  for (int i = 0; i < nt; ++i) {
    const double r = S.r[i], rp = S.rp[i];
    const double rpp = ode_rhs(S.t_nodes[i], r, rp).second;
    const double w2 = 1.0 - r * r;
    const double gss = w2, gtt = r * r + rp * rp / w2;
    const double gss_t = -2.0 * r * rp;
    const double gtt_t = 2.0 * r * rp + (2.0 * rp * rpp * w2 + 2.0 * r * rp * rp * rp) / (w2 * w2);
    bcoef[i] = (gss_t / gss - gtt_t / gtt) / (2.0 * gtt);
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double tb = S.contact.t_plus;
  double worst = 0;
  for (int trial = 0; trial < trials; ++trial) {
    // low-order Fourier-polynomial test field
    double coef[4][5];
    for (auto& row : coef)
      for (double& c : row) c = unif(rng);
    Eigen::VectorXd u(N), v(N); // v = e^phi u
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < ns; ++j) {
        const double tau = S.t_nodes[i] / tb, s = S.s_nodes[j];
        double acc = 0, tp = 1;
        for (int m = 0; m < 4; ++m) {
          acc += tp * (coef[m][0] + coef[m][1] * std::cos(s) + coef[m][2] * std::sin(s) +
                       coef[m][3] * std::cos(2 * s) + coef[m][4] * std::sin(2 * s));
          tp *= tau;
        }
        u[S.idx(i, j)] = acc;
        v[S.idx(i, j)] = eph[i] * acc;
      }
    const double ht = S.dt(), hs = S.ds();
    // 4th-order t-stencils (the s-difference errors cancel between the two
    // sides because phi is s-independent)
    auto lap = [&](const Eigen::VectorXd& F, int i, int j) {
      auto at = [&](int ii, int jj) { return F[S.idx(ii, (jj % ns + ns) % ns)]; };
      const double Ft =
          (-at(i + 2, j) + 8 * at(i + 1, j) - 8 * at(i - 1, j) + at(i - 2, j)) / (12 * ht);
      const double Ftt = (-at(i + 2, j) + 16 * at(i + 1, j) - 30 * at(i, j) + 16 * at(i - 1, j) -
                          at(i - 2, j)) /
                         (12 * ht * ht);
      const double Fss = (at(i, j + 1) - 2 * at(i, j) + at(i, j - 1)) / (hs * hs);
      return Ftt / S.gtt[i] + bcoef[i] * Ft + Fss / S.gss[i];
    };
    for (int i = 2; i < nt - 2; ++i)
      for (int j = 0; j < ns; ++j) {
        const int q = S.idx(i, j);
        // conformal side: e^phi [ e^{-2phi} Delta v + (|A~|^2 + Ric~(nu~,nu~)) v ]
        const double e2 = eph[i] * eph[i];
        const double ricci_t =
            (2.0 - (hess_phi_nu[i] - dphi_nu[i] * dphi_nu[i]) - (lap_phi[i] + grad_phi2[i])) /
            e2;
        const double a2_t = (A2[i] + 2.0 * dphi_nu[i] * dphi_nu[i]) / e2;
        const double lhs = eph[i] * ((lap(v, i, j) / e2) + (a2_t + ricci_t) * v[q]);
        // weighted side: Delta u - g^tt f' u_t + (|A|^2 + 2 + Hess f(nu,nu)) u, f = -2 phi
        const double ut =
            (-u[S.idx(i + 2, j)] + 8 * u[S.idx(i + 1, j)] - 8 * u[S.idx(i - 1, j)] +
             u[S.idx(i - 2, j)]) /
            (12 * ht);
        const double hess_f = -2.0 * hess_phi_nu[i];
        // The pure conjugation identity holds on f-minimal inputs; on a
        // round-minimal input the weighted mean curvature H_f = 2 d_nu(phi)
        // survives and contributes H_f^2/2 to the potential.
        const double hf2 = 2.0 * dphi_nu[i] * dphi_nu[i];
        const double rhs = lap(u, i, j) - (1.0 / S.gtt[i]) * (-2.0 * dphi_t[i]) * ut +
                           (A2[i] + 2.0 + hess_f + hf2) * u[q];
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  }
  return worst;
}

} // namespace caplab
