// caplab: rotational minimal annuli in spherical caps — solver, polar duals,
// index forms, property verification, and figure generation.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "caplab/conformal_lab.hpp"
#include "caplab/polar_dual.hpp"
#include "caplab/reporting.hpp"
#include "caplab/spectral.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace caplab;

namespace {

constexpr double kTMax = 8.0;

struct Solved {
  ProfileSolution profile;
  ContactData contact;
  double r0 = 0;
};

Solved solve_r0(double r0, double tol) {
  Solved s;
  s.profile = integrate_profile(r0, kTMax, tol);
  s.contact = find_free_boundary(s.profile);
  s.r0 = r0;
  return s;
}

// R(r0) evaluated through the free-boundary contact; throws NoContactError
double R_of_r0(double r0, double tol) { return solve_r0(r0, tol).contact.params.R; }

// Walk r0 downward (mirroring the family parameter) and collect target radii
// in encounter order; each bracket is refined by bisection.
std::vector<double> descending_grid() {
  std::vector<double> g;
  for (double r0 = 0.9994; r0 > 0.045; r0 -= (r0 > 0.98 ? 0.0005 : 0.005)) g.push_back(r0);
  return g;
}

std::optional<double> refine_target(double lo, double hi, double Rt, double tol) {
  // bisection on r0 in [lo, hi] (R continuous on the bracket)
  double flo = R_of_r0(lo, tol) - Rt;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = R_of_r0(mid, tol) - Rt;
    if (std::abs(fm) < 1e-9) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (std::abs(hi - lo) < 1e-13) break;
  }
  const double mid = 0.5 * (lo + hi);
  if (std::abs(R_of_r0(mid, tol) - Rt) < 1e-6) return mid;
  return std::nullopt;
}

double solve_target_r0(double Rt, double tol) {
  const auto grid = descending_grid();
  double prev_r0 = grid[0];
  double prev_R;
  try {
    prev_R = R_of_r0(prev_r0, tol);
  } catch (const std::exception&) {
    prev_R = -1;
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    double Rcur;
    try {
      Rcur = R_of_r0(grid[i], tol);
    } catch (const std::exception&) {
      prev_R = -1;
      prev_r0 = grid[i];
      continue;
    }
    if (prev_R > 0 && (prev_R - Rt) * (Rcur - Rt) <= 0)
      if (auto r0 = refine_target(prev_r0, grid[i], Rt, tol)) return *r0;
    prev_R = Rcur;
    prev_r0 = grid[i];
  }
  throw NoContactError("no r0 in the sweep range attains R = " + fmt17(Rt));
}

void write_surface_files(const fs::path& out, const Solved& s, RunManifest& man, int n_t,
                         int n_s) {
  const auto surf = build_annulus(s.profile, s.contact, n_t, n_s);
  const std::string prof_csv = profile_csv(s.profile);
  const std::string surf_csv = lattice_csv(surf);
  const std::string cjson = contact_json(s.contact);
  const std::string hjson = surface_header_json(surf);
  atomic_write(out / "profile.csv", prof_csv);
  atomic_write(out / "surface.csv", surf_csv);
  atomic_write(out / "contact.json", cjson);
  atomic_write(out / "surface.json", hjson);
  for (const char* f : {"profile.csv", "surface.csv", "contact.json", "surface.json"})
    man.outputs.push_back((out / f).string());
  man.input_hashes.emplace_back("surface.csv", hash_hex(surf_csv));
  man.residuals.emplace_back("fd_deviation", surf.fd_deviation);
}

void finish_manifest(const fs::path& out, RunManifest& man) {
  man.timestamp = now_iso8601();
  man.outputs.push_back((out / "manifest.json").string());
  atomic_write(out / "manifest.json", manifest_json(man));
}

// profile curve (x0, x1) = (r cos t, r sin t), t in [-t_b, t_b]
std::vector<std::pair<double, double>> profile_curve(const Solved& s) {
  std::vector<std::pair<double, double>> pts;
  const int n = 257;
  for (int i = 0; i < n; ++i) {
    const double t = -s.contact.t_plus + 2.0 * s.contact.t_plus * i / (n - 1);
    double r, rp;
    s.profile.eval(t, r, rp);
    pts.emplace_back(r * std::cos(t), r * std::sin(t));
  }
  return pts;
}

// dual profile curve (nu0, nu1) with the boundary orientation sign
std::vector<std::pair<double, double>> dual_profile_curve(const Solved& s) {
  std::vector<std::pair<double, double>> pts;
  const int n = 257;
  const int sg = s.contact.orient * s.contact.params.epsilon;
  for (int i = 0; i < n; ++i) {
    const double t = -s.contact.t_plus + 2.0 * s.contact.t_plus * i / (n - 1);
    double r, rp;
    s.profile.eval(t, r, rp);
    const auto F = profile_forms(t, r, rp);
    const double n0 = F.a * std::cos(t) + F.b * std::sin(t);
    const double n1 = F.a * std::sin(t) - F.b * std::cos(t);
    pts.emplace_back(sg * n0, sg * n1);
  }
  return pts;
}

std::string panel_svg(const std::vector<std::pair<double, double>>& curve, double chord_x0,
                      const std::string& label) {
  const double W = 400, H = 400;
  auto X = [&](double x) { return W / 2 + x * (W / 2.4); };
  auto Y = [&](double y) { return H / 2 - y * (H / 2.4); };
  SvgCanvas svg(W, H);
  svg.circle(W / 2, H / 2, W / 2.4, "black", 1.0);
  // cap boundary: chord x0 = const of the unit disc
  if (std::abs(chord_x0) < 1.0) {
    const double half = std::sqrt(1.0 - chord_x0 * chord_x0);
    svg.line(X(chord_x0), Y(-half), X(chord_x0), Y(half), "gray", 1.0, /*dashed=*/true);
  }
  std::vector<std::pair<double, double>> mapped;
  mapped.reserve(curve.size());
  for (auto [x, y] : curve) mapped.emplace_back(X(x), Y(y));
  svg.polyline(mapped, "crimson", 1.5);
  svg.text(10, 20, label, 14);
  return svg.str();
}

int cmd_solve(const std::optional<double>& r0_opt, const std::optional<double>& targetR,
              double tol, const std::string& out_dir, const std::vector<std::string>& argv_echo) {
  const fs::path out(out_dir);
  Solved s = r0_opt ? solve_r0(*r0_opt, tol) : solve_r0(solve_target_r0(*targetR, tol), tol);
  RunManifest man;
  man.command = "solve";
  man.args = argv_echo;
  man.tolerances.emplace_back("tol", tol);
  write_surface_files(out, s, man, 256, 64);
  finish_manifest(out, man);
  std::printf("solve: r0=%s R=%s gamma=%s t_plus=%s\n", fmt17(s.r0).c_str(),
              fmt17(s.contact.params.R).c_str(), fmt17(s.contact.params.gamma).c_str(),
              fmt17(s.contact.t_plus).c_str());
  return 0;
}

int cmd_sweep(double lo, double hi, int count, bool serial, const std::string& out_dir,
              const std::vector<std::string>& argv_echo) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = lo + (hi - lo) * i / (count - 1);
  const auto res = sweep_family(grid, !serial);
  const fs::path out(out_dir);
  RunManifest man;
  man.command = "sweep";
  man.args = argv_echo;
  const std::string csv = sweep_csv(res.rows);
  atomic_write(out / "sweep.csv", csv);
  man.outputs.push_back((out / "sweep.csv").string());
  man.input_hashes.emplace_back("sweep.csv", hash_hex(csv));
  man.residuals.emplace_back("Rbar", res.Rbar);
  man.residuals.emplace_back("r0_at_Rbar", res.r0_at_Rbar);
  finish_manifest(out, man);
  std::printf("sweep: %zu rows, Rbar=%s at r0=%s\n", res.rows.size(), fmt17(res.Rbar).c_str(),
              fmt17(res.r0_at_Rbar).c_str());
  return 0;
}

int cmd_dual(const std::optional<double>& r0_opt, const std::optional<double>& targetR,
             double tol, const std::string& out_dir, const std::vector<std::string>& argv_echo) {
  const fs::path out(out_dir);
  Solved s = r0_opt ? solve_r0(*r0_opt, tol) : solve_r0(solve_target_r0(*targetR, tol), tol);
  const auto surf = build_annulus(s.profile, s.contact, 256, 64);
  const auto dual = dual_surface(surf);
  RunManifest man;
  man.command = "dual";
  man.args = argv_echo;
  man.tolerances.emplace_back("tol", tol);
  const std::string base_csv = lattice_csv(surf);
  const std::string dual_csv = lattice_csv(dual, surf);
  atomic_write(out / "surface.csv", base_csv);
  atomic_write(out / "surface.json", surface_header_json(surf));
  atomic_write(out / "dual.csv", dual_csv);
  atomic_write(out / "dual.json", dual_header_json(dual, hash_hex(base_csv)));
  for (const char* f : {"surface.csv", "surface.json", "dual.csv", "dual.json"})
    man.outputs.push_back((out / f).string());
  man.input_hashes.emplace_back("surface.csv", hash_hex(base_csv));
  man.input_hashes.emplace_back("dual.csv", hash_hex(dual_csv));
  man.residuals.emplace_back("metric_residual", dual.metric_residual);
  man.residuals.emplace_back("boundary_residual", dual.boundary_residual);
  man.residuals.emplace_back("psi_product_residual", dual.psi_product_residual);
  finish_manifest(out, man);
  std::printf("dual: R~=%s gamma~=%s eps=%d\n", fmt17(dual.dual_params.R).c_str(),
              fmt17(dual.dual_params.gamma).c_str(), dual.eps);
  return 0;
}

int cmd_spectrum(const std::string& surface, const std::string& form_name, int modes, int nodes,
                 const std::string& out_file, const std::vector<std::string>& argv_echo) {
  RotationalAnnulus surf;
  if (surface == "clifford") {
    const auto s = solve_r0(1.0 / std::sqrt(2.0), 1e-11);
    surf = build_annulus(s.profile, s.contact, nodes, 32);
  } else if (surface == "catenoid") {
    surf = critical_catenoid(nodes, 32);
  } else {
    std::ifstream in(surface);
    if (!in) throw DomainError("spectrum: cannot open surface header " + surface);
    json j = json::parse(in);
    if (j.value("kind", "") == "rotational_annulus" && j.value("ambient", "") == "euclid") {
      surf = critical_catenoid(nodes, 32);
    } else {
      const double r0 = j.at("r0").get<double>();
      const auto s = solve_r0(r0, 1e-11);
      surf = build_annulus(s.profile, s.contact, nodes, 32);
    }
  }
  const FormKind form = form_name == "QA" ? FormKind::QA : FormKind::QS;
  const auto prob = make_problem(surf, form, modes, nodes);
  const auto rep = index_nullity(prob);
  const std::string rjson = spectral_report_json(rep);
  if (!out_file.empty()) {
    atomic_write(out_file, rjson);
    RunManifest man;
    man.command = "spectrum";
    man.args = argv_echo;
    man.outputs.push_back(out_file);
    man.input_hashes.emplace_back("report", hash_hex(rjson));
    man.residuals.emplace_back("ind", rep.ind);
    man.residuals.emplace_back("nul", rep.nul);
    man.timestamp = now_iso8601();
    atomic_write(fs::path(out_file).parent_path() / "manifest.json", manifest_json(man));
  }
  std::fputs(rjson.c_str(), stdout);
  return 0;
}

int cmd_figure1(const std::string& out_dir, const std::vector<std::string>& argv_echo) {
  const fs::path out(out_dir);
  const double tol = 1e-11;
  const std::vector<double> targets = {0.22, 0.98, M_PI / 2, 1.95, 1.84};
  // walk r0 downward and take each caption radius at its next bracketing,
  // so repeated radii resolve to successive branches of the family
  const auto grid = descending_grid();
  std::vector<double> r0s;
  size_t gi = 1;
  double prev_R = R_of_r0(grid[0], tol), prev_r0 = grid[0];
  for (double Rt : targets) {
    bool found = false;
    for (; gi < grid.size() && !found; ++gi) {
      const double Rcur = R_of_r0(grid[gi], tol);
      if ((prev_R - Rt) * (Rcur - Rt) <= 0)
        if (auto r0 = refine_target(prev_r0, grid[gi], Rt, tol)) {
          r0s.push_back(*r0);
          found = true;
        }
      prev_R = Rcur;
      prev_r0 = grid[gi];
    }
    if (!found) throw NoContactError("figure1: radius " + fmt17(Rt) + " not reached by sweep");
  }
  RunManifest man;
  man.command = "figure1";
  man.args = argv_echo;
  json index;
  index["convention"] = "x0 axis rightward; cap boundary drawn as the dashed chord x0 = cos R";
  json panels = json::array();
  for (size_t i = 0; i < targets.size(); ++i) {
    const Solved s = solve_r0(r0s[i], tol);
    const double R = s.contact.params.R;
    char buf[64];
    std::snprintf(buf, sizeof buf, "R = %.4f", R);
    const std::string top_name = "panel_" + std::to_string(i) + "_surface.svg";
    const std::string top = panel_svg(profile_curve(s), std::cos(R), buf);
    atomic_write(out / top_name, top);
    const double gtil = std::min(R, M_PI - R);
    std::snprintf(buf, sizeof buf, "dual: R = %.4f, gamma = %.4f", M_PI / 2, gtil);
    const std::string bot_name = "panel_" + std::to_string(i) + "_dual.svg";
    const std::string bot = panel_svg(dual_profile_curve(s), 0.0, buf);
    atomic_write(out / bot_name, bot);
    for (const auto& [name, content] : {std::pair{top_name, top}, {bot_name, bot}}) {
      json p;
      p["file"] = name;
      p["target_R"] = targets[i];
      p["R"] = R;
      p["r0"] = r0s[i];
      p["role"] = name.find("dual") != std::string::npos ? "dual" : "surface";
      if (p["role"] == "dual") p["gamma_tilde"] = gtil;
      p["hash"] = hash_hex(content);
      panels.push_back(p);
      man.outputs.push_back((out / name).string());
    }
  }
  index["panels"] = panels;
  atomic_write(out / "index.json", index.dump(2) + "\n");
  man.outputs.push_back((out / "index.json").string());
  finish_manifest(out, man);
  std::printf("figure1: wrote %zu panels to %s\n", panels.size(), out_dir.c_str());
  return 0;
}

// ---------------------------------------------------------------- verify ----

struct CheckResult {
  std::string check;
  std::string inputs_hash;
  double coarse = 0, fine = 0;
  double order = 0; // log2(coarse/fine); 0 when not applicable
  bool pass = false;
};

json check_json(const CheckResult& c) {
  json j;
  j["check"] = c.check;
  j["inputs_hash"] = c.inputs_hash;
  j["residuals"] = {{"coarse", c.coarse}, {"fine", c.fine}};
  j["order_estimate"] = c.order;
  j["verdict"] = c.pass ? "pass" : "fail";
  return j;
}

CheckResult make_check(const std::string& name, const std::string& inputs, double coarse,
                       double fine, double tol, double min_order = 0.0) {
  CheckResult c;
  c.check = name;
  c.inputs_hash = hash_hex(inputs);
  c.coarse = coarse;
  c.fine = fine;
  c.order = (fine > 0 && coarse > 0) ? std::log2(coarse / fine) : 0.0;
  c.pass = fine < tol && (min_order <= 0.0 || c.order >= min_order || fine < 1e-7);
  return c;
}

Eigen::VectorXd random_neumann_field(const RotationalAnnulus& S, std::mt19937_64& rng,
                                     double amp) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  double a[3][5];
  for (auto& row : a)
    for (double& c : row) c = unif(rng);
  Eigen::VectorXd u(S.n_t * S.n_s);
  const double T = S.contact.t_plus;
  for (int i = 0; i < S.n_t; ++i) {
    const double t = S.t_nodes[i];
    for (int j = 0; j < S.n_s; ++j) {
      const double s = S.s_nodes[j];
      double acc = 0;
      for (int m = 0; m < 3; ++m) {
        // cos(m pi (t+T)/(2T)) has vanishing t-derivative at t = +-T for even m
        const double prof = std::cos(m * M_PI * (t + T) / T);
        acc += prof * (a[m][0] + a[m][1] * std::cos(s) + a[m][2] * std::sin(s) +
                       a[m][3] * std::cos(2 * s) + a[m][4] * std::sin(2 * s));
      }
      u[S.idx(i, j)] = amp * acc / 9.0;
    }
  }
  return u;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::string& out_dir,
               const std::vector<std::string>& argv_echo) {
  std::vector<CheckResult> results;
  const auto fixtures = std::vector<double>{1.0 / std::sqrt(2.0), 0.9, 0.55, 0.35, 0.2};
  auto want = [&](const char* s) { return suite == "all" || suite == s; };

  std::vector<Solved> sols;
  for (double r0 : fixtures) sols.push_back(solve_r0(r0, 1e-11));

  if (want("boundary")) {
    for (const auto& s : sols) {
      const auto Sc = build_annulus(s.profile, s.contact, 128, 32);
      const auto Sf = build_annulus(s.profile, s.contact, 256, 32);
      results.push_back(make_check("boundary_relations[r0=" + fmt17(s.r0) + "]", fmt17(s.r0),
                                   boundary_relations_check(Sc).max_residual,
                                   boundary_relations_check(Sf).max_residual, 1e-8));
    }
  }
  if (want("hopf")) {
    for (const auto& s : sols) {
      const auto Sc = build_annulus(s.profile, s.contact, 256, 32);
      const auto Sf = build_annulus(s.profile, s.contact, 512, 32);
      results.push_back(make_check("hopf_constancy[r0=" + fmt17(s.r0) + "]", fmt17(s.r0),
                                   hopf_constancy(Sc).spread, hopf_constancy(Sf).spread, 1e-6));
    }
  }
  if (want("dual")) {
    for (const auto& s : sols) {
      const auto Sc = build_annulus(s.profile, s.contact, 128, 32);
      const auto Sf = build_annulus(s.profile, s.contact, 256, 32);
      const auto Dc = dual_surface(Sc);
      const auto Df = dual_surface(Sf);
      const double rc = std::max({Dc.metric_residual, Dc.boundary_residual,
                                  Dc.psi_product_residual, double_dual_check(Sc, Dc)});
      const double rf = std::max({Df.metric_residual, Df.boundary_residual,
                                  Df.psi_product_residual, double_dual_check(Sf, Df)});
      results.push_back(
          make_check("dual_roundtrip[r0=" + fmt17(s.r0) + "]", fmt17(s.r0), rc, rf, 1e-8));
    }
  }
  if (want("conformal")) {
    const auto& s = sols[1];
    const auto Sc = build_annulus(s.profile, s.contact, 256, 32);
    const auto Sf = build_annulus(s.profile, s.contact, 512, 32);
    for (double Rw : {0.22, 0.98, 1.4, M_PI / 2}) {
      results.push_back(make_check("weighted_operator[R=" + fmt17(Rw) + "]", fmt17(Rw),
                                   weighted_operator_check(Sc, Rw, 20, seed),
                                   weighted_operator_check(Sf, Rw, 20, seed),
                                   Rw == M_PI / 2 ? 1e-12 : 1e-5));
    }
    const auto uac = ua_identity_check(Sc, Vec3(0.3, -0.5, 0.8));
    const auto uaf =
        ua_identity_check(build_annulus(s.profile, s.contact, 512, 64), Vec3(0.3, -0.5, 0.8));
    results.push_back(make_check("ua_identity", "a=(0.3,-0.5,0.8)",
                                 std::max(uac.first, uac.second),
                                 std::max(uaf.first, uaf.second), 5e-3, 1.5));
    const auto sf_prof = space_form_profile(64, 1.0);
    const auto condA = condition_A_eval(sf_prof);
    results.push_back(make_check("condition_A_space_form", "space_form",
                                 condA.values.cwiseAbs().maxCoeff(),
                                 condA.values.cwiseAbs().maxCoeff(), 1e-10));
    const auto gp = gaussian_profile(64, 2.0, 2);
    const auto cg = condition_A_eval(gp);
    double worst = 0;
    for (int i = 0; i < gp.r.size(); ++i)
      worst = std::max(worst, std::abs(cg.values[i] + gp.r[i] / 16.0));
    CheckResult cr = make_check("condition_A_gaussian", "gaussian_n2", worst, worst, 1e-12);
    cr.pass = cr.pass && ricci_radial_gap(gp).sign_agreement &&
              cg.verdict == AVerdict::StrictlyNegative;
    results.push_back(cr);
    const auto hc = conformal_hypersurface_check(0.5, sf_prof, 1e-3);
    const auto hf = conformal_hypersurface_check(0.5, sf_prof, 5e-4);
    results.push_back(
        make_check("conformal_hypersurface_H", "r=0.5", hc.residual, hf.residual, 1e-5));
  }
  if (want("foliation")) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.05, 0.95);
    const auto sf_prof = space_form_profile(16, 1.0);
    double worst = -1e9;
    int sign_mismatch = 0;
    for (int k = 0; k < 1000; ++k) {
      const double sv = unif(rng), rv = unif(rng);
      worst = std::max(worst, foliation_derivative(1.0, sf_prof, sv, rv));
    }
    for (int k = 0; k < 10; ++k) {
      const double sv = unif(rng), rv = unif(rng);
      const double d = foliation_derivative(1.0, sf_prof, sv, rv);
      const double h = foliation_leaf_mean_curvature(1.0, sf_prof, sv, rv);
      if ((d < 0) != (h < 0)) ++sign_mismatch;
    }
    CheckResult c;
    c.check = "foliation_mean_convexity";
    c.inputs_hash = hash_hex("space_form[1000]");
    c.coarse = worst;
    c.fine = worst;
    c.pass = worst < 0 && sign_mismatch == 0;
    results.push_back(c);
  }
  if (want("orthogonality")) {
    std::mt19937_64 rng(seed);
    const auto& s = sols[0];
    const auto Sc = build_annulus(s.profile, s.contact, 128, 32);
    const auto Sf = build_annulus(s.profile, s.contact, 256, 64);
    for (int k = 0; k < 10; ++k) {
      std::mt19937_64 rng_c = rng;
      const auto uc = random_neumann_field(Sc, rng_c, 0.05);
      const auto uf = random_neumann_field(Sf, rng, 0.05);
      const auto gc = normal_graph(Sc, uc);
      const auto gf = normal_graph(Sf, uf);
      double wc = 0, wf = 0;
      for (int gen = 1; gen <= 3; ++gen) {
        wc = std::max(wc, killing_orthogonality(gc.surface, gen, 0.9));
        wf = std::max(wf, killing_orthogonality(gf.surface, gen, 0.9));
      }
      results.push_back(make_check("killing_orthogonality[" + std::to_string(k) + "]",
                                   std::to_string(k), wc, wf, 1e-4, 1.9));
    }
  }

  json agg;
  agg["suite"] = suite;
  agg["seed"] = seed;
  json arr = json::array();
  std::string first_fail;
  for (const auto& c : results) {
    arr.push_back(check_json(c));
    if (!c.pass && first_fail.empty()) first_fail = c.check;
  }
  agg["checks"] = arr;
  agg["verdict"] = first_fail.empty() ? "pass" : "fail";
  const std::string agg_str = agg.dump(2) + "\n";
  std::fputs(agg_str.c_str(), stdout);
  if (!out_dir.empty()) {
    RunManifest man;
    man.command = "verify";
    man.args = argv_echo;
    man.seed = seed;
    atomic_write(fs::path(out_dir) / "verify.json", agg_str);
    man.outputs.push_back((fs::path(out_dir) / "verify.json").string());
    finish_manifest(fs::path(out_dir), man);
  }
  if (!first_fail.empty()) {
    std::fprintf(stderr, "verify: first failing check: %s\n", first_fail.c_str());
    return 1;
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotational minimal annuli in spherical caps"};
  app.require_subcommand(1);
  std::vector<std::string> argv_echo(argv + 1, argv + argc);

  auto* solve = app.add_subcommand("solve", "integrate a profile and locate its free boundary");
  std::optional<double> r0_opt, targetR;
  double tol = 1e-11;
  std::string out_dir = "out";
  solve->add_option("--r0", r0_opt, "neck radius r(0)");
  solve->add_option("--target-R", targetR, "solve for a prescribed contact radius R");
  solve->add_option("--tol", tol, "integrator tolerance");
  solve->add_option("--out", out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "sweep the family over a neck-radius grid");
  double sw_lo = 0.05, sw_hi = 0.9995;
  int sw_count = 200;
  bool sw_serial = false;
  std::string sw_out = "out";
  sweep->add_option("--r0-min", sw_lo, "grid lower end");
  sweep->add_option("--r0-max", sw_hi, "grid upper end");
  sweep->add_option("--count", sw_count, "grid size");
  sweep->add_flag("--serial", sw_serial, "disable the parallel sweep");
  sweep->add_option("--out", sw_out, "output directory");

  auto* dual = app.add_subcommand("dual", "compute the polar dual surface");
  std::optional<double> d_r0, d_targetR;
  double d_tol = 1e-11;
  std::string d_out = "out";
  dual->add_option("--r0", d_r0, "neck radius r(0)");
  dual->add_option("--target-R", d_targetR, "solve for a prescribed contact radius R");
  dual->add_option("--tol", d_tol, "integrator tolerance");
  dual->add_option("--out", d_out, "output directory");

  auto* spectrum = app.add_subcommand("spectrum", "index/nullity of the QS or QA form");
  std::string sp_surface = "clifford", sp_form = "QS", sp_out;
  int sp_modes = 8, sp_nodes = 256;
  spectrum->add_option("--surface", sp_surface, "clifford | catenoid | surface header JSON");
  spectrum->add_option("--form", sp_form, "QS | QA")
      ->check(CLI::IsMember({"QS", "QA"}));
  spectrum->add_option("--modes", sp_modes, "Fourier mode truncation");
  spectrum->add_option("--nodes", sp_nodes, "1D grid nodes");
  spectrum->add_option("--out", sp_out, "report JSON path");

  auto* verify = app.add_subcommand("verify", "run the property suites");
  std::string v_suite = "all", v_out;
  std::uint64_t v_seed = 0;
  bool seed_given = false;
  verify->add_option("--suite", v_suite, "all|boundary|hopf|dual|conformal|foliation|orthogonality")
      ->check(CLI::IsMember(
          {"all", "boundary", "hopf", "dual", "conformal", "foliation", "orthogonality"}));
  verify->add_option("--seed", v_seed, "RNG seed for randomized suites")
      ->each([&](const std::string&) { seed_given = true; });
  verify->add_option("--out", v_out, "output directory");

  auto* figure1 = app.add_subcommand("figure1", "reproduce the family/duals figure");
  std::string f_out = "figure1";
  figure1->add_option("--out", f_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (!r0_opt && !targetR) {
        std::fprintf(stderr, "solve: need --r0 or --target-R\n");
        return 64;
      }
      return cmd_solve(r0_opt, targetR, tol, out_dir, argv_echo);
    }
    if (sweep->parsed()) return cmd_sweep(sw_lo, sw_hi, sw_count, sw_serial, sw_out, argv_echo);
    if (dual->parsed()) {
      if (!d_r0 && !d_targetR) {
        std::fprintf(stderr, "dual: need --r0 or --target-R\n");
        return 64;
      }
      return cmd_dual(d_r0, d_targetR, d_tol, d_out, argv_echo);
    }
    if (spectrum->parsed())
      return cmd_spectrum(sp_surface, sp_form, sp_modes, sp_nodes, sp_out, argv_echo);
    if (verify->parsed()) {
      if (!seed_given)
        if (const char* env = std::getenv("CAPLAB_SEED")) v_seed = std::strtoull(env, nullptr, 10);
      return cmd_verify(v_suite, v_seed, v_out, argv_echo);
    }
    if (figure1->parsed()) return cmd_figure1(f_out, argv_echo);
  } catch (const NoContactError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const SingularityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const TruncationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
