#include "caplab/reporting.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace caplab {

using json = nlohmann::ordered_json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hash_hex(const std::string& data) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(data)));
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("atomic_write: short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string profile_csv(const ProfileSolution& prof) {
  std::string out = "t,r,rp\n";
  for (size_t i = 0; i < prof.t_grid.size(); ++i)
    out += fmt17(prof.t_grid[i]) + "," + fmt17(prof.r[i]) + "," + fmt17(prof.rp[i]) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "r0,R,t_plus,status\n";
  for (const auto& row : rows)
    out += fmt17(row.r0) + "," + fmt17(row.R) + "," + fmt17(row.t_plus) + "," + row.status + "\n";
  return out;
}

namespace {

std::string lattice_csv_impl(int n_t, int n_s, const Eigen::VectorXd& t_nodes,
                             const Eigen::VectorXd& s_nodes, const std::vector<Vec4>& pts,
                             const std::vector<Vec4>& nus) {
  std::string out = "s,t,x0,x1,x2,x3,nu0,nu1,nu2,nu3\n";
  out.reserve(pts.size() * 190);
  for (int i = 0; i < n_t; ++i)
    for (int j = 0; j < n_s; ++j) {
      const int q = i * n_s + j;
      out += fmt17(s_nodes[j]) + "," + fmt17(t_nodes[i]);
      for (int c = 0; c < 4; ++c) out += "," + fmt17(pts[q][c]);
      for (int c = 0; c < 4; ++c) out += "," + fmt17(nus[q][c]);
      out += "\n";
    }
  return out;
}

json contact_obj(const ContactData& c) {
  json j;
  j["t_plus"] = c.t_plus;
  j["R"] = c.params.R;
  j["gamma"] = c.params.gamma;
  j["kappa"] = c.params.kappa;
  j["eps"] = c.params.epsilon;
  j["x0_boundary"] = c.x0_boundary;
  j["orient"] = c.orient;
  return j;
}

} // namespace

std::string lattice_csv(const RotationalAnnulus& surf) {
  return lattice_csv_impl(surf.n_t, surf.n_s, surf.t_nodes, surf.s_nodes, surf.points,
                          surf.normals);
}

std::string lattice_csv(const DualSurface& dual, const RotationalAnnulus&) {
  return lattice_csv_impl(dual.n_t, dual.n_s, dual.t_nodes, dual.s_nodes, dual.points,
                          dual.normals);
}

std::string contact_json(const ContactData& contact) { return contact_obj(contact).dump(2) + "\n"; }

std::string surface_header_json(const RotationalAnnulus& surf) {
  json j;
  j["kind"] = "rotational_annulus";
  j["ambient"] = surf.ambient == Ambient::Sphere ? "sphere" : "euclid";
  j["n_t"] = surf.n_t;
  j["n_s"] = surf.n_s;
  j["r0"] = surf.profile.r0;
  j["contact"] = contact_obj(surf.contact);
  j["residuals"]["fd_deviation"] = surf.fd_deviation;
  j["integrator"] = {{"method", surf.profile.meta.method}, {"tol", surf.profile.meta.tol}};
  return j.dump(2) + "\n";
}

std::string dual_header_json(const DualSurface& dual, const std::string& base_hash) {
  json j;
  j["kind"] = "polar_dual";
  j["n_t"] = dual.n_t;
  j["n_s"] = dual.n_s;
  j["eps"] = dual.eps;
  json dp;
  dp["R"] = dual.dual_params.R;
  dp["gamma"] = dual.dual_params.gamma;
  dp["eps"] = dual.dual_params.epsilon;
  j["dual_params"] = dp;
  j["base_surface_hash"] = base_hash;
  j["residuals"] = {{"metric", dual.metric_residual},
                    {"ortho", dual.ortho_residual},
                    {"boundary", dual.boundary_residual},
                    {"atilde", dual.atilde_residual},
                    {"psi_product", dual.psi_product_residual}};
  return j.dump(2) + "\n";
}

std::string spectral_report_json(const SpectralReport& rep) {
  json j;
  j["form"] = rep.form == FormKind::QS ? "QS" : "QA";
  j["kappa"] = rep.kappa;
  j["R"] = rep.R;
  j["gamma"] = rep.gamma;
  json modes = json::array();
  for (const auto& m : rep.modes) {
    json jm;
    jm["k"] = m.k;
    jm["eigenvalues"] = std::vector<double>(m.eigenvalues.begin(), m.eigenvalues.end());
    modes.push_back(jm);
  }
  j["modes"] = modes;
  j["ind"] = rep.ind;
  j["nul"] = rep.nul;
  j["ind0"] = rep.ind0;
  j["zero_tol"] = rep.zero_tol;
  j["n_nodes"] = rep.n_nodes;
  return j.dump(2) + "\n";
}

LatticeFile read_lattice(const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path) {
  LatticeFile lf;
  {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error("read_lattice: cannot open " + json_path.string());
    json j = json::parse(in);
    lf.n_t = j.at("n_t").get<int>();
    lf.n_s = j.at("n_s").get<int>();
    lf.ambient = j.value("ambient", "sphere");
    const json& c = j.at("contact");
    lf.contact.t_plus = c.at("t_plus").get<double>();
    lf.contact.params =
        CapParams(c.at("R").get<double>(), c.at("gamma").get<double>(), c.at("eps").get<int>());
    lf.contact.x0_boundary = c.at("x0_boundary").get<double>();
    lf.contact.orient = c.at("orient").get<int>();
  }
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("read_lattice: cannot open " + csv_path.string());
  std::string line;
  std::getline(in, line); // header
  lf.points.reserve(lf.n_t * lf.n_s);
  lf.normals.reserve(lf.n_t * lf.n_s);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[10];
    char comma;
    for (int c = 0; c < 10; ++c) {
      if (!(ss >> v[c])) throw std::runtime_error("read_lattice: malformed row: " + line);
      if (c < 9) ss >> comma;
    }
    lf.points.emplace_back(v[2], v[3], v[4], v[5]);
    lf.normals.emplace_back(v[6], v[7], v[8], v[9]);
  }
  if (static_cast<int>(lf.points.size()) != lf.n_t * lf.n_s)
    throw std::runtime_error("read_lattice: row count does not match header grid shape");
  return lf;
}

std::string manifest_json(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["args"] = m.args;
  json tol = json::object();
  for (const auto& [k, v] : m.tolerances) tol[k] = v;
  j["tolerances"] = tol;
  json ih = json::object();
  for (const auto& [k, v] : m.input_hashes) ih[k] = v;
  j["input_hashes"] = ih;
  j["outputs"] = m.outputs;
  json res = json::object();
  for (const auto& [k, v] : m.residuals) res[k] = v;
  j["residuals"] = res;
  j["seed"] = m.seed;
  j["timestamp"] = m.timestamp;
  return j.dump(2) + "\n";
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string fnum(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

} // namespace

SvgCanvas::SvgCanvas(double width, double height) : w_(width), h_(height) {}

void SvgCanvas::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width, bool dashed) {
  body_ += "  <line x1=\"" + fnum(x1) + "\" y1=\"" + fnum(y1) + "\" x2=\"" + fnum(x2) +
           "\" y2=\"" + fnum(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
           fnum(stroke_width) + "\"";
  if (dashed) body_ += " stroke-dasharray=\"6,4\"";
  body_ += " fill=\"none\"/>\n";
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& stroke, double stroke_width) {
  body_ += "  <polyline points=\"";
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) body_ += " ";
    body_ += fnum(pts[i].first) + "," + fnum(pts[i].second);
  }
  body_ += "\" stroke=\"" + stroke + "\" stroke-width=\"" + fnum(stroke_width) +
           "\" fill=\"none\"/>\n";
}

void SvgCanvas::circle(double cx, double cy, double r, const std::string& stroke,
                       double stroke_width) {
  body_ += "  <circle cx=\"" + fnum(cx) + "\" cy=\"" + fnum(cy) + "\" r=\"" + fnum(r) +
           "\" stroke=\"" + stroke + "\" stroke-width=\"" + fnum(stroke_width) +
           "\" fill=\"none\"/>\n";
}

void SvgCanvas::text(double x, double y, const std::string& s, double font_size) {
  body_ += "  <text x=\"" + fnum(x) + "\" y=\"" + fnum(y) + "\" font-size=\"" + fnum(font_size) +
           "\" font-family=\"sans-serif\">" + s + "</text>\n";
}

std::string SvgCanvas::str() const {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         fnum(w_) + "\" height=\"" + fnum(h_) + "\" viewBox=\"0 0 " + fnum(w_) + " " + fnum(h_) +
         "\">\n" + body_ + "</svg>\n";
}

} // namespace caplab
