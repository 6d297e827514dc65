#pragma once
// Persistence: CSV lattices, JSON headers/manifests, deterministic SVG
// figures, content hashing, atomic file writes.
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "caplab/polar_dual.hpp"
#include "caplab/rotational_solver.hpp"
#include "caplab/spectral.hpp"
#include "caplab/surface_analysis.hpp"

namespace caplab {

// shortest roundtrip-exact decimal form (17 significant digits)
std::string fmt17(double v);

std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(const std::string& data);

// write via temp file + rename so readers never see partial content
void atomic_write(const std::filesystem::path& path, const std::string& content);

std::string profile_csv(const ProfileSolution& prof);
std::string sweep_csv(const std::vector<SweepRow>& rows);
// lattice schema: s,t,x0,x1,x2,x3,nu0,nu1,nu2,nu3
std::string lattice_csv(const RotationalAnnulus& surf);
std::string lattice_csv(const DualSurface& dual, const RotationalAnnulus& base);

std::string contact_json(const ContactData& contact);
std::string surface_header_json(const RotationalAnnulus& surf);
std::string dual_header_json(const DualSurface& dual, const std::string& base_hash);
std::string spectral_report_json(const SpectralReport& rep);

// parse a surface lattice CSV + header JSON back into a MeasuredSurface-style
// point/normal lattice (used by cmd_spectrum --surface)
struct LatticeFile {
  int n_t = 0, n_s = 0;
  std::vector<Vec4> points, normals;
  ContactData contact;
  std::string ambient = "sphere";
};
LatticeFile read_lattice(const std::filesystem::path& csv_path,
                         const std::filesystem::path& json_path);

struct RunManifest {
  std::string command;
  std::vector<std::string> args;
  std::vector<std::pair<std::string, double>> tolerances;
  std::vector<std::pair<std::string, std::string>> input_hashes;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> residuals;
  std::uint64_t seed = 0;
  std::string timestamp; // ISO 8601 UTC
};
std::string manifest_json(const RunManifest& m);
std::string now_iso8601();

// Minimal deterministic SVG 1.1 canvas: fixed coordinate formatting, no
// timestamps, so regenerated bytes are identical for identical inputs.
class SvgCanvas {
public:
  SvgCanvas(double width, double height);
  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width, bool dashed = false);
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
                double stroke_width);
  void circle(double cx, double cy, double r, const std::string& stroke, double stroke_width);
  void text(double x, double y, const std::string& s, double font_size);
  std::string str() const;

private:
  double w_, h_;
  std::string body_;
};

} // namespace caplab
