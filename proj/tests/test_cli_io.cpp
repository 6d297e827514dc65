#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "caplab/reporting.hpp"

using namespace caplab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CAPLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path tmpdir(const std::string& leaf) {
  const fs::path d = fs::temp_directory_path() / ("caplab_test_" + leaf);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

RotationalAnnulus make_fb(double r0, int n_t = 96, int n_s = 24) {
  const auto prof = integrate_profile(r0, 8.0);
  return build_annulus(prof, find_free_boundary(prof), n_t, n_s);
}

} // namespace

TEST_CASE("fmt17 round trips doubles exactly") {
  for (double v : {0.1, 1.0 / 3.0, M_PI, 1e-300, -2.5e17, 0.0}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("content hash is stable and sensitive") {
  const std::string a = "s,t,x0\n0,0,1\n";
  CHECK(hash_hex(a) == hash_hex(a));
  CHECK(hash_hex(a).size() == 16);
  CHECK(hash_hex(a) != hash_hex(a + " "));
  // FNV-1a 64 of the empty string is the offset basis
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
}

TEST_CASE("atomic write leaves no temp files and replaces content") {
  const fs::path d = tmpdir("atomic");
  atomic_write(d / "f.txt", "one");
  atomic_write(d / "f.txt", "two");
  CHECK(slurp(d / "f.txt") == "two");
  int count = 0;
  for (const auto& e : fs::directory_iterator(d)) {
    ++count;
    CHECK(e.path().filename() == "f.txt");
  }
  CHECK(count == 1);
  // nested directories are created on demand
  atomic_write(d / "a" / "b" / "g.txt", "x");
  CHECK(slurp(d / "a" / "b" / "g.txt") == "x");
}

TEST_CASE("lattice CSV and header JSON round trip through read_lattice") {
  const fs::path d = tmpdir("lattice");
  const auto surf = make_fb(0.9);
  atomic_write(d / "surface.csv", lattice_csv(surf));
  atomic_write(d / "surface.json", surface_header_json(surf));
  const auto lf = read_lattice(d / "surface.csv", d / "surface.json");
  REQUIRE(lf.n_t == surf.n_t);
  REQUIRE(lf.n_s == surf.n_s);
  CHECK(lf.ambient == "sphere");
  CHECK(lf.contact.params.R == surf.contact.params.R); // fmt17 exactness
  CHECK(lf.contact.t_plus == surf.contact.t_plus);
  for (int q = 0; q < surf.n_t * surf.n_s; ++q) {
    CHECK((lf.points[q] - surf.points[q]).norm() == 0.0);
    CHECK((lf.normals[q] - surf.normals[q]).norm() == 0.0);
  }
}

TEST_CASE("header JSON carries the assembly metadata") {
  const auto surf = make_fb(0.9);
  const json h = json::parse(surface_header_json(surf));
  CHECK(h["kind"] == "rotational_annulus");
  CHECK(h["ambient"] == "sphere");
  CHECK(h["n_t"] == surf.n_t);
  CHECK(h["n_s"] == surf.n_s);
  CHECK(h["contact"].contains("R"));
  CHECK(h["residuals"].contains("fd_deviation"));
  CHECK(h["integrator"].contains("method"));

  const json c = json::parse(contact_json(surf.contact));
  CHECK(c["R"].get<double>() == doctest::Approx(surf.contact.params.R).epsilon(1e-15));

  SpectralReport rep;
  rep.ind = 1;
  rep.nul = 3;
  const json s = json::parse(spectral_report_json(rep));
  CHECK(s["ind"] == 1);
  CHECK(s["nul"] == 3);

  RunManifest man;
  man.command = "solve";
  man.args = {"--r0", "0.9"};
  man.seed = 7;
  man.timestamp = now_iso8601();
  const json m = json::parse(manifest_json(man));
  CHECK(m["command"] == "solve");
  CHECK(m["seed"] == 7);
  CHECK(m.contains("timestamp"));
}

TEST_CASE("SVG output is byte-identical across regenerations") {
  auto draw = [] {
    SvgCanvas c(200, 100);
    c.line(0, 0, 200, 100, "black", 1.0, true);
    c.polyline({{0, 0}, {10.12345, 20.98765}, {30, 40}}, "crimson", 1.5);
    c.circle(100, 50, 40, "steelblue", 1.0);
    c.text(5, 95, "label", 10);
    return c.str();
  };
  const std::string a = draw(), b = draw();
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("1.1") != std::string::npos);
  CHECK(a.find("label") != std::string::npos);
}

TEST_CASE("solve subcommand writes a complete, hash-consistent bundle") {
  const fs::path d = tmpdir("solve");
  REQUIRE(run_cli("solve --r0 0.9 --out " + d.string()) == 0);
  for (const char* f : {"profile.csv", "surface.csv", "contact.json", "surface.json",
                        "manifest.json"})
    CHECK(fs::exists(d / f));
  const json man = json::parse(slurp(d / "manifest.json"));
  CHECK(man["command"] == "solve");
  bool found = false;
  for (const auto& [name, h] : man["input_hashes"].items()) {
    if (man["input_hashes"][name] == hash_hex(slurp(d / "surface.csv"))) found = true;
  }
  CHECK(found);

  // determinism: a second run reproduces identical surface bytes
  const fs::path d2 = tmpdir("solve2");
  REQUIRE(run_cli("solve --r0 0.9 --out " + d2.string()) == 0);
  CHECK(slurp(d / "surface.csv") == slurp(d2 / "surface.csv"));
  CHECK(slurp(d / "profile.csv") == slurp(d2 / "profile.csv"));
}

TEST_CASE("CLI exit codes map the failure modes") {
  const fs::path d = tmpdir("codes");
  CHECK(run_cli("solve --r0 0.99999 --out " + d.string()) != 0); // out of band
  CHECK(run_cli("nonsense") != 0);
  CHECK(run_cli("solve --target-R 9.9 --out " + d.string()) != 0);
}

TEST_CASE("spectrum subcommand reports the pinned Clifford counts") {
  const fs::path d = tmpdir("spectrum");
  REQUIRE(run_cli("spectrum --surface clifford --form QS --modes 8 --nodes 192 --out " +
                  (d / "report.json").string()) == 0);
  const json rep = json::parse(slurp(d / "report.json"));
  CHECK(rep["ind"] == 1);
  CHECK(rep["nul"] == 3);
}

TEST_CASE("dual bundle links the base surface by content hash") {
  const fs::path d = tmpdir("dual");
  REQUIRE(run_cli("dual --r0 0.9 --out " + d.string()) == 0);
  const json dj = json::parse(slurp(d / "dual.json"));
  CHECK(dj["base_surface_hash"] == hash_hex(slurp(d / "surface.csv")));
}
