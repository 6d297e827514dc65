// Timing comparison of the parallel (OpenMP) sweep against the serial
// reference, plus the per-mode spectral assembly cost.
#include <chrono>
#include <cstdio>
#include <vector>

#include "caplab/spectral.hpp"

using namespace caplab;
using clk = std::chrono::steady_clock;

namespace {

double ms_since(clk::time_point t0) {
  return std::chrono::duration<double, std::milli>(clk::now() - t0).count();
}

} // namespace

int main() {
  std::vector<double> grid;
  const int n = 400;
  for (int i = 0; i < n; ++i) grid.push_back(0.05 + 0.94 * i / (n - 1));

  auto t0 = clk::now();
  const auto serial = sweep_family(grid, /*parallel=*/false);
  const double t_serial = ms_since(t0);

  t0 = clk::now();
  const auto par = sweep_family(grid, /*parallel=*/true);
  const double t_par = ms_since(t0);

  double max_dev = 0;
  for (size_t i = 0; i < serial.rows.size(); ++i)
    if (serial.rows[i].status == "ok" && par.rows[i].status == "ok")
      max_dev = std::max(max_dev, std::abs(serial.rows[i].R - par.rows[i].R));

  std::printf("sweep (%d points): serial %.1f ms, parallel %.1f ms, speedup %.2fx, "
              "max |dR| %.3e\n",
              n, t_serial, t_par, t_serial / t_par, max_dev);

  const auto prof = integrate_profile(0.9, 8.0);
  const auto fb = find_free_boundary(prof);
  const auto surf = build_annulus(prof, fb, 512, 32);
  const auto pb = make_problem(surf, FormKind::QS, 16, 512);
  t0 = clk::now();
  const auto rep = index_nullity(pb);
  std::printf("index_nullity (512 nodes, 16 modes): %.1f ms, (ind, nul) = (%d, %d)\n",
              ms_since(t0), rep.ind, rep.nul);
  return 0;
}
