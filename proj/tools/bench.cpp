// Compares the serial reference kernels against their OpenMP counterparts
// on medium workloads and prints wall times plus speedups.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "hookamp/conjectures.hpp"
#include "hookamp/oracle.hpp"

using namespace hookamp;

namespace {

double time_ms(const std::function<void()>& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const std::string& name, double serial_ms, double parallel_ms) {
  std::printf("%-38s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

}  // namespace

int main() {
  std::printf("%-38s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  {
    OracleConfig cfg;
    cfg.phase_grid = 32;
    cfg.radial_grid = 3;
    cfg.random_trials = 20000;
    cfg.seed = 42;
    const std::vector<double> radii{1.0, 0.8, 0.6};
    const std::vector<double> weights{1.0, 1.0, 1.0};
    double brute_serial = 0.0, brute_parallel = 0.0;
    const double ts = time_ms([&] {
      brute_serial = brute_force_max_serial(8, radii, weights, cfg).brute_max;
    });
    cfg.threads = 0;
    const double tp = time_ms([&] {
      brute_parallel = brute_force_max(8, radii, weights, cfg).brute_max;
    });
    row("oracle grid search (n=3, t=8)", ts, tp);
    if (brute_serial != brute_parallel) std::printf("  !! results differ\n");
  }

  {
    ScanConfig cfg;
    cfg.trials = 4000;
    cfg.seed = 42;
    const std::vector<int> ts_values{8, 9, 10};
    const std::vector<int> ks{0, 1, 2, 3};
    double s_max = 0.0, p_max = 0.0;
    const double ts = time_ms([&] {
      const auto reps =
          scan_pointwise_serial(ts_values, 4, ks, PointwiseBranch::z_one, cfg);
      s_max = reps.front().max_abs_q;
    });
    cfg.threads = 0;
    const double tp = time_ms([&] {
      const auto reps = scan_pointwise(ts_values, 4, ks, PointwiseBranch::z_one, cfg);
      p_max = reps.front().max_abs_q;
    });
    row("pointwise conjecture scan (n=4)", ts, tp);
    if (s_max != p_max) std::printf("  !! results differ\n");
  }

  {
    Rng rng(7);
    const auto grid = sample_self_conjugate(6, SampleRegion::unit_disc, rng);
    int s_members = 0, p_members = 0;
    const double ts = time_ms([&] {
      const auto est = kallioniemi_estimate_serial(grid.nodes, 1, 4001, default_m_max(6));
      for (auto m : est.membership) s_members += m;
    });
    const double tp = time_ms([&] {
      const auto est = kallioniemi_estimate(grid.nodes, 1, 4001, default_m_max(6), 0);
      for (auto m : est.membership) p_members += m;
    });
    row("kallioniemi estimator (n=6)", ts, tp);
    if (s_members != p_members) std::printf("  !! results differ\n");
  }

  return 0;
}
