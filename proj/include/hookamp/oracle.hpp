#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "hookamp/amplitude.hpp"
#include "hookamp/common.hpp"

namespace hookamp {

struct OracleConfig {
  int phase_grid = 64;    // equispaced phases per root, including 0
  int radial_grid = 4;    // radii per root on [0, r_j], endpoints included
  int random_trials = 0;  // extra uniform samples from the polydisc
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int threads = 0;  // 0 = hardware parallelism, 1 = serial reference
};

struct OracleResult {
  double brute_max = 0.0;
  double closed_form = 0.0;
  double gap = 0.0;  // closed_form - brute_max; nonnegative up to tolerance
  std::vector<cplx> argmax_roots;
  double cophase_distance = 0.0;  // max pairwise phase deviation of the argmax
};

// Hard caps: the grid volume explodes beyond these.
inline constexpr int kBruteMaxOrder = 4;
inline constexpr int kBruteMaxTime = 12;

// Maximizes sum_k w_k |psi_{t,k-1}(roots)| over the root grid described by
// the config (plus random samples). The inner maximization over
// initializations is exact by linearity, so only roots are searched.
OracleResult brute_force_max(int t, std::span<const double> radii,
                             std::span<const double> weights, const OracleConfig& config);

// Plain-loop reference implementation; bit-identical to the parallel one.
OracleResult brute_force_max_serial(int t, std::span<const double> radii,
                                    std::span<const double> weights, const OracleConfig& config);

struct VerifyResult {
  bool ok = false;
  double grid_slack = 0.0;  // finite-difference Lipschitz estimate x grid spacing
  OracleResult result;
};

VerifyResult verify_cophase(int t, std::span<const double> radii,
                            std::span<const double> weights, const OracleConfig& config);

// Max normwise relative deviation of the interpolation routes on this grid.
// The divided-difference leg is skipped for near-coincident nodes.
double cross_check_interp(std::span<const cplx> roots, int t);

nlohmann::json to_json(const OracleResult& result);
nlohmann::json to_json(const VerifyResult& verdict);

}  // namespace hookamp
