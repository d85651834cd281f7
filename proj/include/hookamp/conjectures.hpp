#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "hookamp/common.hpp"
#include "hookamp/symfunc.hpp"

namespace hookamp {

// Node multiset closed under conjugation, with real nodes in even
// multiplicity; all symmetric polynomials of such a grid are real.
struct SelfConjugateGrid {
  std::vector<cplx> nodes;
};

inline constexpr double kConjugacyTolerance = 1e-12;
inline constexpr double kSingularDenominator = 1e-12;

bool is_self_conjugate(std::span<const cplx> nodes, double tol = kConjugacyTolerance);

enum class SampleRegion { unit_disc, right_half_disc, unit_circle };

// n/2 independent draws from the region, each emitted with its conjugate;
// with probability p_real a pair degenerates to a doubled real point.
SelfConjugateGrid sample_self_conjugate(int n, SampleRegion region, Rng& rng,
                                        double p_real = 0.2);

// Q_{t,n,k}(zeta) = sum_{d=0}^{t-n} (-1)^d C(t,n+d) s_(d|n-k-1)(zeta)
//                   / (C(t,n) e_{n-k}(zeta)).
// Throws singular_denominator when |e_{n-k}(zeta)| < 1e-12.
cplx q_eval(int t, int n, int k, std::span<const cplx> zeta);

// (1/k!) d^k/dz^k [z^t - psi_t(z|nodes)], evaluated through the factored
// residual e_t(z) = f(z) h_{t-n}(z, nodes) differentiated by Leibniz:
//   sum_{j=0}^{min(k,n)} f^{(j)}(z)/j! * h_{t-n-k+j}(z 1_{k-j+1}, nodes).
// Every h-argument stays inside the node hull, which keeps the evaluation
// accurate at large t.
cplx error_derivative(int t, int n, int k, cplx z, std::span<const cplx> nodes);

// The equivalent alternating hook-Schur expansion
//   (-1)^{n-k} sum_{d=0}^{t-n} C(t,n+d) z^{t-n-d} s_(d|n-k-1)(nodes - z 1_n);
// it cancels catastrophically in doubles once t - n is large, so it serves
// as a cross-checked identity rather than the production route.
cplx error_derivative_schur_sum(int t, int n, int k, cplx z, std::span<const cplx> nodes);

struct Counterexample {
  int t = 0, n = 0, k = 0;
  long long trial = 0;
  double abs_q = 0.0;
  std::vector<cplx> nodes;
};

struct QReport {
  int t = 0, n = 0, k = 0;
  long long samples = 0;
  double max_abs_q = 0.0;
  SelfConjugateGrid worst_grid;
  long long singular_skipped = 0;
  std::uint64_t seed = 0;
  std::vector<Counterexample> counterexamples;
};

enum class PointwiseBranch {
  z_one,   // |Q_{t,n,k}(nodes + 1_n)| <= 1
  z_zero,  // |s_(t-n|n-k-1)(nodes)| <= C(t,n) |e_{n-k}(nodes)|, Re(nodes) >= 0
};

struct ScanConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  SampleRegion region = SampleRegion::unit_disc;  // z_zero forces right_half_disc
  double p_real = 0.2;
  int threads = 0;  // 0 = hardware parallelism, 1 = serial reference
  double counterexample_threshold = 1.0 + 1e-7;
};

// One QReport per (t, k) pair; the same sampled grids are reused across
// pairs, so reports with equal seeds are directly comparable.
std::vector<QReport> scan_pointwise(std::span<const int> t_values, int n,
                                    std::span<const int> k_values, PointwiseBranch branch,
                                    const ScanConfig& config);
std::vector<QReport> scan_pointwise_serial(std::span<const int> t_values, int n,
                                           std::span<const int> k_values, PointwiseBranch branch,
                                           const ScanConfig& config);

struct SpecialCaseFlags {
  bool lower_ok = false;  // 0 <= e_1(zeta) - e_{n-k+1}(zeta)/e_{n-k}(zeta)
  bool upper_ok = false;  //      e_1(zeta) - e_{n-k+1}(zeta)/e_{n-k}(zeta) <= 2n+2
};

// The proved t = n+1 case with n-k even; nullopt when e_{n-k} is singular.
std::optional<SpecialCaseFlags> special_case_np1(int n, int k, std::span<const cplx> zeta);

struct KallioniemiEstimate {
  SelfConjugateGrid grid;  // nodes actually used (repeated nodes perturbed)
  int k = 0;
  std::vector<double> z_samples;
  std::vector<std::uint8_t> membership;
  int m_truncation = 0;       // largest monomial degree scanned
  bool truncation_suspect = false;  // some sup was attained in the last quarter of the m range
};

// For each z on an equispaced grid over [-1,1], compares
// sup_{n<=m<=m_max} (m-n)!/m! |[z^m - psi_m(z)]^(k)| against the m = n term
// (1/n!)|f^(k)(z)|; membership means the lowest monomial is worst-case.
KallioniemiEstimate kallioniemi_estimate(std::span<const cplx> nodes, int k, int z_resolution,
                                         int m_max, int threads = 0);
KallioniemiEstimate kallioniemi_estimate_serial(std::span<const cplx> nodes, int k,
                                                int z_resolution, int m_max);

inline constexpr int kDefaultZResolution = 2001;
inline int default_m_max(int n) { return 4 * n + 40; }

struct UniformScanResult {
  double sup_over_t = 0.0;  // max_t C(t,n)^{-1} max_z |sum_d C(t,n+d) z^{t-n-d} s_(d|n-k-1)(nodes - z)|
  double rhs = 0.0;         // max_z |e_{n-k}(nodes - z 1_n)|
  int attained_at_t = 0;
};

UniformScanResult scan_uniform(std::span<const cplx> nodes, int k, int t_max,
                               int z_resolution = kDefaultZResolution, int threads = 0);

nlohmann::json to_json(const QReport& report);
nlohmann::json to_json(const Counterexample& record);
nlohmann::json to_json(const KallioniemiEstimate& estimate);
nlohmann::json to_json(const UniformScanResult& result);

}  // namespace hookamp
