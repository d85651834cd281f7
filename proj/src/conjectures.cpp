#include "hookamp/conjectures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hookamp {

namespace {

constexpr double kPi = std::numbers::pi;

int effective_threads(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

}  // namespace

bool is_self_conjugate(std::span<const cplx> nodes, double tol) {
  std::vector<bool> used(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    // Real nodes pair with an equal real node; complex ones with a conjugate.
    const cplx want = std::abs(nodes[i].imag()) <= tol ? nodes[i] : std::conj(nodes[i]);
    bool found = false;
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(nodes[j] - want) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

SelfConjugateGrid sample_self_conjugate(int n, SampleRegion region, Rng& rng, double p_real) {
  require(n >= 2 && n % 2 == 0, errc::precondition,
          "sample_self_conjugate: n must be even and >= 2");
  require(p_real >= 0.0 && p_real <= 1.0, errc::precondition,
          "sample_self_conjugate: p_real must be in [0,1]");
  SelfConjugateGrid grid;
  grid.nodes.reserve(static_cast<std::size_t>(n));
  for (int pair = 0; pair < n / 2; ++pair) {
    if (rng.uniform01() < p_real) {
      double x = 0.0;
      switch (region) {
        case SampleRegion::unit_disc: x = rng.uniform(-1.0, 1.0); break;
        case SampleRegion::right_half_disc: x = rng.uniform01(); break;
        case SampleRegion::unit_circle: x = rng.uniform01() < 0.5 ? -1.0 : 1.0; break;
      }
      grid.nodes.emplace_back(x, 0.0);
      grid.nodes.emplace_back(x, 0.0);
    } else {
      cplx z;
      switch (region) {
        case SampleRegion::unit_disc: z = rng.in_disc(1.0); break;
        case SampleRegion::right_half_disc: {
          const double rho = std::sqrt(rng.uniform01());
          const double phi = rng.uniform(-0.5 * kPi, 0.5 * kPi);
          z = cplx(rho * std::cos(phi), rho * std::sin(phi));
          break;
        }
        case SampleRegion::unit_circle: {
          const double phi = rng.uniform(0.0, 2.0 * kPi);
          z = cplx(std::cos(phi), std::sin(phi));
          break;
        }
      }
      grid.nodes.push_back(z);
      grid.nodes.push_back(std::conj(z));
    }
  }
  return grid;
}

namespace {

void check_tnk(int t, int n, int k) {
  require(n >= 1, errc::precondition, "need n >= 1");
  require(t >= n, errc::precondition, "need t >= n");
  require(k >= 0 && k <= n - 1, errc::precondition, "need 0 <= k <= n-1");
}

}  // namespace

cplx q_eval(int t, int n, int k, std::span<const cplx> zeta) {
  check_tnk(t, n, k);
  require(static_cast<int>(zeta.size()) == n, errc::precondition, "q_eval: need n nodes");
  SymTable table(zeta, t - n);
  const cplx denom_e = table.e(n - k);
  require(std::abs(denom_e) >= kSingularDenominator, errc::singular_denominator,
          "q_eval: singular denominator e_{n-k}");
  cplx num = 0.0;
  for (int d = 0; d <= t - n; ++d) {
    const cplx term = binomial(t, n + d) * schur_hook(Hook{d, n - k - 1}, table);
    num += (d % 2 == 0) ? term : -term;
  }
  return num / (binomial(t, n) * denom_e);
}

cplx error_derivative_schur_sum(int t, int n, int k, cplx z, std::span<const cplx> nodes) {
  check_tnk(t, n, k);
  require(static_cast<int>(nodes.size()) == n, errc::precondition,
          "error_derivative_schur_sum: need n nodes");
  std::vector<cplx> shifted(nodes.begin(), nodes.end());
  for (cplx& w : shifted) w -= z;
  SymTable table(shifted, t - n);
  cplx sum = 0.0;
  cplx zpow = 1.0;  // z^{t-n-d}, built from the d = t-n end downwards
  for (int d = t - n; d >= 0; --d) {
    sum += binomial(t, n + d) * zpow * schur_hook(Hook{d, n - k - 1}, table);
    zpow *= z;
  }
  return ((n - k) % 2 == 0) ? sum : -sum;
}

namespace {

// Shared tables for the factored residual derivative at a fixed z: one
// SymTable per Leibniz term j, holding h at the point multiset
// (z repeated k-j+1 times, nodes), plus the f^{(j)}(z)/j! factors.
class FactoredResidual {
 public:
  FactoredResidual(int n, int k, cplx z, std::span<const cplx> nodes, int max_t)
      : n_(n), k_(k) {
    const int jmax = std::min(k, n);
    std::vector<cplx> shifted(nodes.begin(), nodes.end());
    for (cplx& w : shifted) w -= z;
    SymTable stab(shifted, 0);
    fd_.resize(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) {
      const cplx e = stab.e(n - j);
      fd_[static_cast<std::size_t>(j)] = ((n - j) % 2 == 0) ? e : -e;
    }
    tables_.reserve(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) {
      std::vector<cplx> pts(static_cast<std::size_t>(k - j + 1), z);
      pts.insert(pts.end(), nodes.begin(), nodes.end());
      tables_.emplace_back(pts, std::max(0, max_t - n - k + j));
    }
  }

  // (1/k!) d^k/dz^k [z^t - psi_t(z|nodes)]
  cplx eval(int t) const {
    cplx total = 0.0;
    for (int j = 0; j < static_cast<int>(fd_.size()); ++j)
      total += fd_[static_cast<std::size_t>(j)] *
               tables_[static_cast<std::size_t>(j)].h(t - n_ - k_ + j);
    return total;
  }

 private:
  int n_, k_;
  std::vector<cplx> fd_;
  std::vector<SymTable> tables_;
};

}  // namespace

cplx error_derivative(int t, int n, int k, cplx z, std::span<const cplx> nodes) {
  check_tnk(t, n, k);
  require(static_cast<int>(nodes.size()) == n, errc::precondition,
          "error_derivative: need n nodes");
  return FactoredResidual(n, k, z, nodes, t).eval(t);
}

namespace {

struct TrialOutcome {
  double value = -1.0;  // -1 marks a singular skip
};

// One (t,k) cell of the scan over precomputed sample grids.
QReport reduce_report(int t, int n, int k, const ScanConfig& cfg,
                      const std::vector<SelfConjugateGrid>& samples,
                      const std::vector<TrialOutcome>& outcomes) {
  QReport rep;
  rep.t = t;
  rep.n = n;
  rep.k = k;
  rep.samples = static_cast<long long>(samples.size());
  rep.seed = cfg.seed;
  long long worst = -1;
  for (long long i = 0; i < rep.samples; ++i) {
    const double v = outcomes[static_cast<std::size_t>(i)].value;
    if (v < 0.0) {
      ++rep.singular_skipped;
      continue;
    }
    if (v > rep.max_abs_q) {
      rep.max_abs_q = v;
      worst = i;
    }
    if (v > cfg.counterexample_threshold)
      rep.counterexamples.push_back(
          {t, n, k, i, v, samples[static_cast<std::size_t>(i)].nodes});
  }
  if (worst >= 0) rep.worst_grid = samples[static_cast<std::size_t>(worst)];
  return rep;
}

double pointwise_value(int t, int n, int k, PointwiseBranch branch,
                       std::span<const cplx> nodes) {
  if (branch == PointwiseBranch::z_one) {
    std::vector<cplx> zeta(nodes.begin(), nodes.end());
    for (cplx& w : zeta) w += 1.0;
    return std::abs(q_eval(t, n, k, zeta));
  }
  // z = 0 branch: the Schur-vs-elementary ratio.
  SymTable table(nodes, t - n);
  const cplx denom_e = table.e(n - k);
  require(std::abs(denom_e) >= kSingularDenominator, errc::singular_denominator,
          "scan_pointwise: singular denominator e_{n-k}");
  const cplx s = schur_hook(Hook{t - n, n - k - 1}, table);
  return std::abs(s) / (binomial(t, n) * std::abs(denom_e));
}

std::vector<QReport> scan_pointwise_impl(std::span<const int> t_values, int n,
                                         std::span<const int> k_values, PointwiseBranch branch,
                                         const ScanConfig& cfg, bool parallel) {
  require(n >= 2 && n % 2 == 0, errc::precondition, "scan_pointwise: n must be even");
  require(cfg.trials >= 1, errc::precondition, "scan_pointwise: trials must be >= 1");
  for (int t : t_values) require(t >= n, errc::precondition, "scan_pointwise: t must be >= n");
  for (int k : k_values)
    require(k >= 0 && k < n, errc::precondition, "scan_pointwise: k out of range");

  const SampleRegion region =
      branch == PointwiseBranch::z_zero ? SampleRegion::right_half_disc : cfg.region;

  // Per-trial seeding keeps the sample set independent of the thread count.
  std::vector<SelfConjugateGrid> samples(static_cast<std::size_t>(cfg.trials));
  for (int i = 0; i < cfg.trials; ++i) {
    Rng rng(Rng::mix(cfg.seed, static_cast<std::uint64_t>(i) + 1));
    samples[static_cast<std::size_t>(i)] = sample_self_conjugate(n, region, rng, cfg.p_real);
  }

  std::vector<QReport> reports;
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  for (int t : t_values) {
    for (int k : k_values) {
      // No exception may leave an OpenMP region; singular denominators are
      // the only expected throw and become skip markers.
      const auto run_trial = [&](int i) {
        try {
          outcomes[static_cast<std::size_t>(i)].value =
              pointwise_value(t, n, k, branch, samples[static_cast<std::size_t>(i)].nodes);
        } catch (const Error&) {
          outcomes[static_cast<std::size_t>(i)].value = -1.0;
        }
      };
      if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads(cfg.threads))
#endif
        for (int i = 0; i < cfg.trials; ++i) run_trial(i);
      } else {
        for (int i = 0; i < cfg.trials; ++i) run_trial(i);
      }
      reports.push_back(reduce_report(t, n, k, cfg, samples, outcomes));
    }
  }
  return reports;
}

}  // namespace

std::vector<QReport> scan_pointwise(std::span<const int> t_values, int n,
                                    std::span<const int> k_values, PointwiseBranch branch,
                                    const ScanConfig& cfg) {
  return scan_pointwise_impl(t_values, n, k_values, branch, cfg, cfg.threads != 1);
}

std::vector<QReport> scan_pointwise_serial(std::span<const int> t_values, int n,
                                           std::span<const int> k_values, PointwiseBranch branch,
                                           const ScanConfig& cfg) {
  return scan_pointwise_impl(t_values, n, k_values, branch, cfg, false);
}

std::optional<SpecialCaseFlags> special_case_np1(int n, int k, std::span<const cplx> zeta) {
  require(n >= 1, errc::precondition, "special_case_np1: need n >= 1");
  require(k >= 0 && k <= n - 1, errc::precondition, "special_case_np1: k out of range");
  require((n - k) % 2 == 0, errc::precondition, "special_case_np1: n-k must be even");
  require(static_cast<int>(zeta.size()) == n, errc::precondition,
          "special_case_np1: need n nodes");
  SymTable table(zeta, 0);
  const cplx denom_e = table.e(n - k);
  if (std::abs(denom_e) < kSingularDenominator) return std::nullopt;
  const cplx u = table.e(1) - table.e(n - k + 1) / denom_e;
  const double tol = 1e-9 * std::max(1.0, std::abs(u));
  SpecialCaseFlags flags;
  flags.lower_ok = u.real() >= -tol;
  flags.upper_ok = u.real() <= 2.0 * n + 2.0 + tol;
  return flags;
}

namespace {

// The extreme-point reduction to monomials assumes simple grids; exact
// repeats are nudged apart in a conjugation-symmetric way so self-conjugacy
// survives.
std::vector<cplx> perturb_repeated_nodes(std::span<const cplx> nodes, double delta) {
  std::vector<cplx> out(nodes.begin(), nodes.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    int occ = 0, total = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (nodes[j] != nodes[i]) continue;
      if (j < i) ++occ;
      ++total;
    }
    if (total < 2) continue;
    if (nodes[i].imag() == 0.0) {
      // a doubled real splits into +-i delta conjugate pairs
      const double level = static_cast<double>(occ / 2 + 1);
      const double sign = (occ % 2 == 0) ? 1.0 : -1.0;
      out[i] += cplx(0.0, sign * delta * level);
    } else if (occ > 0) {
      // the conjugate partner picks up the same real offset
      out[i] += cplx(delta * occ, 0.0);
    }
  }
  return out;
}

}  // namespace

namespace {

struct KallioniemiPoint {
  std::uint8_t member = 0;
  int argmax_m = 0;
};

KallioniemiPoint kallioniemi_point(std::span<const cplx> nodes, int n, int k, double z,
                                   int m_max) {
  const FactoredResidual residual(n, k, z, nodes, m_max);
  double sup = -1.0;
  double term_n = 0.0;
  int argmax_m = n;
  for (int m = n; m <= m_max; ++m) {
    const double value = inverse_falling_factorial(m, n) * std::abs(residual.eval(m));
    if (m == n) term_n = value;
    if (value > sup) {
      sup = value;
      argmax_m = m;
    }
  }
  KallioniemiPoint out;
  out.argmax_m = argmax_m;
  out.member = sup <= term_n * (1.0 + 1e-9) + 1e-12 ? 1 : 0;
  return out;
}

KallioniemiEstimate kallioniemi_impl(std::span<const cplx> nodes, int k, int z_resolution,
                                     int m_max, int threads, bool parallel) {
  const int n = static_cast<int>(nodes.size());
  require(n >= 1, errc::precondition, "kallioniemi_estimate: need n >= 1");
  require(k >= 0 && k <= n - 1, errc::precondition, "kallioniemi_estimate: k out of range");
  require(z_resolution >= 2, errc::precondition, "kallioniemi_estimate: need z_resolution >= 2");
  require(m_max >= n, errc::precondition, "kallioniemi_estimate: need m_max >= n");

  KallioniemiEstimate est;
  est.grid.nodes = perturb_repeated_nodes(nodes, 1e-9);
  est.k = k;
  est.m_truncation = m_max;
  est.z_samples.resize(static_cast<std::size_t>(z_resolution));
  est.membership.assign(static_cast<std::size_t>(z_resolution), 0);
  for (int i = 0; i < z_resolution; ++i)
    est.z_samples[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / (z_resolution - 1.0);

  std::vector<int> argmax(static_cast<std::size_t>(z_resolution), n);
  const auto run_point = [&](int i) {
    const KallioniemiPoint p =
        kallioniemi_point(est.grid.nodes, n, k, est.z_samples[static_cast<std::size_t>(i)], m_max);
    est.membership[static_cast<std::size_t>(i)] = p.member;
    argmax[static_cast<std::size_t>(i)] = p.argmax_m;
  };
  if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads(threads))
#endif
    for (int i = 0; i < z_resolution; ++i) run_point(i);
  } else {
    for (int i = 0; i < z_resolution; ++i) run_point(i);
  }

  // Sup attained in the last quarter of the m range: the truncation at
  // m_max is not trustworthy for those z.
  const int tail_start = m_max - (m_max - n + 1) / 4;
  for (int a : argmax)
    if (a > tail_start) est.truncation_suspect = true;
  return est;
}

}  // namespace

KallioniemiEstimate kallioniemi_estimate(std::span<const cplx> nodes, int k, int z_resolution,
                                         int m_max, int threads) {
  return kallioniemi_impl(nodes, k, z_resolution, m_max, threads, threads != 1);
}

KallioniemiEstimate kallioniemi_estimate_serial(std::span<const cplx> nodes, int k,
                                                int z_resolution, int m_max) {
  return kallioniemi_impl(nodes, k, z_resolution, m_max, 1, false);
}

UniformScanResult scan_uniform(std::span<const cplx> nodes, int k, int t_max, int z_resolution,
                               int threads) {
  const int n = static_cast<int>(nodes.size());
  require(n >= 1, errc::precondition, "scan_uniform: need n >= 1");
  require(k >= 0 && k <= n - 1, errc::precondition, "scan_uniform: k out of range");
  require(t_max >= n, errc::precondition, "scan_uniform: need t_max >= n");
  require(z_resolution >= 2, errc::precondition, "scan_uniform: need z_resolution >= 2");

  const int tcount = t_max - n + 1;
  std::vector<double> max_abs(static_cast<std::size_t>(tcount), 0.0);
  std::vector<double> rhs_parts(static_cast<std::size_t>(z_resolution), 0.0);
  std::vector<std::vector<double>> partial(static_cast<std::size_t>(z_resolution));

  const auto run_z = [&](int i) {
    const double z = -1.0 + 2.0 * i / (z_resolution - 1.0);
    std::vector<cplx> shifted(nodes.begin(), nodes.end());
    for (cplx& w : shifted) w -= z;
    SymTable table(shifted, 0);
    rhs_parts[static_cast<std::size_t>(i)] = std::abs(table.e(n - k));
    const FactoredResidual residual(n, k, z, nodes, t_max);
    auto& mine = partial[static_cast<std::size_t>(i)];
    mine.assign(static_cast<std::size_t>(tcount), 0.0);
    for (int t = n; t <= t_max; ++t)
      mine[static_cast<std::size_t>(t - n)] = std::abs(residual.eval(t)) / binomial(t, n);
  };

  if (threads != 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(effective_threads(threads))
#endif
    for (int i = 0; i < z_resolution; ++i) run_z(i);
  } else {
    for (int i = 0; i < z_resolution; ++i) run_z(i);
  }

  UniformScanResult res;
  for (int i = 0; i < z_resolution; ++i) {
    res.rhs = std::max(res.rhs, rhs_parts[static_cast<std::size_t>(i)]);
    for (int j = 0; j < tcount; ++j)
      max_abs[static_cast<std::size_t>(j)] =
          std::max(max_abs[static_cast<std::size_t>(j)], partial[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
  }
  res.attained_at_t = n;
  res.sup_over_t = max_abs[0];
  for (int j = 1; j < tcount; ++j) {
    if (max_abs[static_cast<std::size_t>(j)] > res.sup_over_t) {
      res.sup_over_t = max_abs[static_cast<std::size_t>(j)];
      res.attained_at_t = n + j;
    }
  }
  return res;
}

namespace {

nlohmann::json nodes_to_json(const std::vector<cplx>& nodes) {
  nlohmann::json out = nlohmann::json::array();
  for (const cplx& z : nodes) out.push_back({z.real(), z.imag()});
  return out;
}

}  // namespace

nlohmann::json to_json(const Counterexample& record) {
  return {{"t", record.t},       {"n", record.n},
          {"k", record.k},       {"trial", record.trial},
          {"abs_q", record.abs_q}, {"nodes", nodes_to_json(record.nodes)}};
}

nlohmann::json to_json(const QReport& report) {
  nlohmann::json counterexamples = nlohmann::json::array();
  for (const auto& c : report.counterexamples) counterexamples.push_back(to_json(c));
  return {{"t", report.t},
          {"n", report.n},
          {"k", report.k},
          {"samples", report.samples},
          {"max_abs_q", report.max_abs_q},
          {"worst_grid", nodes_to_json(report.worst_grid.nodes)},
          {"singular_skipped", report.singular_skipped},
          {"seed", report.seed},
          {"counterexamples", counterexamples}};
}

nlohmann::json to_json(const KallioniemiEstimate& estimate) {
  long long members = 0;
  for (auto m : estimate.membership) members += m;
  return {{"nodes", nodes_to_json(estimate.grid.nodes)},
          {"k", estimate.k},
          {"z_resolution", static_cast<long long>(estimate.z_samples.size())},
          {"member_count", members},
          {"full_membership", members == static_cast<long long>(estimate.membership.size())},
          {"m_truncation", estimate.m_truncation},
          {"truncation_suspect", estimate.truncation_suspect}};
}

nlohmann::json to_json(const UniformScanResult& result) {
  return {{"sup_over_t", result.sup_over_t},
          {"rhs", result.rhs},
          {"attained_at_t", result.attained_at_t}};
}

}  // namespace hookamp
