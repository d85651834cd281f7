#include "hookamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hookamp {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Allocation-free evaluation of sum_k w_k |s_(t-n|n-k)(roots)| for the grid
// hot loop; Newton identities on stack arrays sized by the brute-force caps.
// Independent of the SymTable code path on purpose: the oracle re-derives
// the objective it checks.
struct Objective {
  std::array<cplx, kBruteMaxTime + 1> p{}, h{};
  std::array<cplx, kBruteMaxOrder + 1> e{};

  double eval(std::span<const cplx> roots, std::span<const double> weights, int t) {
    const int n = static_cast<int>(roots.size());
    const int hdeg = t - n;
    const int pmax = std::max(n, hdeg);
    std::array<cplx, kBruteMaxOrder> zpow;
    for (int j = 0; j < n; ++j) zpow[static_cast<std::size_t>(j)] = roots[j];
    for (int i = 1; i <= pmax; ++i) {
      cplx s = 0.0;
      for (int j = 0; j < n; ++j) s += zpow[static_cast<std::size_t>(j)];
      p[static_cast<std::size_t>(i)] = s;
      if (i < pmax)
        for (int j = 0; j < n; ++j) zpow[static_cast<std::size_t>(j)] *= roots[j];
    }
    e[0] = 1.0;
    for (int d = 1; d <= n; ++d) {
      cplx acc = 0.0;
      for (int i = 1; i <= d; ++i) {
        const cplx term = p[static_cast<std::size_t>(i)] * e[static_cast<std::size_t>(d - i)];
        acc += (i % 2 == 1) ? term : -term;
      }
      e[static_cast<std::size_t>(d)] = acc / static_cast<double>(d);
    }
    h[0] = 1.0;
    for (int d = 1; d <= hdeg; ++d) {
      cplx acc = 0.0;
      for (int i = 1; i <= d; ++i)
        acc += p[static_cast<std::size_t>(i)] * h[static_cast<std::size_t>(d - i)];
      h[static_cast<std::size_t>(d)] = acc / static_cast<double>(d);
    }
    double m = 0.0;
    for (int k = 1; k <= n; ++k) {
      // s_(t-n|n-k) = sum_j (-1)^j h_{t-n-j} e_{n-k+j+1}
      cplx s = 0.0;
      for (int j = 0; j <= hdeg && n - k + j + 1 <= n; ++j) {
        const cplx term =
            h[static_cast<std::size_t>(hdeg - j)] * e[static_cast<std::size_t>(n - k + j + 1)];
        s += (j % 2 == 0) ? term : -term;
      }
      m += weights[static_cast<std::size_t>(k - 1)] * std::abs(s);
    }
    return m;
  }
};

double objective(std::span<const cplx> roots, std::span<const double> weights, int t) {
  Objective scratch;
  return scratch.eval(roots, weights, t);
}

// One evaluated root tuple. Ties on the value are broken by the
// lexicographically smallest phase vector, then radius vector, then by
// preferring grid cells over random samples (by index). This makes the
// argmax independent of evaluation order, hence of the thread count.
struct Candidate {
  double value = -1.0;
  std::vector<int> phase_idx;
  std::vector<int> radial_idx;
  long long sample_idx = -1;  // -1 for grid cells
  std::vector<cplx> roots;

  bool beats(const Candidate& o) const {
    if (o.value < 0.0) return true;
    if (value != o.value) return value > o.value;
    if (sample_idx != o.sample_idx) return sample_idx < o.sample_idx;
    if (phase_idx != o.phase_idx) return phase_idx < o.phase_idx;
    return radial_idx < o.radial_idx;
  }
};

void merge(Candidate& best, const Candidate& cand) {
  if (cand.value >= 0.0 && cand.beats(best)) best = cand;
}

struct GridLayout {
  int n = 0;
  int phases = 0;
  int radial = 0;
  std::vector<std::vector<double>> radial_values;  // per root
  long long per_root = 0;
  long long total = 0;
};

GridLayout make_layout(std::span<const double> radii, const OracleConfig& cfg) {
  GridLayout g;
  g.n = static_cast<int>(radii.size());
  g.phases = cfg.phase_grid;
  g.radial = cfg.radial_grid;
  g.radial_values.resize(static_cast<std::size_t>(g.n));
  for (int j = 0; j < g.n; ++j) {
    auto& vals = g.radial_values[static_cast<std::size_t>(j)];
    if (g.radial == 1) {
      vals = {radii[static_cast<std::size_t>(j)]};
    } else {
      for (int i = 0; i < g.radial; ++i)
        vals.push_back(radii[static_cast<std::size_t>(j)] * i / (g.radial - 1.0));
    }
  }
  g.per_root = static_cast<long long>(g.phases) * static_cast<long long>(g.radial_values[0].size());
  g.total = 1;
  for (int j = 0; j < g.n; ++j) g.total *= g.per_root;
  return g;
}

void decode_cell(const GridLayout& g, long long cell, std::span<cplx> roots,
                 std::span<int> phase_idx, std::span<int> radial_idx) {
  long long rest = cell;
  // root 0 is the most significant component, phase above radius within a
  // root, matching the lexicographic tie-break order
  for (int j = g.n - 1; j >= 0; --j) {
    const long long local = rest % g.per_root;
    rest /= g.per_root;
    const int nrad = static_cast<int>(g.radial_values[static_cast<std::size_t>(j)].size());
    const int pi_idx = static_cast<int>(local / nrad);
    const int ri_idx = static_cast<int>(local % nrad);
    phase_idx[static_cast<std::size_t>(j)] = pi_idx;
    radial_idx[static_cast<std::size_t>(j)] = ri_idx;
    const double rho = g.radial_values[static_cast<std::size_t>(j)][static_cast<std::size_t>(ri_idx)];
    const double phi = kTwoPi * pi_idx / g.phases;
    roots[static_cast<std::size_t>(j)] = cplx(rho * std::cos(phi), rho * std::sin(phi));
  }
}

Candidate eval_cell(const GridLayout& g, std::span<const double> weights, int t, long long cell,
                    Objective& scratch) {
  Candidate c;
  c.phase_idx.resize(static_cast<std::size_t>(g.n));
  c.radial_idx.resize(static_cast<std::size_t>(g.n));
  c.roots.resize(static_cast<std::size_t>(g.n));
  decode_cell(g, cell, c.roots, c.phase_idx, c.radial_idx);
  c.value = scratch.eval(c.roots, weights, t);
  return c;
}

// Hot loop: evaluate without any heap traffic, materialize a full candidate
// only when the value reaches the running best.
void scan_cells(const GridLayout& g, std::span<const double> weights, int t, long long lo,
                long long hi, Candidate& best) {
  Objective scratch;
  std::array<cplx, kBruteMaxOrder> roots;
  std::array<int, kBruteMaxOrder> pidx, ridx;
  const std::span<cplx> root_span(roots.data(), static_cast<std::size_t>(g.n));
  for (long long cell = lo; cell < hi; ++cell) {
    decode_cell(g, cell, root_span, std::span<int>(pidx.data(), static_cast<std::size_t>(g.n)),
                std::span<int>(ridx.data(), static_cast<std::size_t>(g.n)));
    const double v = scratch.eval(root_span, weights, t);
    if (v >= best.value) merge(best, eval_cell(g, weights, t, cell, scratch));
  }
}

Candidate eval_sample(std::span<const double> radii, std::span<const double> weights, int t,
                      std::uint64_t seed, long long idx) {
  Candidate c;
  c.sample_idx = idx;
  Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(idx) + 1));
  c.roots.resize(radii.size());
  for (std::size_t j = 0; j < radii.size(); ++j) c.roots[j] = rng.in_disc(radii[j]);
  c.value = objective(c.roots, weights, t);
  return c;
}

void check_inputs(int t, std::span<const double> radii, std::span<const double> weights,
                  const OracleConfig& cfg) {
  const int n = static_cast<int>(radii.size());
  require(n >= 1 && n <= kBruteMaxOrder, errc::precondition,
          "brute_force_max: n must be in [1, " + std::to_string(kBruteMaxOrder) + "]");
  require(t >= n && t <= kBruteMaxTime, errc::precondition,
          "brute_force_max: t must be in [n, " + std::to_string(kBruteMaxTime) + "]");
  require(static_cast<int>(weights.size()) == n, errc::precondition,
          "brute_force_max: weights must have n entries");
  require(cfg.phase_grid >= 1 && cfg.radial_grid >= 1, errc::precondition,
          "brute_force_max: grid resolutions must be >= 1");
  require(cfg.random_trials >= 0, errc::precondition, "brute_force_max: trials must be >= 0");
  require(cfg.tolerance > 0.0, errc::precondition, "brute_force_max: tolerance must be > 0");
}

double max_pairwise_phase_distance(std::span<const cplx> roots) {
  std::vector<double> phases;
  for (const cplx& z : roots)
    if (std::abs(z) > 1e-9) phases.push_back(std::arg(z));
  double dist = 0.0;
  for (std::size_t i = 0; i < phases.size(); ++i)
    for (std::size_t j = i + 1; j < phases.size(); ++j) {
      double d = std::fmod(std::abs(phases[i] - phases[j]), kTwoPi);
      d = std::min(d, kTwoPi - d);
      dist = std::max(dist, d);
    }
  return dist;
}

OracleResult finish(Candidate best, int t, std::span<const double> radii,
                    std::span<const double> weights) {
  OracleResult res;
  res.brute_max = best.value;
  res.argmax_roots = std::move(best.roots);
  res.cophase_distance = max_pairwise_phase_distance(res.argmax_roots);
  AmplitudeQuery q{t, std::vector<double>(radii.begin(), radii.end()),
                   std::vector<double>(weights.begin(), weights.end())};
  res.closed_form = max_amplitude_polydisc(q);
  res.gap = res.closed_form - res.brute_max;
  return res;
}

}  // namespace

OracleResult brute_force_max_serial(int t, std::span<const double> radii,
                                    std::span<const double> weights, const OracleConfig& cfg) {
  check_inputs(t, radii, weights, cfg);
  const GridLayout g = make_layout(radii, cfg);
  Candidate best;
  scan_cells(g, weights, t, 0, g.total, best);
  for (long long i = 0; i < cfg.random_trials; ++i)
    merge(best, eval_sample(radii, weights, t, cfg.seed, i));
  return finish(std::move(best), t, radii, weights);
}

OracleResult brute_force_max(int t, std::span<const double> radii,
                             std::span<const double> weights, const OracleConfig& cfg) {
  if (cfg.threads == 1) return brute_force_max_serial(t, radii, weights, cfg);
  check_inputs(t, radii, weights, cfg);
  const GridLayout g = make_layout(radii, cfg);
  Candidate best;
#ifdef _OPENMP
  const int nt = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  std::vector<Candidate> locals(static_cast<std::size_t>(nt));
#pragma omp parallel num_threads(nt)
  {
    const int tid = omp_get_thread_num();
    Candidate mine;
    // contiguous static blocks; the merge order cannot influence the result
    // because the candidate comparator is a strict total order
    const long long chunk = (g.total + nt - 1) / nt;
    const long long lo = std::min<long long>(g.total, tid * chunk);
    const long long hi = std::min<long long>(g.total, lo + chunk);
    scan_cells(g, weights, t, lo, hi, mine);
#pragma omp for schedule(static) nowait
    for (long long i = 0; i < cfg.random_trials; ++i)
      merge(mine, eval_sample(radii, weights, t, cfg.seed, i));
    locals[static_cast<std::size_t>(tid)] = std::move(mine);
  }
  for (auto& c : locals) merge(best, c);
#else
  scan_cells(g, weights, t, 0, g.total, best);
  for (long long i = 0; i < cfg.random_trials; ++i)
    merge(best, eval_sample(radii, weights, t, cfg.seed, i));
#endif
  return finish(std::move(best), t, radii, weights);
}

namespace {

// Finite-difference Lipschitz probe of the objective over the polydisc;
// no analytic modulus of continuity is assumed.
double lipschitz_probe(int t, std::span<const double> radii, std::span<const double> weights,
                       std::uint64_t seed) {
  const int n = static_cast<int>(radii.size());
  double rmax = 0.0;
  for (double r : radii) rmax = std::max(rmax, r);
  const double eps = 1e-5 * std::max(1.0, rmax);

  std::vector<std::vector<cplx>> probes;
  probes.emplace_back(radii.begin(), radii.end());  // the cophase extremal point
  Rng rng(Rng::mix(seed, 0x50524F4245ULL));
  for (int i = 0; i < 8; ++i) {
    std::vector<cplx> z(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(j)] = rng.in_disc(radii[static_cast<std::size_t>(j)]);
    probes.push_back(std::move(z));
  }

  const cplx dirs[4] = {cplx(1, 0), cplx(-1, 0), cplx(0, 1), cplx(0, -1)};
  double lip = 0.0;
  for (const auto& z : probes) {
    const double base = objective(z, weights, t);
    for (int j = 0; j < n; ++j)
      for (const cplx& d : dirs) {
        std::vector<cplx> zp = z;
        zp[static_cast<std::size_t>(j)] += eps * d;
        lip = std::max(lip, std::abs(objective(zp, weights, t) - base) / eps);
      }
  }
  return lip;
}

}  // namespace

VerifyResult verify_cophase(int t, std::span<const double> radii,
                            std::span<const double> weights, const OracleConfig& cfg) {
  VerifyResult v;
  v.result = brute_force_max(t, radii, weights, cfg);

  // Worst-case displacement from the continuum maximizer to a grid point.
  double displacement = 0.0;
  for (std::size_t j = 0; j < radii.size(); ++j) {
    const double arc = radii[j] * std::numbers::pi / cfg.phase_grid;
    const double rad = cfg.radial_grid > 1 ? 0.5 * radii[j] / (cfg.radial_grid - 1) : 0.0;
    displacement += std::hypot(arc, rad);
  }
  const double lip = lipschitz_probe(t, radii, weights, cfg.seed);
  v.grid_slack = 2.0 * lip * displacement + cfg.tolerance;
  v.ok = v.result.gap >= -cfg.tolerance && v.result.gap <= v.grid_slack;
  return v;
}

double cross_check_interp(std::span<const cplx> roots, int t) {
  const auto dev = [](const InterpCoeffs& a, const InterpCoeffs& b) {
    double scale = 1.0;
    for (const cplx& c : a.psi) scale = std::max(scale, std::abs(c));
    for (const cplx& c : b.psi) scale = std::max(scale, std::abs(c));
    double d = 0.0;
    for (std::size_t k = 0; k < a.psi.size(); ++k) d = std::max(d, std::abs(a.psi[k] - b.psi[k]));
    return d / scale;
  };
  const InterpCoeffs s = interp_coeffs(roots, t, InterpMethod::schur);
  const InterpCoeffs r = interp_coeffs(roots, t, InterpMethod::recurrence);
  double worst = dev(s, r);
  if (roots.size() < 2 || min_pairwise_distance(roots) >= kNodeSeparationThreshold) {
    const InterpCoeffs v = interp_coeffs(roots, t, InterpMethod::vandermonde);
    worst = std::max({worst, dev(s, v), dev(r, v)});
  }
  return worst;
}

nlohmann::json to_json(const OracleResult& result) {
  nlohmann::json roots = nlohmann::json::array();
  for (const cplx& z : result.argmax_roots) roots.push_back({z.real(), z.imag()});
  return {{"brute_max", result.brute_max},
          {"closed_form", result.closed_form},
          {"gap", result.gap},
          {"argmax_roots", roots},
          {"cophase_distance", result.cophase_distance}};
}

nlohmann::json to_json(const VerifyResult& verdict) {
  nlohmann::json j = to_json(verdict.result);
  j["ok"] = verdict.ok;
  j["grid_slack"] = verdict.grid_slack;
  return j;
}

}  // namespace hookamp
