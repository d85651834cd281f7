#include "hookamp/reinhardt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hookamp/amplitude.hpp"

namespace hookamp {

PolydiscInitOracle::PolydiscInitOracle(std::vector<double> bounds) : bounds_(std::move(bounds)) {
  require(!bounds_.empty(), errc::precondition, "polydisc oracle: empty bounds");
  for (double b : bounds_)
    require(b >= 0.0, errc::precondition, "polydisc oracle: bounds must be nonnegative");
}

std::pair<std::vector<double>, double> PolydiscInitOracle::maximize(
    std::span<const double> c) const {
  require(c.size() == bounds_.size(), errc::precondition, "polydisc oracle: dimension mismatch");
  double value = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) value += c[k] * bounds_[k];
  return {bounds_, value};
}

L1BallInitOracle::L1BallInitOracle(std::vector<double> a) : a_(std::move(a)) {
  require(!a_.empty(), errc::precondition, "l1 oracle: empty scale vector");
  for (double ak : a_)
    require(ak > 0.0, errc::precondition, "l1 oracle: scales must be positive");
}

std::pair<std::vector<double>, double> L1BallInitOracle::maximize(
    std::span<const double> c) const {
  require(c.size() == a_.size(), errc::precondition, "l1 oracle: dimension mismatch");
  std::size_t best = 0;
  double best_val = c[0] / a_[0];
  for (std::size_t k = 1; k < c.size(); ++k) {
    const double v = c[k] / a_[k];
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  std::vector<double> w(c.size(), 0.0);
  if (best_val > 0.0) {
    w[best] = 1.0 / a_[best];
    return {std::move(w), best_val};
  }
  return {std::move(w), 0.0};  // degenerate direction: the origin is feasible
}

FinitePointsInitOracle::FinitePointsInitOracle(std::vector<std::vector<double>> points)
    : points_(std::move(points)) {
  require(!points_.empty(), errc::precondition, "points oracle: empty point set");
  for (const auto& p : points_)
    require(p.size() == points_[0].size(), errc::precondition,
            "points oracle: inconsistent dimensions");
}

std::pair<std::vector<double>, double> FinitePointsInitOracle::maximize(
    std::span<const double> c) const {
  require(c.size() == points_[0].size(), errc::precondition, "points oracle: dimension mismatch");
  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * points_[i][k];
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  return {points_[best], best_val};
}

double f_t(std::span<const double> radii, std::span<const double> weights, int t) {
  AmplitudeQuery q{t, std::vector<double>(radii.begin(), radii.end()),
                   std::vector<double>(weights.begin(), weights.end())};
  return max_amplitude_polydisc(q);
}

namespace {

// Direction of the linear functional w -> F_t(r|w).
std::vector<double> schur_direction(std::span<const double> r, int t) {
  const int n = static_cast<int>(r.size());
  std::vector<cplx> point(r.begin(), r.end());
  SymTable table(point, t - n);
  std::vector<double> c(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    c[static_cast<std::size_t>(k - 1)] = schur_hook(Hook{t - n, n - k}, table).real();
  return c;
}

}  // namespace

ReinhardtSolution vertex_method(const LogAffineRootDomain& domain,
                                const InitDomainOracle& init_oracle, int t, int threads) {
  require(!domain.vertices.empty(), errc::precondition, "vertex_method: empty vertex list");
  const int n = static_cast<int>(domain.vertices[0].size());
  require(n >= 1, errc::precondition, "vertex_method: vertices must be nonempty vectors");
  require(t >= n, errc::precondition, "vertex_method: t must be >= n");
  for (const auto& v : domain.vertices)
    require(static_cast<int>(v.size()) == n, errc::precondition,
            "vertex_method: inconsistent vertex dimensions");

  const int count = static_cast<int>(domain.vertices.size());
  std::vector<double> values(static_cast<std::size_t>(count));

  const auto eval_vertex = [&](int i) {
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
      r[static_cast<std::size_t>(k)] = std::exp(domain.vertices[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]);
    return init_oracle.maximize(schur_direction(r, t)).second;
  };

#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
#endif
  for (int i = 0; i < count; ++i) values[static_cast<std::size_t>(i)] = eval_vertex(i);

  int best = 0;
  for (int i = 1; i < count; ++i)
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;

  ReinhardtSolution sol;
  sol.argmax_vertex_index = best;
  sol.r_star.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
    sol.r_star[static_cast<std::size_t>(k)] = std::exp(domain.vertices[static_cast<std::size_t>(best)][static_cast<std::size_t>(k)]);
  auto [w, value] = init_oracle.maximize(schur_direction(sol.r_star, t));
  sol.w_star = std::move(w);
  sol.value = value;
  return sol;
}

std::vector<std::vector<double>> dominated_vertex_filter(
    const std::vector<std::vector<double>>& vertices) {
  const auto leq = [](const std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t k = 0; k < a.size(); ++k)
      if (a[k] > b[k]) return false;
    return true;
  };
  std::vector<std::vector<double>> kept;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < vertices.size() && !dominated; ++j) {
      if (i == j || !leq(vertices[i], vertices[j])) continue;
      // strictly dominated, or an exact duplicate of an earlier vertex
      if (vertices[j] != vertices[i] || j < i) dominated = true;
    }
    if (!dominated) kept.push_back(vertices[i]);
  }
  return kept;
}

ReinhardtProblem load_reinhardt_problem(const nlohmann::json& j) {
  ReinhardtProblem p;
  try {
    p.n = j.at("n").get<int>();
    p.t = j.at("t").get<int>();
    p.domain.vertices = j.at("vertices").get<std::vector<std::vector<double>>>();
    p.domain.label = j.value("label", std::string{});
    const auto& o = j.at("init_oracle");
    const std::string kind = o.at("kind").get<std::string>();
    if (kind == "polydisc") {
      p.init_oracle = std::make_unique<PolydiscInitOracle>(o.at("bounds").get<std::vector<double>>());
    } else if (kind == "l1") {
      p.init_oracle = std::make_unique<L1BallInitOracle>(o.at("a").get<std::vector<double>>());
    } else if (kind == "points") {
      p.init_oracle = std::make_unique<FinitePointsInitOracle>(
          o.at("points").get<std::vector<std::vector<double>>>());
    } else {
      fail(errc::precondition, "reinhardt: unknown init_oracle kind '" + kind + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::precondition, std::string("reinhardt: malformed domain spec: ") + e.what());
  }
  require(p.n >= 1, errc::precondition, "reinhardt: n must be >= 1");
  require(p.t >= p.n, errc::precondition, "reinhardt: t must be >= n");
  require(!p.domain.vertices.empty(), errc::precondition, "reinhardt: empty vertex list");
  for (const auto& v : p.domain.vertices)
    require(static_cast<int>(v.size()) == p.n, errc::precondition,
            "reinhardt: vertex dimension must equal n");
  return p;
}

nlohmann::json to_json(const ReinhardtSolution& solution) {
  return {{"r_star", solution.r_star},
          {"w_star", solution.w_star},
          {"value", solution.value},
          {"argmax_vertex_index", solution.argmax_vertex_index}};
}

}  // namespace hookamp
