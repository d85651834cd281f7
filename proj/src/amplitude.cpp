#include "hookamp/amplitude.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hookamp {

namespace {

cplx pow_int(cplx z, int k) {
  cplx r = 1.0;
  for (int i = 0; i < k; ++i) r *= z;
  return r;
}

void check_weights(std::span<const double> weights, int n) {
  require(static_cast<int>(weights.size()) == n, errc::precondition,
          "weights must have one entry per recurrence order");
  for (double w : weights)
    require(w >= 0.0, errc::precondition, "weights must be nonnegative");
}

}  // namespace

RecurrenceSpec char_poly_from_roots(std::span<const cplx> roots) {
  const int n = static_cast<int>(roots.size());
  require(n >= 1, errc::precondition, "char_poly_from_roots: need at least one root");
  SymTable table(roots, 0);
  RecurrenceSpec spec;
  spec.roots.assign(roots.begin(), roots.end());
  spec.coeffs.assign(static_cast<std::size_t>(n) + 1, cplx(0.0));
  spec.coeffs[static_cast<std::size_t>(n)] = 1.0;
  // f_{k-1} = (-1)^{n-k+1} e_{n-k+1}(z_1..z_n)
  for (int k = 1; k <= n; ++k) {
    const cplx ev = table.e(n - k + 1);
    spec.coeffs[static_cast<std::size_t>(k - 1)] = ((n - k + 1) % 2 == 0) ? ev : -ev;
  }
  return spec;
}

std::vector<cplx> simulate(const RecurrenceSpec& spec, std::span<const cplx> init, int T) {
  const int n = spec.order();
  require(static_cast<int>(init.size()) == n, errc::precondition,
          "simulate: init must have n entries");
  require(T >= n - 1, errc::precondition, "simulate: T must be >= n-1");
  std::vector<cplx> x(init.begin(), init.end());
  x.resize(static_cast<std::size_t>(T) + 1, cplx(0.0));
  for (int t = 0; t + n <= T; ++t) {
    cplx acc = 0.0;
    for (int k = 1; k <= n; ++k)
      acc += spec.coeffs[static_cast<std::size_t>(k - 1)] * x[static_cast<std::size_t>(t + k - 1)];
    x[static_cast<std::size_t>(t + n)] = -acc;
  }
  return x;
}

cplx InterpCoeffs::eval(cplx z) const {
  cplx r = 0.0;
  for (std::size_t i = psi.size(); i-- > 0;) r = r * z + psi[i];
  return r;
}

double min_pairwise_distance(std::span<const cplx> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::min(best, std::abs(points[i] - points[j]));
  return best;
}

namespace {

InterpCoeffs interp_schur(std::span<const cplx> roots, int t) {
  const int n = static_cast<int>(roots.size());
  SymTable table(roots, t - n);
  InterpCoeffs out;
  out.t = t;
  out.method = InterpMethod::schur;
  out.psi.resize(static_cast<std::size_t>(n));
  // psi_t^{(k)}(0)/k! = (-1)^{n-k+1} s_(t-n | n-k-1)(roots)
  for (int k = 0; k < n; ++k) {
    const cplx s = schur_hook(Hook{t - n, n - k - 1}, table);
    out.psi[static_cast<std::size_t>(k)] = ((n - k + 1) % 2 == 0) ? s : -s;
  }
  return out;
}

InterpCoeffs interp_recurrence(std::span<const cplx> roots, int t) {
  const int n = static_cast<int>(roots.size());
  const RecurrenceSpec spec = char_poly_from_roots(roots);
  InterpCoeffs out;
  out.t = t;
  out.method = InterpMethod::recurrence;
  // psi_n(z) = z^n - f(z)
  out.psi.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.psi[static_cast<std::size_t>(k)] = -spec.coeffs[static_cast<std::size_t>(k)];
  // psi_{t+1}(z) = z psi_t(z) - lead(psi_t) f(z), with lead the degree n-1
  // coefficient (the companion-transpose step).
  std::vector<cplx> next(static_cast<std::size_t>(n));
  for (int step = n; step < t; ++step) {
    const cplx lead = out.psi[static_cast<std::size_t>(n - 1)];
    for (int k = n - 1; k >= 1; --k)
      next[static_cast<std::size_t>(k)] =
          out.psi[static_cast<std::size_t>(k - 1)] - lead * spec.coeffs[static_cast<std::size_t>(k)];
    next[0] = -lead * spec.coeffs[0];
    out.psi.swap(next);
  }
  return out;
}

InterpCoeffs interp_vandermonde(std::span<const cplx> roots, int t) {
  const int n = static_cast<int>(roots.size());
  if (n > 1)
    require(min_pairwise_distance(roots) >= kNodeSeparationThreshold, errc::near_singular_grid,
            "interp_coeffs: near-singular grid for the divided-difference route; "
            "use the schur or recurrence route");
  // Divided differences of the values z_j^t, then Newton-to-monomial basis
  // conversion. No Vandermonde matrix is ever formed or inverted.
  std::vector<cplx> dd(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) dd[static_cast<std::size_t>(j)] = pow_int(roots[static_cast<std::size_t>(j)], t);
  for (int level = 1; level < n; ++level)
    for (int j = n - 1; j >= level; --j)
      dd[static_cast<std::size_t>(j)] =
          (dd[static_cast<std::size_t>(j)] - dd[static_cast<std::size_t>(j - 1)]) /
          (roots[static_cast<std::size_t>(j)] - roots[static_cast<std::size_t>(j - level)]);

  InterpCoeffs out;
  out.t = t;
  out.method = InterpMethod::vandermonde;
  out.psi.assign(static_cast<std::size_t>(n), cplx(0.0));
  out.psi[0] = dd[static_cast<std::size_t>(n - 1)];
  int degree = 0;
  for (int j = n - 2; j >= 0; --j) {
    // acc <- acc * (z - z_j) + dd_j
    ++degree;
    for (int k = degree; k >= 1; --k)
      out.psi[static_cast<std::size_t>(k)] =
          out.psi[static_cast<std::size_t>(k - 1)] - roots[static_cast<std::size_t>(j)] * out.psi[static_cast<std::size_t>(k)];
    out.psi[0] = dd[static_cast<std::size_t>(j)] - roots[static_cast<std::size_t>(j)] * out.psi[0];
  }
  return out;
}

}  // namespace

InterpCoeffs interp_coeffs(std::span<const cplx> roots, int t, InterpMethod method) {
  const int n = static_cast<int>(roots.size());
  require(n >= 1, errc::precondition, "interp_coeffs: need at least one node");
  require(t >= n, errc::precondition, "interp_coeffs: t must be >= n");
  switch (method) {
    case InterpMethod::vandermonde:
      return interp_vandermonde(roots, t);
    case InterpMethod::recurrence:
      return interp_recurrence(roots, t);
    case InterpMethod::schur:
      return interp_schur(roots, t);
  }
  fail(errc::precondition, "interp_coeffs: unknown method");
}

InterpCoeffs interp_coeffs(std::span<const cplx> roots, int t) {
  const bool simple =
      roots.size() < 2 || min_pairwise_distance(roots) >= kNodeSeparationThreshold;
  return interp_coeffs(roots, t, simple ? InterpMethod::vandermonde : InterpMethod::schur);
}

double amplitude_at(const RecurrenceSpec& spec, std::span<const double> weights, int t) {
  const int n = spec.order();
  check_weights(weights, n);
  require(t >= n, errc::precondition, "amplitude_at: t must be >= n");
  const InterpCoeffs psi = interp_coeffs(spec.roots, t, InterpMethod::schur);
  double m = 0.0;
  for (int k = 1; k <= n; ++k)
    m += weights[static_cast<std::size_t>(k - 1)] * std::abs(psi.psi[static_cast<std::size_t>(k - 1)]);
  return m;
}

double max_amplitude_polydisc(const AmplitudeQuery& query) {
  const int n = query.order();
  require(n >= 1, errc::precondition, "max_amplitude_polydisc: need n >= 1");
  require(query.t >= n, errc::precondition, "max_amplitude_polydisc: t must be >= n");
  check_weights(query.weights, n);
  for (double r : query.radii)
    require(r >= 0.0, errc::precondition, "radii must be nonnegative");

  std::vector<cplx> point(query.radii.begin(), query.radii.end());
  SymTable table(point, query.t - n);
  double m = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double s = schur_hook(Hook{query.t - n, n - k}, table).real();
    m += query.weights[static_cast<std::size_t>(k - 1)] * s;
  }
  return m;
}

double repeated_root_closed_form(int n, double r, int t) {
  require(n >= 1 && t >= n, errc::precondition, "repeated_root_closed_form: need t >= n >= 1");
  require(r >= 0.0, errc::precondition, "repeated_root_closed_form: r must be >= 0");
  double sum = 0.0;
  double rk = 1.0;
  for (int k = 1; k <= n; ++k) {
    rk *= r;
    sum += binomial(n, k) * (static_cast<double>(k) / (t - n + k)) * rk;
  }
  return binomial(t, n) * std::pow(r, t - n) * sum;
}

std::vector<cplx> optimal_initialization(int n, std::span<const double> weights, double theta) {
  require(n >= 1, errc::precondition, "optimal_initialization: need n >= 1");
  check_weights(weights, n);
  std::vector<cplx> init(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const double phase = (std::numbers::pi - theta) * (n - k + 1);
    init[static_cast<std::size_t>(k - 1)] =
        -weights[static_cast<std::size_t>(k - 1)] * cplx(std::cos(phase), std::sin(phase));
  }
  return init;
}

PeakAmplitude peak_amplitude(std::span<const double> radii, std::span<const double> weights,
                             int t_max) {
  const int n = static_cast<int>(radii.size());
  require(n >= 1, errc::precondition, "peak_amplitude: need n >= 1");
  require(t_max >= n, errc::precondition, "peak_amplitude: t_max must be >= n");

  PeakAmplitude peak;
  peak.argmax_t = n;
  peak.value = -1.0;
  for (int t = n; t <= t_max; ++t) {
    AmplitudeQuery q{t, std::vector<double>(radii.begin(), radii.end()),
                     std::vector<double>(weights.begin(), weights.end())};
    const double v = max_amplitude_polydisc(q);
    if (v > peak.value) {
      peak.value = v;
      peak.argmax_t = t;
    }
  }
  double rmax = 0.0;
  for (double r : radii) rmax = std::max(rmax, r);
  peak.unbounded = rmax > 1.0;
  // Argmax updates are strict, so argmax_t == t_max means the sequence was
  // still climbing at the horizon and the finite-horizon max is not the sup.
  peak.growth_detected = (peak.argmax_t == t_max) && (t_max > n);
  return peak;
}

double crude_bound(int n, double r, int t) {
  require(n >= 1 && t >= n, errc::precondition, "crude_bound: need t >= n >= 1");
  return std::pow(0.5 * (3.0 * n - 1.0) * r, t - n) * (std::pow(1.0 + r, n) - 1.0);
}

double refined_bound(int n, double r, int t) {
  require(n >= 1 && t >= n, errc::precondition, "refined_bound: need t >= n >= 1");
  return binomial(t, n) * std::pow(r, t - n) * (std::pow(1.0 + r, n) - 1.0);
}

double fourier_bound(int n, int t) {
  require(n >= 1 && t >= n, errc::precondition, "fourier_bound: need t >= n >= 1");
  return std::sqrt(static_cast<double>(n)) * (std::pow(2.0, n) * binomial(t, n) + 1.0);
}

}  // namespace hookamp
