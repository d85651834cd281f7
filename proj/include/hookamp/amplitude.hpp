#pragma once

#include <span>
#include <vector>

#include "hookamp/common.hpp"
#include "hookamp/symfunc.hpp"

namespace hookamp {

// Monic characteristic data of x_{t+n} = -sum_k f_{k-1} x_{t+k-1}.
// The roots are the primary datum; coeffs holds f_0..f_n with f_n = 1.
struct RecurrenceSpec {
  std::vector<cplx> roots;
  std::vector<cplx> coeffs;

  int order() const { return static_cast<int>(roots.size()); }
};

RecurrenceSpec char_poly_from_roots(std::span<const cplx> roots);

// Trajectory x_0..x_T from the initialization x_0..x_{n-1}. T >= n-1.
std::vector<cplx> simulate(const RecurrenceSpec& spec, std::span<const cplx> init, int T);

enum class InterpMethod { vandermonde, recurrence, schur };

// Coefficients (degrees 0..n-1) of the unique degree <= n-1 interpolant
// of z^t on the nodes. psi[k] = psi_t^{(k)}(0) / k!.
struct InterpCoeffs {
  std::vector<cplx> psi;
  int t = 0;
  InterpMethod method = InterpMethod::schur;

  cplx eval(cplx z) const;
};

// Two nodes closer than this make the divided-difference route refuse;
// the Schur route stays well-defined for arbitrary (repeated) nodes.
inline constexpr double kNodeSeparationThreshold = 1e-12;

InterpCoeffs interp_coeffs(std::span<const cplx> roots, int t, InterpMethod method);
// Auto-routing: divided differences on simple grids, Schur otherwise.
InterpCoeffs interp_coeffs(std::span<const cplx> roots, int t);

double min_pairwise_distance(std::span<const cplx> points);

// M_t(f | D_n(w)) = sum_k w_k |psi_t^{(k-1)}(0)| / (k-1)!, Schur route.
double amplitude_at(const RecurrenceSpec& spec, std::span<const double> weights, int t);

struct AmplitudeQuery {
  int t = 0;
  std::vector<double> radii;
  std::vector<double> weights;

  int order() const { return static_cast<int>(radii.size()); }
};

// The exact supremum over the polydisc class:
// M_t(D_n(r) | D_n(w)) = sum_k w_k s_(t-n|n-k)(r_1..r_n).
double max_amplitude_polydisc(const AmplitudeQuery& query);

// Identical-roots value C(t,n) r^{t-n} sum_k C(n,k) k/(t-n+k) r^k.
double repeated_root_closed_form(int n, double r, int t);

// Extremal initialization x_{k-1} = -w_k e^{i(pi-theta)(n-k+1)}.
std::vector<cplx> optimal_initialization(int n, std::span<const double> weights, double theta);

struct PeakAmplitude {
  double value = 0.0;
  int argmax_t = 0;
  bool unbounded = false;        // some radius exceeds 1: sup over all t is infinite
  bool growth_detected = false;  // still growing at the scan horizon t_max
};

PeakAmplitude peak_amplitude(std::span<const double> radii, std::span<const double> weights,
                             int t_max);

// Upper bounds on M_t(D(r)^n | D^n).
double crude_bound(int n, double r, int t);    // ((3n-1)/2 r)^{t-n} [(1+r)^n - 1]
double refined_bound(int n, double r, int t);  // C(t,n) r^{t-n} [(1+r)^n - 1]
// Bound on ||psi_t||_1 for nodes in the closed unit polydisc.
double fourier_bound(int n, int t);  // sqrt(n) [2^n C(t,n) + 1]

// Default CLI range guards; C(t,n) precision degrades beyond these.
inline constexpr int kDefaultMaxOrder = 16;
inline constexpr int kDefaultMaxTime = 64;

}  // namespace hookamp
