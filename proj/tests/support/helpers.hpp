#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "hookamp/common.hpp"

namespace hookamp::testing {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline double rel_err(cplx a, cplx b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

// Random point in the closed unit polydisc with pairwise separation at
// least min_sep (keeps divided differences well conditioned).
inline std::vector<cplx> random_simple_grid(Rng& rng, int n, double min_sep = 0.1,
                                            double radius = 1.0) {
  std::vector<cplx> pts;
  while (static_cast<int>(pts.size()) < n) {
    const cplx z = rng.in_disc(radius);
    bool ok = true;
    for (const cplx& w : pts)
      if (std::abs(z - w) < min_sep) {
        ok = false;
        break;
      }
    if (ok) pts.push_back(z);
    // Separation failures only delay the loop; n <= 8 in every test.
  }
  return pts;
}

inline std::vector<cplx> random_point(Rng& rng, int n, double radius = 1.0) {
  std::vector<cplx> pts(static_cast<std::size_t>(n));
  for (auto& z : pts) z = rng.in_disc(radius);
  return pts;
}

}  // namespace hookamp::testing
