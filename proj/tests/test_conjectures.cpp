#include <doctest.h>

#include <cmath>

#include "hookamp/amplitude.hpp"
#include "hookamp/conjectures.hpp"
#include "support/helpers.hpp"
#include "support/polyref.hpp"

using namespace hookamp;
using hookamp::testing::random_simple_grid;
using hookamp::testing::rel_err;

namespace {

// Self-conjugate grid with distinct nodes, for routes that need simplicity.
std::vector<cplx> simple_self_conjugate(Rng& rng, int n) {
  for (;;) {
    SelfConjugateGrid g = sample_self_conjugate(n, SampleRegion::unit_disc, rng, 0.0);
    if (min_pairwise_distance(g.nodes) > 0.05) return g.nodes;
  }
}

}  // namespace

TEST_CASE("is_self_conjugate") {
  CHECK(is_self_conjugate(std::vector<cplx>{cplx(0, 1), cplx(0, -1)}));
  CHECK_FALSE(is_self_conjugate(std::vector<cplx>{cplx(0, 1), cplx(0, 1)}));
  CHECK(is_self_conjugate(std::vector<cplx>{0.5, 0.5}));
  CHECK_FALSE(is_self_conjugate(std::vector<cplx>{0.5}));
  CHECK_FALSE(is_self_conjugate(std::vector<cplx>{0.5, 0.5, 0.5}));  // odd real multiplicity
  CHECK(is_self_conjugate(std::vector<cplx>{cplx(0.1, 0.2), cplx(0.3, 0.0), cplx(0.3, 0.0),
                                            cplx(0.1, -0.2)}));
}

TEST_CASE("sample_self_conjugate") {
  Rng rng(211);
  for (int rep = 0; rep < 100; ++rep) {
    const auto g2 = sample_self_conjugate(2, SampleRegion::unit_disc, rng);
    CHECK(g2.nodes.size() == 2);
    CHECK(is_self_conjugate(g2.nodes));

    const auto g6 = sample_self_conjugate(6, SampleRegion::right_half_disc, rng);
    CHECK(is_self_conjugate(g6.nodes));
    for (const cplx& z : g6.nodes) {
      CHECK(z.real() >= 0.0);
      CHECK(std::abs(z) <= 1.0 + 1e-12);
    }

    const auto gc = sample_self_conjugate(4, SampleRegion::unit_circle, rng);
    CHECK(is_self_conjugate(gc.nodes));
    for (const cplx& z : gc.nodes) CHECK(rel_err(std::abs(z), 1.0) < 1e-12);
  }
  // the doubled-real branch fires with p_real = 1
  const auto gr = sample_self_conjugate(2, SampleRegion::unit_disc, rng, 1.0);
  CHECK(gr.nodes[0] == gr.nodes[1]);
  CHECK(gr.nodes[0].imag() == 0.0);
  CHECK_THROWS_AS(sample_self_conjugate(3, SampleRegion::unit_disc, rng), Error);
}

TEST_CASE("q_eval pinned values") {
  // t = n is exactly 1 for every k and every nonsingular grid
  Rng rng(223);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
    const auto nodes = simple_self_conjugate(rng, n);
    std::vector<cplx> zeta(nodes);
    for (cplx& z : zeta) z += 1.0;
    for (int k = 0; k < n; ++k) {
      cplx q;
      try {
        q = q_eval(n, n, k, zeta);
      } catch (const Error& e) {
        CHECK(e.kind() == errc::singular_denominator);
        continue;
      }
      CHECK(std::abs(q - 1.0) < 1e-12);
    }
  }

  const std::vector<cplx> ones2{1.0, 1.0};
  CHECK(rel_err(q_eval(3, 2, 0, ones2), cplx(1.0 / 3.0)) < 1e-13);

  // boundary probe zeta = (2,2): |1 - e_1/3| = 1/3
  const std::vector<cplx> twos{2.0, 2.0};
  CHECK(rel_err(std::abs(q_eval(3, 2, 0, twos)), 1.0 / 3.0) < 1e-12);

  CHECK_THROWS_AS(q_eval(3, 2, 0, std::vector<cplx>{cplx(1.0), cplx(0.0)}), Error);  // e_2 = 0
}

TEST_CASE("error_derivative pinned and reference-route values") {
  // t = n: the residual is f itself, so the value is f^(k)(z)/k!
  Rng rng(227);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.next() % 6);
    const auto nodes = random_simple_grid(rng, n);
    const cplx z = rng.in_disc(1.0);
    std::vector<cplx> shifted(nodes);
    for (cplx& w : shifted) w -= z;
    SymTable tab(shifted, 0);
    for (int k = 0; k < n; ++k) {
      const cplx expect = ((n - k) % 2 == 0 ? 1.0 : -1.0) * tab.e(n - k);
      CHECK(rel_err(error_derivative(n, n, k, z, nodes), expect) < 1e-12);
    }
  }

  // n=1, nodes=(a), t=2, k=0: the residual is (z-a)(z+a)
  const cplx a(0.3, 0.4);
  for (int rep = 0; rep < 10; ++rep) {
    Rng r2(static_cast<std::uint64_t>(rep) + 1);
    const cplx z = r2.in_disc(1.5);
    CHECK(rel_err(error_derivative(2, 1, 0, z, std::vector<cplx>{a}), (z - a) * (z + a)) <
          1e-12);
  }

  // k = 0 at a node: the interpolation residual vanishes
  Rng rng2(229);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + static_cast<int>(rng2.next() % 6);
    const int t = n + static_cast<int>(rng2.next() % 10);
    const auto nodes = random_simple_grid(rng2, n);
    const cplx v = error_derivative(t, n, 0, nodes[0], nodes);
    CHECK(std::abs(v) < 1e-8 * std::pow(4.0, t));
  }

  // full route check against explicit residual-polynomial differentiation;
  // deviations are measured relative to the differentiated polynomial's
  // coefficient mass, the common backward-error scale of both routes
  Rng rng3(233);
  for (int rep = 0; rep < 120; ++rep) {
    const int n = 2 * (1 + static_cast<int>(rng3.next() % 4));
    const int t = n + static_cast<int>(rng3.next() % (31 - n));
    const auto nodes = simple_self_conjugate(rng3, n);
    const auto psi = interp_coeffs(nodes, t, InterpMethod::schur);
    double coeff_mass = 1.0;
    for (const cplx& c : psi.psi) coeff_mass += std::abs(c);
    const cplx z = cplx(rng3.uniform(-1.0, 1.0), 0.0);
    for (int k = 0; k < n; ++k) {
      const cplx mine = error_derivative(t, n, k, z, nodes);
      const cplx ref = hookamp::testing::residual_derivative_reference(t, k, psi.psi, z);
      const double scale = std::max({1.0, std::abs(mine), std::abs(ref), binomial(t, k) * coeff_mass});
      CHECK(std::abs(mine - ref) <= 1e-7 * scale);
    }
  }

  // the alternating hook-Schur expansion is the same function; compare
  // where that sum is still well conditioned
  Rng rng4(235);
  for (int rep = 0; rep < 150; ++rep) {
    const int n = 1 + static_cast<int>(rng4.next() % 6);
    const int t = n + static_cast<int>(rng4.next() % 11);
    const int k = static_cast<int>(rng4.next() % n);
    const auto nodes = random_simple_grid(rng4, n, 0.1, 0.7);
    const cplx z = rng4.in_disc(0.5);
    const cplx a = error_derivative(t, n, k, z, nodes);
    const cplx b = error_derivative_schur_sum(t, n, k, z, nodes);
    CHECK(rel_err(a, b) < 1e-9);
  }
}

TEST_CASE("q_eval against error_derivative: the residual-ratio identity") {
  // [z^t - psi_t]^{(k)} / (C(t,n) f^{(k)}(z)) = z^{t-n} Q_{t,n,k}(1_n - z^{-1} nodes)
  Rng rng(237);
  int checked = 0;
  while (checked < 150) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
    const int t = n + static_cast<int>(rng.next() % 15);
    const int k = static_cast<int>(rng.next() % n);
    const auto nodes = simple_self_conjugate(rng, n);
    double z = rng.uniform(-1.0, 1.0);
    if (std::abs(z) < 0.1) continue;

    std::vector<cplx> shifted(nodes);
    for (cplx& w : shifted) w -= z;
    SymTable stab(shifted, 0);
    const cplx fk = ((n - k) % 2 == 0 ? 1.0 : -1.0) * stab.e(n - k);  // f^(k)(z)/k!
    if (std::abs(fk) < 1e-6) continue;

    std::vector<cplx> zeta(nodes);
    for (cplx& w : zeta) w = 1.0 - w / z;
    cplx q;
    try {
      q = q_eval(t, n, k, zeta);
    } catch (const Error& e) {
      CHECK(e.kind() == errc::singular_denominator);
      continue;
    }
    const cplx lhs = error_derivative(t, n, k, z, nodes) / (binomial(t, n) * fk);
    cplx zpow = 1.0;
    for (int i = 0; i < t - n; ++i) zpow *= z;
    CHECK(rel_err(lhs, zpow * q) < 1e-9);
    ++checked;
  }
}

TEST_CASE("realness on self-conjugate grids") {
  Rng rng(239);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
    const auto grid = sample_self_conjugate(n, SampleRegion::unit_disc, rng);
    const int t = n + static_cast<int>(rng.next() % 12);
    const int k = static_cast<int>(rng.next() % n);
    const double z = rng.uniform(-1.0, 1.0);

    const cplx e = error_derivative(t, n, k, z, grid.nodes);
    CHECK(std::abs(e.imag()) <= 1e-10 * std::max(1.0, std::abs(e)));

    std::vector<cplx> zeta(grid.nodes);
    for (cplx& w : zeta) w += 1.0;
    try {
      const cplx q = q_eval(t, n, k, zeta);
      CHECK(std::abs(q.imag()) <= 1e-10 * std::max(1.0, std::abs(q)));
    } catch (const Error& e2) {
      CHECK(e2.kind() == errc::singular_denominator);
    }
  }
}

TEST_CASE("proved special case t = n+1") {
  // zeta = (2,2): e_1 - e_3/e_2 = 4, inside [0, 6]
  const auto f22 = special_case_np1(2, 0, std::vector<cplx>{2.0, 2.0});
  REQUIRE(f22.has_value());
  CHECK(f22->lower_ok);
  CHECK(f22->upper_ok);

  const auto f11 = special_case_np1(2, 0, std::vector<cplx>{1.0, 1.0});
  REQUIRE(f11.has_value());
  CHECK(f11->lower_ok);
  CHECK(f11->upper_ok);

  CHECK_THROWS_AS(special_case_np1(2, 1, std::vector<cplx>{1.0, 1.0}), Error);  // n-k odd

  Rng rng(241);
  long long skipped = 0;
  for (int rep = 0; rep < 2000; ++rep) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
    int k = 2 * static_cast<int>(rng.next() % ((n + 1) / 2));  // n-k even
    if (n % 2 == 1) ++k;
    const auto grid = sample_self_conjugate(n, SampleRegion::unit_disc, rng);
    std::vector<cplx> zeta(grid.nodes);
    for (cplx& z : zeta) z += 1.0;
    const auto flags = special_case_np1(n, k, zeta);
    if (!flags) {
      ++skipped;
      continue;
    }
    CHECK(flags->lower_ok);
    CHECK(flags->upper_ok);
  }
  CHECK(skipped < 200);  // singular denominators are rare
}

TEST_CASE("pointwise scans") {
  ScanConfig cfg;
  cfg.trials = 400;
  cfg.seed = 97;

  SUBCASE("t = n gives max_abs_q exactly 1") {
    const int n = 4;
    const std::vector<int> ts{n};
    const std::vector<int> ks{0, 1, 2, 3};
    for (const auto& rep : scan_pointwise(ts, n, ks, PointwiseBranch::z_one, cfg)) {
      CHECK(std::abs(rep.max_abs_q - 1.0) < 1e-12);
      CHECK(rep.samples == cfg.trials);
      CHECK(rep.counterexamples.empty());
    }
  }

  SUBCASE("z=1 branch: proved cases hold, exceedances become records") {
    const std::vector<int> ts{3, 4, 5};
    const std::vector<int> ks{0, 1};
    for (const auto& rep : scan_pointwise(ts, 2, ks, PointwiseBranch::z_one, cfg)) {
      // k = 0 is the Cauchy case (m-positivity bound), valid for every t;
      // t = n+1 with n-k even is proved in general
      if (rep.k == 0) {
        CHECK(rep.max_abs_q <= 1.0 + 1e-7);
        CHECK(rep.counterexamples.empty());
      }
      // for the open cases the scan reports; every exceedance must have
      // produced a full counterexample record
      long long expected_records = 0;
      if (rep.max_abs_q > cfg.counterexample_threshold) expected_records = 1;
      CHECK(static_cast<long long>(rep.counterexamples.size()) >= expected_records);
      for (const auto& ce : rep.counterexamples) {
        CHECK(ce.abs_q > cfg.counterexample_threshold);
        CHECK(is_self_conjugate(ce.nodes));
        CHECK(ce.t == rep.t);
        CHECK(ce.k == rep.k);
      }
    }
  }

  SUBCASE("z=0 branch ratio bounded by (n-k)/(t-k) at real nodes") {
    // real nodes in [0,1]: the Khare-Tao monotonicity argument is proved,
    // so the ratio stays below (n-k)/(t-k)
    ScanConfig real_cfg = cfg;
    real_cfg.p_real = 1.0;
    const std::vector<int> ts{5};
    const std::vector<int> ks{0, 1, 2, 3};
    for (const auto& rep : scan_pointwise(ts, 4, ks, PointwiseBranch::z_zero, real_cfg)) {
      const double bound = static_cast<double>(rep.n - rep.k) / (rep.t - rep.k);
      CHECK(rep.max_abs_q <= bound + 1e-9);
    }
  }

  SUBCASE("serial and parallel scans agree bit for bit") {
    const std::vector<int> ts{4, 6};
    const std::vector<int> ks{0, 1};
    const auto serial = scan_pointwise_serial(ts, 2, ks, PointwiseBranch::z_one, cfg);
    const auto parallel = scan_pointwise(ts, 2, ks, PointwiseBranch::z_one, cfg);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].max_abs_q == parallel[i].max_abs_q);
      CHECK(serial[i].singular_skipped == parallel[i].singular_skipped);
      CHECK(serial[i].worst_grid.nodes == parallel[i].worst_grid.nodes);
    }
  }

  SUBCASE("counterexample records capture threshold exceedances") {
    // an artificially tiny threshold turns ordinary samples into records
    ScanConfig tight = cfg;
    tight.trials = 50;
    tight.counterexample_threshold = 1e-3;
    const std::vector<int> ts{4};
    const std::vector<int> ks{0};
    const auto reps = scan_pointwise(ts, 2, ks, PointwiseBranch::z_one, tight);
    REQUIRE(reps.size() == 1);
    CHECK_FALSE(reps[0].counterexamples.empty());
    const auto j = to_json(reps[0].counterexamples[0]);
    CHECK(j.contains("nodes"));
    CHECK(j.contains("abs_q"));
    CHECK(j.contains("trial"));
  }
}

TEST_CASE("kallioniemi estimator") {
  Rng rng(251);

  SUBCASE("k = 0 membership holds on the whole grid") {
    for (int rep = 0; rep < 10; ++rep) {
      const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
      const auto grid = sample_self_conjugate(n, SampleRegion::unit_disc, rng);
      const auto est = kallioniemi_estimate(grid.nodes, 0, 401, default_m_max(n));
      for (auto m : est.membership) CHECK(m == 1);
      CHECK_FALSE(est.truncation_suspect);
    }
  }

  SUBCASE("z at a doubled real node: 0 = 0 counts as membership") {
    const std::vector<cplx> nodes{0.5, 0.5};
    const auto est = kallioniemi_estimate(nodes, 0, 5, default_m_max(2));
    for (auto m : est.membership) CHECK(m == 1);
    // exact repeats were perturbed, conjugation-symmetrically
    CHECK(est.grid.nodes[0] != est.grid.nodes[1]);
    CHECK(is_self_conjugate(est.grid.nodes));
  }

  SUBCASE("k = 1 on real distinct nodes: membership is a union of segments") {
    const std::vector<cplx> nodes{-0.6, -0.6, 0.7, 0.7};
    const auto est = kallioniemi_estimate(nodes, 1, 801, default_m_max(4));
    // count maximal membership runs; the Kallioniemi structure is a small
    // set of nonoverlapping segments, not an alternation at every point
    int runs = 0;
    for (std::size_t i = 0; i < est.membership.size(); ++i)
      if (est.membership[i] && (i == 0 || !est.membership[i - 1])) ++runs;
    CHECK(runs >= 1);
    CHECK(runs <= 6);
  }

  SUBCASE("parallel equals serial") {
    const auto grid = sample_self_conjugate(4, SampleRegion::unit_disc, rng);
    const auto a = kallioniemi_estimate_serial(grid.nodes, 1, 301, default_m_max(4));
    const auto b = kallioniemi_estimate(grid.nodes, 1, 301, default_m_max(4), 0);
    CHECK(a.membership == b.membership);
    CHECK(a.truncation_suspect == b.truncation_suspect);
  }
}

TEST_CASE("uniform-conjecture scan") {
  // nodes (0.5i, -0.5i), k = 1: RHS = max_z |e_1 - 2z| ... = 2 at z = +-1
  const std::vector<cplx> nodes{cplx(0.0, 0.5), cplx(0.0, -0.5)};
  const auto res = scan_uniform(nodes, 1, 40);
  CHECK(rel_err(res.rhs, 2.0) < 1e-12);
  CHECK(res.sup_over_t <= 2.0 + 1e-6);
  CHECK(res.attained_at_t == 2);

  // the t = n term alone equals the RHS
  Rng rng(257);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 * (1 + static_cast<int>(rng.next() % 3));
    const auto grid = sample_self_conjugate(n, SampleRegion::unit_disc, rng);
    const int k = static_cast<int>(rng.next() % n);
    const auto r = scan_uniform(grid.nodes, k, n);  // t_max = n: only the base term
    CHECK(rel_err(r.sup_over_t, r.rhs) < 1e-12);
    CHECK(r.attained_at_t == n);
  }

  // all-zero nodes: psi_t = 0, the error is z^t, and t = n dominates
  const std::vector<cplx> zeros{0.0, 0.0};
  const auto rz = scan_uniform(zeros, 0, 30);
  CHECK(rel_err(rz.sup_over_t, rz.rhs) < 1e-9);
  CHECK(rz.attained_at_t == 2);
}

TEST_CASE("report serialization") {
  ScanConfig cfg;
  cfg.trials = 10;
  cfg.seed = 1;
  const std::vector<int> ts{3};
  const std::vector<int> ks{0};
  const auto reps = scan_pointwise(ts, 2, ks, PointwiseBranch::z_one, cfg);
  const auto j = to_json(reps[0]);
  for (const char* key :
       {"t", "n", "k", "samples", "max_abs_q", "worst_grid", "singular_skipped", "seed"})
    CHECK(j.contains(key));

  const auto grid = std::vector<cplx>{cplx(0, 0.5), cplx(0, -0.5)};
  const auto est = kallioniemi_estimate(grid, 0, 11, 12);
  const auto je = to_json(est);
  CHECK(je.contains("member_count"));
  CHECK(je.contains("m_truncation"));
  const auto ju = to_json(scan_uniform(grid, 0, 6, 51));
  CHECK(ju.contains("sup_over_t"));
  CHECK(ju.contains("rhs"));
  CHECK(ju.contains("attained_at_t"));
}
