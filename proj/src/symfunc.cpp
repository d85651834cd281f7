#include "hookamp/symfunc.hpp"

#include <algorithm>
#include <functional>

#include <boost/multiprecision/cpp_int.hpp>

namespace hookamp {

using Rational = boost::multiprecision::cpp_rational;

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    require(parts_[i] >= 1, errc::precondition, "Partition: parts must be positive");
    require(i == 0 || parts_[i - 1] >= parts_[i], errc::precondition,
            "Partition: parts must be nonincreasing");
  }
}

int Partition::size() const {
  int s = 0;
  for (int p : parts_) s += p;
  return s;
}

Partition Partition::conjugate() const {
  if (parts_.empty()) return Partition{};
  std::vector<int> conj(static_cast<std::size_t>(parts_[0]), 0);
  for (int p : parts_)
    for (int k = 0; k < p; ++k) ++conj[static_cast<std::size_t>(k)];
  return Partition(std::move(conj));
}

Partition Hook::to_partition() const {
  std::vector<int> parts{arm + 1};
  parts.insert(parts.end(), static_cast<std::size_t>(leg), 1);
  return Partition(std::move(parts));
}

SymTable::SymTable(std::span<const cplx> point, int max_h_degree)
    : point_(point.begin(), point.end()) {
  require(!point_.empty(), errc::precondition, "SymTable: point must be nonempty");
  require(max_h_degree >= 0, errc::precondition, "SymTable: max_h_degree must be >= 0");
  const int n = static_cast<int>(point_.size());
  const int pmax = std::max(n, max_h_degree);

  p_.assign(static_cast<std::size_t>(pmax) + 1, cplx(0.0));
  std::vector<cplx> zpow(point_.begin(), point_.end());
  for (int i = 1; i <= pmax; ++i) {
    cplx s = 0.0;
    for (int j = 0; j < n; ++j) s += zpow[static_cast<std::size_t>(j)];
    p_[static_cast<std::size_t>(i)] = s;
    if (i < pmax)
      for (int j = 0; j < n; ++j) zpow[static_cast<std::size_t>(j)] *= point_[static_cast<std::size_t>(j)];
  }

  // Newton's identities: d e_d = sum_{i=1..d} (-1)^{i-1} p_i e_{d-i},
  //                      d h_d = sum_{i=1..d} p_i h_{d-i}.
  e_.assign(static_cast<std::size_t>(n) + 1, cplx(0.0));
  e_[0] = 1.0;
  for (int d = 1; d <= n; ++d) {
    cplx acc = 0.0;
    for (int i = 1; i <= d; ++i) {
      const cplx term = p_[static_cast<std::size_t>(i)] * e_[static_cast<std::size_t>(d - i)];
      acc += (i % 2 == 1) ? term : -term;
    }
    e_[static_cast<std::size_t>(d)] = acc / static_cast<double>(d);
  }

  h_.assign(static_cast<std::size_t>(max_h_degree) + 1, cplx(0.0));
  h_[0] = 1.0;
  for (int d = 1; d <= max_h_degree; ++d) {
    cplx acc = 0.0;
    for (int i = 1; i <= d; ++i)
      acc += p_[static_cast<std::size_t>(i)] * h_[static_cast<std::size_t>(d - i)];
    h_[static_cast<std::size_t>(d)] = acc / static_cast<double>(d);
  }
}

cplx SymTable::h(int d) const {
  if (d < 0) return cplx(0.0);
  require(d <= max_h_degree(), errc::table_too_short,
          "SymTable: h_" + std::to_string(d) + " requested but table built to degree " +
              std::to_string(max_h_degree()));
  return h_[static_cast<std::size_t>(d)];
}

cplx SymTable::power_sum(int i) const {
  require(i >= 1 && i < static_cast<int>(p_.size()), errc::precondition,
          "SymTable: power sum index out of range");
  return p_[static_cast<std::size_t>(i)];
}

SymTable build_sym_table(std::span<const cplx> point, int max_h_degree) {
  return SymTable(point, max_h_degree);
}

cplx schur_hook(Hook hook, const SymTable& table) {
  require(hook.arm >= 0 && hook.leg >= 0, errc::precondition, "schur_hook: negative hook");
  require(table.max_h_degree() >= hook.arm, errc::table_too_short,
          "schur_hook: table too short, need h up to degree " + std::to_string(hook.arm));
  cplx s = 0.0;
  for (int j = 0; j <= hook.arm; ++j) {
    if (hook.leg + j + 1 > table.n()) break;  // e vanishes from here on
    const cplx term = table.h(hook.arm - j) * table.e(hook.leg + j + 1);
    s += (j % 2 == 0) ? term : -term;
  }
  return s;
}

cplx schur_hook_alt(Hook hook, const SymTable& table) {
  require(hook.arm >= 0 && hook.leg >= 0, errc::precondition, "schur_hook_alt: negative hook");
  require(table.max_h_degree() >= hook.arm + hook.leg + 1, errc::table_too_short,
          "schur_hook_alt: table too short, need h up to degree " +
              std::to_string(hook.arm + hook.leg + 1));
  cplx s = 0.0;
  for (int k = 0; k <= hook.leg; ++k) {
    const cplx term = table.h(hook.arm + k + 1) * table.e(hook.leg - k);
    s += (k % 2 == 0) ? term : -term;
  }
  return s;
}

BigInt binomial_big(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;  // exact at every step
  }
  return r;
}

BigInt schur_hook_ones(Hook hook, int n) {
  require(hook.arm >= 0 && hook.leg >= 0, errc::precondition, "schur_hook_ones: negative hook");
  require(n >= 1, errc::precondition, "schur_hook_ones: n must be >= 1");
  return binomial_big(n + hook.arm, hook.arm + hook.leg + 1) *
         binomial_big(hook.arm + hook.leg, hook.leg);
}

BigInt schur_ones_general(const Partition& lam, int n) {
  require(n >= 1, errc::precondition, "schur_ones_general: n must be >= 1");
  const Partition conj = lam.conjugate();
  Rational prod = 1;
  for (int j = 1; j <= lam.length(); ++j) {
    for (int k = 1; k <= lam.part(j - 1); ++k) {
      const int num = n + k - j;
      if (num == 0) return 0;
      const int hook_len = lam.part(j - 1) - j + conj.part(k - 1) - k + 1;
      prod *= Rational(num, hook_len);
    }
  }
  require(denominator(prod) == 1, errc::consistency,
          "schur_ones_general: hook-content product is not integral");
  return numerator(prod);
}

bool Ssyt::valid() const {
  if (static_cast<int>(rows.size()) != shape.length()) return false;
  for (int r = 0; r < shape.length(); ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<int>(row.size()) != shape.part(r)) return false;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] < 1) return false;
      if (c > 0 && row[c] < row[c - 1]) return false;
      if (r > 0 && c < rows[static_cast<std::size_t>(r - 1)].size() &&
          row[c] <= rows[static_cast<std::size_t>(r - 1)][c])
        return false;
    }
  }
  return true;
}

std::vector<int> Ssyt::content() const {
  int vmax = 0;
  for (const auto& row : rows)
    for (int v : row) vmax = std::max(vmax, v);
  std::vector<int> count(static_cast<std::size_t>(vmax), 0);
  for (const auto& row : rows)
    for (int v : row)
      if (v >= 1) ++count[static_cast<std::size_t>(v - 1)];
  return count;
}

namespace {

// Backtracking SSYT count: fill cells in row-major order, keeping row
// entries weakly increasing and column entries strictly increasing, with
// exactly mu_v copies of each value v.
long long count_ssyt(const std::vector<int>& shape, std::vector<int>& remaining,
                     std::vector<std::vector<int>>& grid, int row, int col) {
  const int rows = static_cast<int>(shape.size());
  if (row == rows) return 1;
  int nrow = row, ncol = col + 1;
  if (ncol >= shape[static_cast<std::size_t>(row)]) {
    nrow = row + 1;
    ncol = 0;
  }
  const int vmax = static_cast<int>(remaining.size());
  int vmin = 1;
  if (col > 0) vmin = std::max(vmin, grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col - 1)]);
  if (row > 0 && col < shape[static_cast<std::size_t>(row - 1)])
    vmin = std::max(vmin, grid[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col)] + 1);
  long long total = 0;
  for (int v = vmin; v <= vmax; ++v) {
    if (remaining[static_cast<std::size_t>(v - 1)] == 0) continue;
    --remaining[static_cast<std::size_t>(v - 1)];
    grid[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = v;
    total += count_ssyt(shape, remaining, grid, nrow, ncol);
    ++remaining[static_cast<std::size_t>(v - 1)];
  }
  return total;
}

}  // namespace

long long kostka(const Partition& lam, const Partition& mu) {
  if (lam.size() != mu.size()) return 0;
  require(lam.size() <= kKostkaSizeCap, errc::precondition,
          "kostka: |lambda| = " + std::to_string(lam.size()) + " exceeds size cap " +
              std::to_string(kKostkaSizeCap));
  if (lam.length() == 0) return 1;  // empty shape, empty type
  std::vector<int> shape = lam.parts();
  std::vector<int> remaining = mu.parts();
  std::vector<std::vector<int>> grid(shape.size());
  for (std::size_t r = 0; r < shape.size(); ++r) grid[r].assign(static_cast<std::size_t>(shape[r]), 0);
  return count_ssyt(shape, remaining, grid, 0, 0);
}

cplx monomial_sym(const Partition& mu, std::span<const cplx> point) {
  const int n = static_cast<int>(point.size());
  if (mu.length() > n) return cplx(0.0);
  if (mu.length() == 0) return cplx(1.0);

  std::vector<int> expo(mu.parts());
  expo.resize(static_cast<std::size_t>(n), 0);
  std::sort(expo.begin(), expo.end());
  const int emax = expo.back();

  std::vector<std::vector<cplx>> pw(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& row = pw[static_cast<std::size_t>(i)];
    row.assign(static_cast<std::size_t>(emax) + 1, cplx(1.0));
    for (int k = 1; k <= emax; ++k)
      row[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k - 1)] * point[static_cast<std::size_t>(i)];
  }

  // next_permutation over the sorted multiset visits each distinct
  // exponent assignment exactly once.
  cplx sum = 0.0;
  do {
    cplx term = 1.0;
    for (int i = 0; i < n; ++i)
      term *= pw[static_cast<std::size_t>(i)][static_cast<std::size_t>(expo[static_cast<std::size_t>(i)])];
    sum += term;
  } while (std::next_permutation(expo.begin(), expo.end()));
  return sum;
}

std::vector<Partition> partitions_of(int d, int max_length) {
  require(d >= 0, errc::precondition, "partitions_of: d must be >= 0");
  std::vector<Partition> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int rem, int cap) {
    if (rem == 0) {
      out.emplace_back(cur);
      return;
    }
    if (max_length >= 0 && static_cast<int>(cur.size()) == max_length) return;
    for (int p = std::min(rem, cap); p >= 1; --p) {
      cur.push_back(p);
      rec(rem - p, p);
      cur.pop_back();
    }
  };
  rec(d, d == 0 ? 1 : d);
  return out;
}

cplx schur_via_kostka(const Partition& lam, std::span<const cplx> point) {
  require(lam.size() <= kKostkaSizeCap, errc::precondition,
          "schur_via_kostka: |lambda| exceeds kostka size cap");
  const int n = static_cast<int>(point.size());
  if (lam.length() > n) return cplx(0.0);
  cplx sum = 0.0;
  for (const Partition& mu : partitions_of(lam.size(), n)) {
    const long long k = kostka(lam, mu);
    if (k == 0) continue;
    sum += static_cast<double>(k) * monomial_sym(mu, point);
  }
  return sum;
}

}  // namespace hookamp
