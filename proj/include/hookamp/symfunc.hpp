#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hookamp/common.hpp"

namespace hookamp {

using BigInt = boost::multiprecision::cpp_int;

// Integer partition: finite nonincreasing list of positive parts.
class Partition {
 public:
  Partition() = default;
  // Trailing zeros are stripped; parts must be nonincreasing and positive.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int length() const { return static_cast<int>(parts_.size()); }
  int size() const;  // |lambda|, the number of cells
  // lambda_{i+1} with the usual convention of zero beyond the length.
  int part(int i) const { return (i >= 0 && i < length()) ? parts_[i] : 0; }
  Partition conjugate() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<int> parts_;
};

// Hook (a|b) in Frobenius notation: the partition (a+1, 1^b).
struct Hook {
  int arm = 0;
  int leg = 0;

  Partition to_partition() const;
  Hook conjugate() const { return Hook{leg, arm}; }
  int weight() const { return arm + leg + 1; }  // degree of s_(a|b)
};

// Elementary, complete homogeneous and power-sum values of a fixed complex
// point, built once via Newton's identities and then shared by every Schur
// evaluation. e_d is stored for d <= n (zero beyond by convention), h_d for
// d <= max_h_degree chosen at construction.
class SymTable {
 public:
  SymTable(std::span<const cplx> point, int max_h_degree);

  int n() const { return static_cast<int>(point_.size()); }
  int max_h_degree() const { return static_cast<int>(h_.size()) - 1; }

  cplx e(int d) const {
    if (d < 0 || d > n()) return cplx(0.0);
    return e_[static_cast<std::size_t>(d)];
  }
  // Throws table_too_short for d > max_h_degree: h_d is not zero there and
  // returning a truncated value would be silent corruption.
  cplx h(int d) const;
  cplx power_sum(int i) const;  // p_i, 1 <= i <= max(n, max_h_degree)

  const std::vector<cplx>& point() const { return point_; }

 private:
  std::vector<cplx> point_, e_, h_, p_;
};

SymTable build_sym_table(std::span<const cplx> point, int max_h_degree);

// s_(a|b)(point) = sum_{j=0..a} (-1)^j h_{a-j} e_{b+j+1}.
// Requires h up to degree a; throws table_too_short otherwise.
cplx schur_hook(Hook hook, const SymTable& table);

// The mirror sum s_(a|b) = sum_{k=0..b} (-1)^k h_{a+k+1} e_{b-k}.
// Requires h up to degree a+b+1.
cplx schur_hook_alt(Hook hook, const SymTable& table);

// s_(a|b)(1_n) = C(n+a, a+b+1) * C(a+b, b), exact.
BigInt schur_hook_ones(Hook hook, int n);

// Hook-content product for s_lambda(1_n) in exact rational arithmetic;
// throws consistency if the product fails to be integral.
BigInt schur_ones_general(const Partition& lam, int n);

// Semistandard Young tableau: rows weakly increase left to right, columns
// strictly increase top to bottom.
struct Ssyt {
  Partition shape;
  std::vector<std::vector<int>> rows;

  bool valid() const;
  // content vector: count[v-1] = number of occurrences of v
  std::vector<int> content() const;
};

inline constexpr int kKostkaSizeCap = 14;

// Number of SSYTs of shape lambda and type mu, by backtracking enumeration.
// Zero when |lambda| != |mu|; throws when |lambda| exceeds the size cap.
long long kostka(const Partition& lam, const Partition& mu);

// Monomial symmetric polynomial m_mu(point): one term per distinct
// exponent assignment (distinct index multisets, equal exponents counted once).
cplx monomial_sym(const Partition& mu, std::span<const cplx> point);

// s_lambda(point) = sum_mu K_{lambda mu} m_mu(point). Independent of the
// hook e/h route; kept as the cross-check path for tests and the oracle.
cplx schur_via_kostka(const Partition& lam, std::span<const cplx> point);

// All partitions of d; max_length < 0 means unbounded.
std::vector<Partition> partitions_of(int d, int max_length = -1);

BigInt binomial_big(long long n, long long k);

}  // namespace hookamp
