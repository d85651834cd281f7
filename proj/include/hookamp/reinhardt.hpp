#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hookamp/common.hpp"

namespace hookamp {

// Root domain with log-affine radius hull: log(Z_+) = Conv(vertices).
struct LogAffineRootDomain {
  std::vector<std::vector<double>> vertices;  // points of R^n, superset of the vertex set
  std::string label;
};

// Linear maximization over the radius hull S_+ of the initialization domain:
// given c in R_+^n, return argmax_{w in S_+} c.w and the value.
class InitDomainOracle {
 public:
  virtual ~InitDomainOracle() = default;
  virtual std::pair<std::vector<double>, double> maximize(std::span<const double> c) const = 0;
};

// S_+ = prod_k [0, bounds_k]; the maximizing corner is the bound vector.
class PolydiscInitOracle final : public InitDomainOracle {
 public:
  explicit PolydiscInitOracle(std::vector<double> bounds);
  std::pair<std::vector<double>, double> maximize(std::span<const double> c) const override;

 private:
  std::vector<double> bounds_;
};

// S_+ = {w >= 0 : sum_k a_k w_k <= 1}; the maximizer is a single spike.
class L1BallInitOracle final : public InitDomainOracle {
 public:
  explicit L1BallInitOracle(std::vector<double> a);
  std::pair<std::vector<double>, double> maximize(std::span<const double> c) const override;

 private:
  std::vector<double> a_;
};

class FinitePointsInitOracle final : public InitDomainOracle {
 public:
  explicit FinitePointsInitOracle(std::vector<std::vector<double>> points);
  std::pair<std::vector<double>, double> maximize(std::span<const double> c) const override;

 private:
  std::vector<std::vector<double>> points_;
};

// Adapter for oracles that are not safe for concurrent calls.
class SerializedOracle final : public InitDomainOracle {
 public:
  explicit SerializedOracle(const InitDomainOracle& inner) : inner_(inner) {}
  std::pair<std::vector<double>, double> maximize(std::span<const double> c) const override {
    std::lock_guard<std::mutex> lock(mutex_);
    return inner_.maximize(c);
  }

 private:
  const InitDomainOracle& inner_;
  mutable std::mutex mutex_;
};

struct ReinhardtSolution {
  std::vector<double> r_star;
  std::vector<double> w_star;
  double value = 0.0;
  int argmax_vertex_index = -1;
};

// F_t(r | w) = sum_k w_k s_(t-n|n-k)(r); shared with the polydisc formula.
double f_t(std::span<const double> radii, std::span<const double> weights, int t);

// The vertex procedure: evaluate F_t(exp(v) | S_+) at every vertex through
// the oracle, pick the max (smallest index on ties), re-solve at r* for w*.
ReinhardtSolution vertex_method(const LogAffineRootDomain& domain,
                                const InitDomainOracle& init_oracle, int t, int threads = 0);

// Drops every vertex dominated componentwise by another one; duplicates
// collapse to their first occurrence. F_t(exp(.)|S_+) is entrywise
// nondecreasing, so the method's value is unchanged.
std::vector<std::vector<double>> dominated_vertex_filter(
    const std::vector<std::vector<double>>& vertices);

struct ReinhardtProblem {
  int n = 0;
  int t = 0;
  LogAffineRootDomain domain;
  std::unique_ptr<InitDomainOracle> init_oracle;
};

// Domain spec format:
// {"n":., "t":., "vertices":[[..]], "label":"..",
//  "init_oracle": {"kind":"polydisc","bounds":[..]} |
//                 {"kind":"l1","a":[..]} |
//                 {"kind":"points","points":[[..]]}}
ReinhardtProblem load_reinhardt_problem(const nlohmann::json& j);
nlohmann::json to_json(const ReinhardtSolution& solution);

}  // namespace hookamp
