#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hookamp {

using cplx = std::complex<double>;

inline constexpr const char* kVersion = "1.0.0";

// Error categories; the CLI maps them onto exit codes.
enum class errc {
  precondition,          // bad arguments, range guards, size caps
  table_too_short,       // SymTable lacks a required h-degree
  near_singular_grid,    // divided-difference route on (nearly) repeated nodes
  singular_denominator,  // |e_{n-k}| below threshold in a Schur ratio
  consistency,           // an internal identity failed; indicates a bug
};

class Error : public std::runtime_error {
 public:
  Error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  errc kind() const { return kind_; }

 private:
  errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& msg) { throw Error(kind, msg); }

inline void require(bool cond, errc kind, const std::string& msg) {
  if (!cond) fail(kind, msg);
}

// Binomial coefficient in floating point. Exact for results below 2^53;
// above that the relative error stays at a few ulps, which is enough for
// every floating-point path here (the exact paths use big integers).
inline double binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0.0;
  if (k > n - k) k = n - k;
  long double r = 1.0L;
  for (long long i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / i;
  return static_cast<double>(r);
}

// 1 / (m * (m-1) * ... * (m-n+1)) = (m-n)!/m!
inline double inverse_falling_factorial(long long m, long long n) {
  long double r = 1.0L;
  for (long long i = 0; i < n; ++i) r /= static_cast<long double>(m - i);
  return static_cast<double>(r);
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256++; self-contained so that streams are identical on every
// platform (std::uniform_real_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // area-uniform in the closed disc of the given radius
  cplx in_disc(double radius) {
    const double rho = radius * std::sqrt(uniform01());
    const double phi = 6.283185307179586476925286766559 * uniform01();
    return cplx(rho * std::cos(phi), rho * std::sin(phi));
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t s = a ^ (0x9E3779B97F4A7C15ULL + (b << 6) + (b >> 2));
    std::uint64_t m = splitmix64(s);
    return m ^ b;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

}  // namespace hookamp
