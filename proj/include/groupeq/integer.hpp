#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "groupeq/error.hpp"

namespace groupeq {

using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Integer& v) { return v.str(); }

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
}

/// Distinct prime divisors of |v| in increasing order; empty for 0 and +-1.
inline std::vector<Integer> prime_divisors(Integer v) {
  std::vector<Integer> out;
  if (v < 0) v = -v;
  if (v <= 1) return out;
  for (Integer d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

inline std::vector<std::uint64_t> prime_divisors(std::uint64_t v) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

/// Exponent of p in v (v != 0).
inline unsigned valuation(Integer v, std::uint64_t p) {
  if (v == 0) throw PreconditionError("valuation of zero");
  if (v < 0) v = -v;
  unsigned k = 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

/// True iff n = p^k for some prime p and k >= 1; sets p and k.
inline bool prime_power(std::uint64_t n, std::uint64_t& p, unsigned& k) {
  if (n < 2) return false;
  auto ps = prime_divisors(n);
  if (ps.size() != 1) return false;
  p = ps.front();
  k = 0;
  while (n > 1) {
    n /= p;
    ++k;
  }
  return true;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t floor_mod(const Integer& a, std::int64_t m) {
  Integer r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

struct ExtendedGcd {
  std::int64_t g, x, y;  // g = a*x + b*y
};

inline ExtendedGcd extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Inverse of a modulo m; a must be a unit.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
  auto e = extended_gcd(floor_mod(a, m), m);
  if (e.g != 1) throw PreconditionError("not invertible modulo " + std::to_string(m));
  return floor_mod(e.x, m);
}

inline std::int64_t ipow(std::int64_t base, unsigned exp) {
  std::int64_t r = 1;
  while (exp-- > 0) r *= base;
  return r;
}

}  // namespace groupeq
