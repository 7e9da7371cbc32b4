// Integer helpers shared by the field, curve and algebra code.
//
// Group orders of curves over F_{p^k} exceed 64 bits for the larger working
// fields, so orders, traces and scalars are carried as 128-bit integers.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace isodesc {

using u128 = unsigned __int128;
using i128 = __int128;

std::string to_string(u128 v);
std::string to_string(i128 v);

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m);
// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
std::uint64_t invmod64(std::uint64_t a, std::uint64_t m);

bool is_prime(std::uint64_t n);

// Prime factorisation as (prime, exponent) pairs in increasing prime order.
// Supports n < 2^64 exactly; larger inputs throw std::out_of_range.
std::vector<std::pair<u128, int>> factor(u128 n);

u128 ipow(u128 base, unsigned e);
// Returns base^e, or 0 if the result would not fit below 2^limit_bits.
u128 checked_pow(u128 base, unsigned e, unsigned limit_bits = 126);

u128 gcd(u128 a, u128 b);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);
i128 iabs(i128 v);

// Largest r with r*r <= n.
u128 isqrt(u128 n);
bool is_square(u128 n);

// Fundamental discriminant of the quadratic order of discriminant d (d < 0 or a
// non-square d > 0).  Squarefree part is found by trial division to cbrt(|d|).
i128 fundamental_discriminant(i128 d);

// Euler phi for small m.
std::int64_t euler_phi(std::int64_t m);

// Smallest e >= 1 with v^e == 1 (mod n); 0 if v is not a unit.
std::int64_t multiplicative_order(std::int64_t v, std::int64_t n);

// Nonnegative residue.
inline std::int64_t mod(std::int64_t v, std::int64_t n) {
  std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}
inline std::int64_t mod(i128 v, std::int64_t n) {
  auto r = static_cast<std::int64_t>(v % n);
  return r < 0 ? r + n : r;
}

}  // namespace isodesc
