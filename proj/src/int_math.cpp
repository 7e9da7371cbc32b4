#include "isodesc/int_math.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace isodesc {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e > 0) {
    if (e & 1) r = mulmod64(r, b, m);
    b = mulmod64(b, b, m);
    e >>= 1;
  }
  return r;
}

std::uint64_t invmod64(std::uint64_t a, std::uint64_t m) {
  i128 t = 0, nt = 1;
  i128 r = m, nr = a % m;
  while (nr != 0) {
    i128 q = r / nr;
    std::swap(t, nt);
    nt -= q * t;
    std::swap(r, nr);
    nr -= q * r;
  }
  if (r != 1) throw std::domain_error("invmod64: not invertible");
  if (t < 0) t += m;
  return static_cast<std::uint64_t>(t);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for all 64-bit n.
  for (std::uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
    std::uint64_t x = powmod64(a % n, d, n);
    if (a % n == 0 || x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace {

std::uint64_t pollard_brent(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t y = 2, g = 1, r = 1, q = 1, x = 0, ys = 0;
    const std::uint64_t m = 128;
    auto f = [&](std::uint64_t v) { return (mulmod64(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod64(q, x > y ? x - y : y - x, n);
        }
        g = static_cast<std::uint64_t>(gcd(static_cast<u128>(q), static_cast<u128>(n)));
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = static_cast<std::uint64_t>(gcd(static_cast<u128>(x > ys ? x - ys : ys - x), static_cast<u128>(n)));
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(std::uint64_t n, std::map<std::uint64_t, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  std::uint64_t d = pollard_brent(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

}  // namespace

std::vector<std::pair<u128, int>> factor(u128 n) {
  if (n == 0) throw std::invalid_argument("factor: zero");
  std::map<std::uint64_t, int> acc;
  for (std::uint64_t q = 2; q < 1000 && n > 1; ++q) {
    while (n % q == 0) {
      ++acc[q];
      n /= q;
    }
  }
  if (n > 1) {
    if (n >> 64) throw std::out_of_range("factor: cofactor exceeds 64 bits");
    factor_rec(static_cast<std::uint64_t>(n), acc);
  }
  std::vector<std::pair<u128, int>> res;
  for (auto [q, e] : acc) res.emplace_back(q, e);
  return res;
}

u128 ipow(u128 base, unsigned e) {
  u128 r = 1;
  while (e-- > 0) r *= base;
  return r;
}

u128 checked_pow(u128 base, unsigned e, unsigned limit_bits) {
  const u128 limit = static_cast<u128>(1) << limit_bits;
  u128 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (base != 0 && r > limit / base) return 0;
    r *= base;
    if (r >= limit) return 0;
  }
  return r;
}

u128 gcd(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::int64_t lcm(std::int64_t a, std::int64_t b) { return a / gcd(a, b) * b; }

i128 iabs(i128 v) { return v < 0 ? -v : v; }

u128 isqrt(u128 n) {
  u128 x = static_cast<u128>(sqrtl(static_cast<long double>(n)));
  while (x * x > n) --x;
  while ((x + 1) * (x + 1) <= n) ++x;
  return x;
}

bool is_square(u128 n) {
  u128 r = isqrt(n);
  return r * r == n;
}

namespace {

u128 icbrt(u128 n) {
  u128 lo = 0, hi = 1;
  while (hi * hi * hi <= n) hi *= 2;
  while (lo + 1 < hi) {
    u128 mid = (lo + hi) / 2;
    if (mid * mid * mid <= n) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

i128 fundamental_discriminant(i128 d) {
  if (d == 0) throw std::domain_error("fundamental_discriminant: zero");
  u128 m = static_cast<u128>(iabs(d));
  const int sign = d < 0 ? -1 : 1;
  // Split m = s * r^2 with s squarefree.
  u128 s = 1;
  u128 rest = m;
  const u128 bound = icbrt(m) + 1;
  for (u128 q = 2; q <= bound && q * q <= rest; ++q) {
    int e = 0;
    while (rest % q == 0) {
      rest /= q;
      ++e;
    }
    if (e % 2 == 1) s *= q;
  }
  // Remaining cofactor has no prime factor <= cbrt(m): it is 1, a prime, a
  // prime square, or a product of two distinct primes.
  if (rest > 1 && !is_square(rest)) s *= rest;
  const i128 sq = sign * static_cast<i128>(s);
  const i128 r4 = ((sq % 4) + 4) % 4;
  if (sq == 1) throw std::domain_error("fundamental_discriminant: square discriminant");
  return r4 == 1 ? sq : 4 * sq;
}

std::int64_t euler_phi(std::int64_t m) {
  std::int64_t r = m;
  for (std::int64_t q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      while (m % q == 0) m /= q;
      r -= r / q;
    }
  }
  if (m > 1) r -= r / m;
  return r;
}

std::int64_t multiplicative_order(std::int64_t v, std::int64_t n) {
  if (n == 1) return 1;
  v = mod(v, n);
  if (gcd(v, n) != 1) return 0;
  std::int64_t x = v;
  for (std::int64_t e = 1; e <= n; ++e) {
    if (x == 1) return e;
    x = static_cast<std::int64_t>(static_cast<i128>(x) * v % n);
  }
  return 0;
}

}  // namespace isodesc
