#include <algorithm>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "isodesc/embedding.hpp"
#include "isodesc/finite_field.hpp"
#include "isodesc/poly.hpp"

using namespace isodesc;

namespace {

// Brute-force oracle: smallest monic quadratic without roots mod p, with
// coefficient tuples (c0, c1) compared lexicographically.
std::vector<std::uint64_t> oracle_quadratic(std::uint64_t p) {
  for (std::uint64_t c0 = 0; c0 < p; ++c0)
    for (std::uint64_t c1 = 0; c1 < p; ++c1) {
      bool root = false;
      for (std::uint64_t x = 0; x < p && !root; ++x) root = (x * x + c1 * x + c0) % p == 0;
      if (!root) return {c0, c1, 1};
    }
  return {};
}

}  // namespace

TEST_CASE("prime field and modulus selection") {
  const ExtField f7 = make_ext_field(7, 1);
  CHECK(f7.order() == 7);
  CHECK(f7.modulus().size() == 2);
  CHECK(f7.modulus()[0] == 0);

  for (std::uint64_t p : {5ull, 7ull, 11ull, 13ull, 31ull}) {
    const ExtField f = make_ext_field(p, 2);
    const auto m = f.modulus();
    CHECK(std::vector<std::uint64_t>(m.begin(), m.end()) == oracle_quadratic(p));
  }
  const ExtField f112 = make_ext_field(11, 2);
  CHECK(f112.modulus()[0] == 1);
  CHECK(f112.modulus()[1] == 0);

  const ExtField f49 = make_ext_field(7, 2);
  CHECK(f49.order() == 49);
  // The multiplicative group has order 48: some element has exactly that order.
  bool found = false;
  for (u128 i = 1; i < 49 && !found; ++i) {
    const Fe x = f49.from_index(i);
    bool prim = x.pow(48).is_one();
    for (int d : {24, 16}) prim = prim && !x.pow(static_cast<u128>(d)).is_one();
    found = prim;
  }
  CHECK(found);

  CHECK(make_ext_field(13, 3) == make_ext_field(13, 3));
  CHECK_THROWS_AS(make_ext_field(15, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_ext_field(7, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_ext_field(7, 25), std::invalid_argument);
}

TEST_CASE("field axioms exhaustively on small fields") {
  for (std::uint64_t p : {3ull, 5ull, 7ull}) {
    for (int k : {1, 2}) {
      const ExtField f = make_ext_field(p, k);
      const u128 q = f.order();
      for (u128 i = 0; i < q; ++i) {
        const Fe a = f.from_index(i);
        if (!a.is_zero()) CHECK((a * a.inv()).is_one());
        for (u128 j = 0; j < q; ++j) {
          const Fe b = f.from_index(j);
          CHECK(a * b == b * a);
          CHECK((a + b) - b == a);
          const Fe c = f.from_index((i * 7 + j * 3) % q);
          CHECK((a * b) * c == a * (b * c));
          CHECK(a * (b + c) == a * b + a * c);
        }
      }
    }
  }
  const ExtField f31 = make_ext_field(31, 2);
  for (u128 i = 1; i < f31.order(); ++i) {
    const Fe a = f31.from_index(i);
    CHECK((a * a.inv()).is_one());
  }
}

TEST_CASE("frobenius") {
  const ExtField f = make_ext_field(11, 2);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Fe x = f.from_index(rng() % f.order());
    CHECK(field_frobenius(field_frobenius(x, 1), 1) == x);
    CHECK(field_frobenius(x, 1) == x.pow(11));
    CHECK(field_frobenius(x, 2) == x.pow(121));
  }
  CHECK(field_frobenius(f.from_int(5), 1) == f.from_int(5));
  CHECK_THROWS(field_frobenius(f.one(), -1));

  // Ring homomorphism fixing exactly F_p when k is prime.
  for (int k : {2, 3, 5}) {
    const ExtField g = make_ext_field(5, k);
    u128 fixed = 0;
    for (u128 i = 0; i < g.order(); ++i) {
      const Fe x = g.from_index(i);
      const Fe y = g.from_index((i * 31 + 17) % g.order());
      CHECK(field_frobenius(x * y, 1) == field_frobenius(x, 1) * field_frobenius(y, 1));
      CHECK(field_frobenius(x + y, 1) == field_frobenius(x, 1) + field_frobenius(y, 1));
      if (field_frobenius(x, 1) == x) ++fixed;
    }
    CHECK(fixed == 5);
  }
}

TEST_CASE("square roots") {
  const ExtField f11 = make_ext_field(11, 1);
  CHECK(sqrt_in_field(f11.zero()) == f11.zero());
  CHECK(*sqrt_in_field(f11.from_int(4)) == f11.from_int(2));
  CHECK_FALSE(sqrt_in_field(f11.from_int(-1)).has_value());

  // All three procedures against the brute-force smaller root.
  struct Case {
    std::uint64_t p;
    int k;
  };
  for (Case c : {Case{11, 2}, Case{13, 4}, Case{103, 3}, Case{10007, 1}, Case{17, 4}}) {
    const ExtField f = make_ext_field(c.p, c.k);
    std::mt19937_64 rng(c.p);
    for (int t = 0; t < 40; ++t) {
      const Fe y = f.from_index(rng() % f.order());
      const Fe x = y * y;
      const auto r = sqrt_in_field(x);
      REQUIRE(r.has_value());
      CHECK(*r * *r == x);
      CHECK(*r == std::min(y, -y));
      const Fe nz = f.from_index(rng() % (f.order() - 1) + 1);
      const bool euler = nz.pow((f.order() - 1) / 2).is_one();
      CHECK(sqrt_in_field(nz).has_value() == euler);
    }
  }
}

TEST_CASE("polynomials and rational functions") {
  const ExtField f = make_ext_field(13, 2);
  const Fe r1 = f.from_index(5), r2 = f.from_index(77), r3 = f.from_index(140);
  const Poly P = Poly::linear_root(r1) * Poly::linear_root(r2) * Poly::linear_root(r3) * Poly(f, {f.one(), f.zero(), f.one()});
  std::vector<Fe> expect{r1, r2, r3};
  // x^2 + 1 splits over F_169.
  for (u128 i = 0; i < f.order(); ++i) {
    const Fe x = f.from_index(i);
    if ((x * x + f.one()).is_zero()) expect.push_back(x);
  }
  std::sort(expect.begin(), expect.end());
  CHECK(P.roots() == expect);

  const auto [q, r] = divmod(P, Poly::linear_root(r2));
  CHECK(r.is_zero());
  CHECK(q * Poly::linear_root(r2) == P);
  CHECK(gcd(P, Poly::linear_root(r1) * Poly::linear_root(f.from_index(9))) == Poly::linear_root(r1));

  const RatFn X = RatFn(Poly(f, {f.from_int(3), f.zero(), f.one()}), Poly::linear_root(r1));
  const RatFn G = RatFn(Poly(f, {f.one(), f.from_int(2)}), Poly(f, {f.from_int(5), f.zero(), f.one()}));
  const RatFn C = X.compose(G);
  for (u128 i = 0; i < f.order(); i += 7) {
    const Fe x = f.from_index(i);
    const auto g = G.eval(x);
    if (!g) continue;
    const auto lhs = C.eval(x);
    const auto rhs = X.eval(*g);
    CHECK(lhs.has_value() == rhs.has_value());
    if (lhs && rhs) CHECK(*lhs == *rhs);
  }
  CHECK((X * G / G) == X);
  CHECK((X + G - G) == X);
  CHECK(X.den().lead().is_one());
}

TEST_CASE("subfield embeddings") {
  for (auto [p, a, b] : {std::tuple{7ull, 2, 4}, std::tuple{5ull, 2, 6}, std::tuple{11ull, 3, 6}, std::tuple{13ull, 1, 3}}) {
    const ExtField s = make_ext_field(p, a), l = make_ext_field(p, b);
    const auto& e = FieldEmbedding::get(s, l);
    std::mt19937_64 rng(p * 31 + static_cast<unsigned>(b));
    for (int t = 0; t < 30; ++t) {
      const Fe x = s.from_index(rng() % s.order());
      const Fe y = s.from_index(rng() % s.order());
      CHECK(e.map(x * y) == e.map(x) * e.map(y));
      CHECK(e.map(x + y) == e.map(x) + e.map(y));
      CHECK(e.map(x).in_subfield(a));
      CHECK(e.map(x.frobenius(1)) == e.map(x).frobenius(1));
      CHECK(*e.preimage(e.map(x)) == x);
    }
    if (a < b) {
      // Some element of the large field lies outside the image.
      bool outside = false;
      for (u128 i = 0; i < l.order() && !outside; ++i) outside = !e.preimage(l.from_index(i)).has_value();
      CHECK(outside);
    }
  }
}
