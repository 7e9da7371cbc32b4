#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "isodesc/frobenius_algebra.hpp"

using namespace isodesc;

namespace {

// Oracle: t = q + 1 - #E by testing every (x, y) pair over a prime field.
std::int64_t brute_trace(std::uint64_t p, std::int64_t a, std::int64_t b) {
  std::int64_t n = 1;
  const std::int64_t P = static_cast<std::int64_t>(p);
  for (std::int64_t x = 0; x < P; ++x)
    for (std::int64_t y = 0; y < P; ++y)
      if ((y * y - x * x * x - a * x - b) % P == 0) ++n;
  return P + 1 - n;
}

// Oracle: squarefree kernel by trial division, then the usual 4-adjustment.
std::int64_t brute_fund_disc(std::int64_t d) {
  std::int64_t s = d < 0 ? -1 : 1, m = d < 0 ? -d : d;
  for (std::int64_t k = 2; k * k <= m; ++k)
    while (m % (k * k) == 0) m /= k * k;
  const std::int64_t core = s * m;
  return ((core % 4) + 4) % 4 == 1 ? core : 4 * core;
}

// First (a, b) over F_p with the given trace, by exhaustive scan.
std::pair<int, int> curve_with_trace(std::uint64_t p, std::int64_t t) {
  for (int a = 0; a < static_cast<int>(p); ++a)
    for (int b = 0; b < static_cast<int>(p); ++b) {
      if ((4 * a * a * a + 27 * b * b) % static_cast<int>(p) == 0) continue;
      if (brute_trace(p, a, b) == t) return {a, b};
    }
  throw std::runtime_error("no curve with that trace");
}

}  // namespace

TEST_CASE("tate isogeny oracle") {
  const Curve E = Curve::make(5, 1, 1, 0), E2 = Curve::make(5, 1, 1, 1);
  CHECK(tate_isogenous(E, E, 1));
  CHECK(brute_trace(5, 1, 0) == 2);
  CHECK(brute_trace(5, 1, 1) == -3);
  CHECK_FALSE(tate_isogenous(E, E2, 1));
  // Two supersingular curves over F_11.
  CHECK(brute_trace(11, 1, 0) == 0);
  CHECK(brute_trace(11, 0, 3) == 0);
  CHECK(tate_isogenous(Curve::make(11, 1, 1, 0), Curve::make(11, 1, 0, 3), 1));

  const ExtField F49 = make_ext_field(7, 2);
  const Curve C(F49.from_index(8), F49.from_index(3));
  CHECK_THROWS_AS(tate_isogenous(C, C, 1), std::invalid_argument);
  CHECK(tate_isogenous(C, C, 2));
  // A curve over F_49 with F_7 coefficients has the F_7 trace.
  CHECK(trace_at(Curve::make(7, 2, 3, 2), 1) == brute_trace(7, 3, 2));
}

TEST_CASE("center data") {
  const Curve E = Curve::make(11, 1, 1, 0);
  const FrobeniusData c1 = center_data(E, 1);
  CHECK(c1.disc == -44);
  CHECK_FALSE(c1.rational);
  CHECK(c1.fund_disc == brute_fund_disc(-44));
  CHECK(c1.fund_disc == -11);
  const FrobeniusData c2 = center_data(E, 2);
  CHECK(c2.t == -22);
  CHECK(c2.disc == 0);
  CHECK(c2.rational);
  CHECK(c2.pi_value == -11);
  const FrobeniusData o = center_data(Curve::make(5, 1, 1, 1), 1);
  CHECK(o.disc == -11);
  CHECK(o.fund_disc == -11);
  CHECK(o.center_string() == "Q(sqrt(-11))");

  for (std::uint64_t p : {5ull, 7ull, 13ull, 17ull})
    for (int a = 1; a < 4; ++a) {
      if ((4 * a * a * a + 108) % static_cast<int>(p) == 0) continue;
      const Curve C = Curve::make(p, 1, a, 2);
      CHECK(center_data(C, 1).fund_disc == brute_fund_disc(static_cast<std::int64_t>(center_data(C, 1).disc)));
      CHECK(center_inclusion_check(C, 1, 1));
      CHECK(center_inclusion_check(C, 1, 2));
      CHECK(center_inclusion_check(C, 1, 3));
      CHECK(center_inclusion_check(C, 2, 6));
    }
  CHECK(center_inclusion_check(E, 1, 2));
  CHECK_THROWS_AS(center_inclusion_check(E, 2, 3), std::invalid_argument);
}

TEST_CASE("isotypic partitions and L-connectedness") {
  // E over F_13 and its quadratic twist by the non-residue 2.
  const std::int64_t a = 2, b = 5, d = 2;
  const Curve E = Curve::make(13, 1, a, b);
  const Curve T = Curve::make(13, 1, a * d * d, b * d * d * d);
  REQUIRE(brute_trace(13, a * d * d % 13, b * d * d * d % 13) == -brute_trace(13, a, b));
  REQUIRE(brute_trace(13, a, b) != 0);
  const Curve O = Curve::make(13, 1, 1, 1);
  REQUIRE(brute_trace(13, 1, 1) != brute_trace(13, a, b));
  REQUIRE(brute_trace(13, 1, 1) != -brute_trace(13, a, b));

  CHECK(isotypic_partition({E}, 1) == Partition{{0}});
  CHECK(isotypic_partition({E, E, O}, 1) == Partition{{0, 1}, {2}});
  CHECK(isotypic_partition({E, T}, 1) == Partition{{0}, {1}});
  CHECK(isotypic_partition({E, T}, 2) == Partition{{0, 1}});
  CHECK(isotypic_partition({E, T}, 3) == Partition{{0}, {1}});
  CHECK(l_connected_components({E, T}, 1, 1) == Partition{{0}, {1}});
  CHECK(l_connected_components({E, T}, 1, 2) == Partition{{0, 1}});
  CHECK(l_connected_components({E, O, T, E}, 1, 2) == isotypic_partition({E, O, T, E}, 2));
  CHECK_THROWS_AS(isotypic_partition({}, 1), std::invalid_argument);
}

TEST_CASE("cyclotomic checks") {
  // Trace 1 over F_7: 1 - 28 = -27, fundamental discriminant -3.
  const auto [a3, b3] = curve_with_trace(7, 1);
  const Curve E3 = Curve::make(7, 1, a3, b3);
  CHECK(center_data(E3, 1).fund_disc == -3);
  CHECK(zeta_embedding_check(E3, 1, 3));
  CHECK(zeta_embedding_check(E3, 1, 6));
  CHECK_FALSE(zeta_embedding_check(E3, 1, 4));
  CHECK_FALSE(zeta_embedding_check(E3, 1, 5));
  CHECK(linear_disjointness_check(E3, 1, 3) == Disjointness::Contains);
  CHECK(linear_disjointness_check(E3, 1, 5) == Disjointness::Disjoint);

  const Curve S = Curve::make(11, 1, 1, 0);
  CHECK(zeta_embedding_check(S, 1, 2));
  CHECK(zeta_embedding_check(S, 1, 1));
  CHECK_FALSE(zeta_embedding_check(S, 1, 4));
  CHECK(linear_disjointness_check(S, 1, 2) == Disjointness::Contains);
  CHECK(linear_disjointness_check(S, 1, 3) == Disjointness::Disjoint);
  // Q(sqrt(-11)) is the quadratic subfield of Q(zeta_11).
  CHECK(linear_disjointness_check(S, 1, 11) == Disjointness::Neither);
  // Rational center over F_121.
  CHECK_FALSE(zeta_embedding_check(S, 2, 3));
  CHECK(linear_disjointness_check(S, 2, 3) == Disjointness::Disjoint);

  // Trace 4 over F_11: 16 - 44 = -28, fundamental discriminant -7.
  const auto [a7, b7] = curve_with_trace(11, 4);
  const Curve E7 = Curve::make(11, 1, a7, b7);
  CHECK(center_data(E7, 1).fund_disc == -7);
  CHECK(linear_disjointness_check(E7, 1, 7) == Disjointness::Neither);
  CHECK(linear_disjointness_check(E7, 1, 3) == Disjointness::Disjoint);
  CHECK_THROWS_AS(linear_disjointness_check(E7, 1, 9), std::invalid_argument);
}
