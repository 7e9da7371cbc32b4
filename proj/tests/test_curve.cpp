#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "isodesc/curve.hpp"
#include "isodesc/weil.hpp"

using namespace isodesc;

namespace {

// Oracle: every (x, y) pair checked against the equation.
u128 brute_count(const Curve& E) {
  const ExtField f = E.field();
  u128 n = 1;
  for (u128 i = 0; i < f.order(); ++i)
    for (u128 j = 0; j < f.order(); ++j) {
      const Fe x = f.from_index(i), y = f.from_index(j);
      if (y * y == E.rhs(x)) ++n;
    }
  return n;
}

std::vector<Point> all_points(const Curve& E) {
  const ExtField f = E.field();
  std::vector<Point> pts{Point::identity()};
  for (u128 i = 0; i < f.order(); ++i)
    for (u128 j = 0; j < f.order(); ++j) {
      const Fe x = f.from_index(i), y = f.from_index(j);
      if (y * y == E.rhs(x)) pts.push_back(Point::affine(x, y));
    }
  return pts;
}

// Order by repeated addition.
u128 naive_order(const Curve& E, const Point& P) {
  u128 k = 1;
  Point R = P;
  while (!R.inf) {
    R = point_add(E, R, P);
    ++k;
  }
  return k;
}

}  // namespace

TEST_CASE("group law basics") {
  const Curve E = Curve::make(11, 1, 1, 0);
  const ExtField f = E.field();
  const Point T = Point::affine(f.zero(), f.zero());
  CHECK(point_add(E, T, Point::identity()) == T);
  CHECK(point_add(E, T, point_neg(T)).inf);
  CHECK(point_double(E, T).inf);
  CHECK(point_mul(E, T, 0).inf);
  CHECK_THROWS_AS(Curve::make(7, 1, 0, 0), std::invalid_argument);

  const auto pts = all_points(E);
  for (const auto& P : pts)
    for (const auto& Q : pts) {
      const Point R = point_add(E, P, Q);
      CHECK(E.contains(R));
      CHECK(R == point_add(E, Q, P));
    }
  for (const auto& P : pts) {
    CHECK(point_mul(E, P, 5) == point_add(E, point_mul(E, P, 2), point_mul(E, P, 3)));
    CHECK(point_mul(E, P, -3) == point_neg(point_mul(E, P, 3)));
  }
}

TEST_CASE("point counts") {
  CHECK(count_points(Curve::make(7, 1, 1, 0)) == 8);
  CHECK(count_points(Curve::make(11, 1, 1, 0)) == 12);
  CHECK(count_points(Curve::make(5, 1, 1, 1)) == 9);
  CHECK(frobenius_trace(Curve::make(11, 1, 1, 0)) == 0);
  CHECK(frobenius_trace(Curve::make(5, 1, 1, 1)) == -3);
  for (auto [p, a, b] : {std::tuple{13ull, 2, 5}, std::tuple{17ull, 0, 3}, std::tuple{19ull, 4, 1}}) {
    const Curve E = Curve::make(p, 1, a, b);
    CHECK(count_points(E) == brute_count(E));
  }
  const Curve E2 = Curve::make(5, 2, 1, 1);
  CHECK(count_points(E2) == brute_count(E2));
}

TEST_CASE("traces over extensions") {
  CHECK(trace_over_extension(0, 7, 2) == -14);
  CHECK(trace_over_extension(-3, 5, 2) == -1);
  CHECK(trace_over_extension(4, 9, 1) == 4);
  CHECK(count_over_extension(Curve::make(7, 1, 1, 0), 2) == 64);
  CHECK(brute_count(Curve::make(7, 1, 1, 0).base_change(make_ext_field(7, 2))) == 64);
  CHECK(brute_count(Curve::make(5, 1, 1, 1).base_change(make_ext_field(5, 2))) == 27);
  for (auto [p, a, b, m] : {std::tuple{5ull, 2, 1, 3}, std::tuple{7ull, 3, 2, 2}, std::tuple{11ull, 1, 4, 2}}) {
    const Curve E = Curve::make(p, 1, a, b);
    CHECK(count_over_extension(E, m) == count_points(E.base_change(make_ext_field(p, m))));
  }
}

TEST_CASE("group structure against an order census") {
  for (auto [p, a, b] : {std::tuple{11ull, 1, 0}, std::tuple{7ull, 1, 0}, std::tuple{13ull, 1, 0}, std::tuple{5ull, 1, 1}, std::tuple{17ull, 2, 0},
                         std::tuple{29ull, 0, 1}, std::tuple{37ull, 3, 0}}) {
    const Curve E = Curve::make(p, 1, a, b);
    const GroupStructure gs = group_structure(E);
    u128 exponent = 1;
    for (const auto& P : all_points(E)) exponent = std::max(exponent, naive_order(E, P));
    const u128 N = count_points(E);
    CHECK(gs.ab == exponent);
    CHECK(gs.a == N / exponent);
    CHECK(naive_order(E, gs.g1) == gs.ab);
    CHECK(naive_order(E, gs.g2) == gs.a);
    CHECK((p - 1) % static_cast<std::uint64_t>(gs.a) == 0);
  }
  const GroupStructure g11 = group_structure(Curve::make(11, 1, 1, 0));
  CHECK(g11.a == 1);
  CHECK(g11.ab == 12);
  const GroupStructure g7 = group_structure(Curve::make(7, 1, 1, 0));
  CHECK(g7.a == 1);
  CHECK(g7.ab == 8);
  // y^2 = x^3 + x over F_13 has full 2-torsion.
  const GroupStructure g13 = group_structure(Curve::make(13, 1, 1, 0));
  CHECK(g13.a % 2 == 0);
}

TEST_CASE("torsion fields and bases") {
  const Curve E = Curve::make(11, 1, 1, 0);
  CHECK(*torsion_field_degree(E, 2) == 2);
  CHECK(*torsion_field_degree(E, 1) == 1);
  CHECK_THROWS_AS(torsion_field_degree(E, 22), std::invalid_argument);
  CHECK_THROWS_AS(torsion_basis(E, 1), std::invalid_argument);

  const TorsionBasis B2 = torsion_basis(E, 2);
  const ExtField L = B2.curve.field();
  CHECK(L.degree() == 2);
  CHECK(B2.P == Point::affine(L.zero(), L.zero()));
  CHECK(B2.Q.y.is_zero());
  CHECK((B2.Q.x * B2.Q.x + L.one()).is_zero());
  CHECK(B2.zeta == -L.one());

  for (auto [p, n] : {std::tuple{11ull, 3}, std::tuple{7ull, 3}, std::tuple{7ull, 5}, std::tuple{13ull, 4}}) {
    const Curve C = Curve::make(p, 1, 1, 0);
    const TorsionBasis B = torsion_basis(C, n);
    CHECK(point_mul(B.curve, B.P, n).inf);
    CHECK(point_mul(B.curve, B.Q, n).inf);
    CHECK(root_order(B.zeta, n) == n);
    // Minimality: no smaller extension contains E[n].
    const int K = B.curve.field().degree();
    for (int d = 1; d < K; ++d) {
      const u128 Nd = count_over_extension(C, d);
      bool full = Nd % static_cast<u128>(n * n) == 0;
      if (full) {
        std::set<Point> tors;
        const Curve Cd = C.base_change(make_ext_field(p, d));
        if (Cd.q() <= 5000)
          for (const auto& P : all_points(Cd))
            if (point_mul(Cd, P, n).inf) tors.insert(P);
        if (Cd.q() <= 5000) CHECK(tors.size() < static_cast<std::size_t>(n * n));
      }
    }
  }
}

TEST_CASE("frobenius matrices") {
  const Curve E = Curve::make(7, 1, 1, 0);
  const TorsionBasis B = torsion_basis(E, 3);
  const Mat2 M = frobenius_matrix(B, 1);
  CHECK(M.trace() == 0);
  CHECK(M.det() == 1);
  CHECK(frobenius_matrix(B, B.curve.field().degree()) == Mat2::identity(3));

  for (auto [p, a, b, n] : {std::tuple{5ull, 1, 1, 3}, std::tuple{13ull, 2, 5, 5}, std::tuple{11ull, 3, 7, 4}}) {
    const Curve C = Curve::make(p, 1, a, b);
    const TorsionBasis T = torsion_basis(C, n);
    const i128 t = frobenius_trace(C);
    const Mat2 F = frobenius_matrix(T, 1);
    CHECK(F.trace() == mod(static_cast<std::int64_t>(t), n));
    CHECK(F.det() == mod(static_cast<std::int64_t>(p), n));
    // Matrix of Frobenius squared is the square of the matrix.
    CHECK(frobenius_matrix(T, 2) == F * F);
  }
}

TEST_CASE("supersingularity") {
  CHECK(is_supersingular(Curve::make(11, 1, 1, 0)));
  CHECK_FALSE(is_supersingular(Curve::make(5, 1, 1, 0)));
  CHECK(count_points(Curve::make(5, 1, 1, 0)) == 4);
  CHECK_FALSE(is_supersingular(Curve::make(5, 1, 1, 1)));
}
