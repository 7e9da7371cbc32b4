#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <tuple>

#include "doctest.h"
#include "isodesc/embedding.hpp"
#include "isodesc/isogeny.hpp"
#include "isodesc/weil.hpp"

using namespace isodesc;

namespace {

std::vector<Point> all_points(const Curve& E) {
  const ExtField f = E.field();
  std::vector<Point> pts{Point::identity()};
  for (u128 i = 0; i < f.order(); ++i) {
    const Fe x = f.from_index(i);
    const Fe r = E.rhs(x);
    for (u128 j = 0; j < f.order(); ++j) {
      const Fe y = f.from_index(j);
      if (y * y == r) pts.push_back(Point::affine(x, y));
    }
  }
  return pts;
}

Point first_of_order(const Curve& E, u128 n) {
  for (const auto& P : all_points(E)) {
    if (P.inf) continue;
    if (point_mul(E, P, static_cast<i128>(n)).inf) {
      bool exact = true;
      for (u128 d = 1; d < n; ++d)
        if (n % d == 0 && point_mul(E, P, static_cast<i128>(d)).inf) exact = false;
      if (exact) return P;
    }
  }
  throw std::runtime_error("no point of that order");
}

std::vector<Point> random_points(const Curve& E, int count, std::uint64_t seed) {
  const ExtField f = E.field();
  std::mt19937_64 rng(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    const Fe x = f.from_index(static_cast<u128>(rng()) % f.order());
    if (auto y = E.rhs(x).sqrt()) out.push_back(Point::affine(x, *y));
  }
  return out;
}

}  // namespace

TEST_CASE("velu isogenies are homomorphisms with the right kernel") {
  for (auto [p, a, b, ell] : {std::tuple{11ull, 1, 0, 3}, std::tuple{13ull, 1, 0, 2}, std::tuple{13ull, 2, 5, 3}, std::tuple{19ull, 4, 1, 5}}) {
    const Curve E = Curve::make(p, 1, a, b);
    const u128 N = count_points(E);
    if (N % static_cast<u128>(ell) != 0) continue;
    const Point K = first_of_order(E, static_cast<u128>(ell));
    const Isogeny f = velu(E, K);
    CHECK(f.degree == static_cast<u128>(ell));
    // Isogenous curves over F_p have the same number of points.
    CHECK(count_points(f.codomain) == N);

    const auto pts = all_points(E);
    std::size_t in_kernel = 0;
    for (const auto& P : pts) {
      const Point fP = evaluate(f, P);
      CHECK(f.codomain.contains(fP));
      if (fP.inf) ++in_kernel;
    }
    CHECK(in_kernel == static_cast<std::size_t>(ell));
    for (std::size_t i = 0; i < pts.size(); i += 3)
      for (std::size_t j = 0; j < pts.size(); j += 5)
        CHECK(evaluate(f, point_add(E, pts[i], pts[j])) == point_add(f.codomain, evaluate(f, pts[i]), evaluate(f, pts[j])));
  }
  const Curve E = Curve::make(11, 1, 1, 0);
  CHECK_THROWS_AS(velu(E, first_of_order(E, 4)), std::invalid_argument);
  CHECK(velu(E, Point::identity()).degree == 1);
}

TEST_CASE("velu over an extension and the dual isogeny") {
  // E[3] of y^2 = x^3 + x over F_11 lives over F_121.
  const Curve E = Curve::make(11, 1, 1, 0);
  const TorsionBasis B = torsion_basis(E, 3);
  const Curve& EL = B.curve;
  const Isogeny f = velu(E, B.P);
  CHECK(f.field() == EL.field());
  CHECK(evaluate(f, B.P).inf);
  const Point fQ = evaluate(f, B.Q);
  CHECK_FALSE(fQ.inf);
  // The dual has kernel f(E[3]) = <f(Q)>; the composite kills all of E[3].
  const Isogeny g = velu(f.codomain, fQ);
  const Isogeny gf = compose(g, f);
  CHECK(gf.degree == 9);
  CHECK(g.codomain.j_invariant() == E.base_change(EL.field()).j_invariant());
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) CHECK(evaluate(gf, point_add(EL, point_mul(EL, B.P, u), point_mul(EL, B.Q, v))).inf);
  for (const auto& R : random_points(EL, 20, 3)) {
    CHECK(evaluate(gf, R) == evaluate(g, evaluate(f, R)));
    if (!point_mul(EL, R, 3).inf) CHECK_FALSE(evaluate(gf, R).inf);
  }
}

TEST_CASE("automorphisms and frobenius as maps") {
  const Curve E = Curve::make(11, 1, 1, 0);
  const Isogeny i = automorphism(E, AutKind::I);
  CHECK(i.field().degree() == 2);
  const Isogeny ii = compose(i, i);
  CHECK(ii.X == RatFn::x(i.field()));
  CHECK(ii.Y == RatFn::constant(-i.field().one()));

  // s is in F_13 already.
  CHECK(automorphism(Curve::make(13, 1, 1, 0), AutKind::I).field().degree() == 1);
  CHECK_THROWS_AS(automorphism(Curve::make(13, 1, 1, 1), AutKind::I), std::invalid_argument);

  const Curve E0 = Curve::make(17, 1, 0, 3);
  const Isogeny w = automorphism(E0, AutKind::Omega);
  const Isogeny w3 = compose(w, compose(w, w));
  CHECK(w3.X == RatFn::x(w.field()));
  CHECK(w3.Y == RatFn::constant(w.field().one()));
  const Fe c = automorphism_constant(AutKind::Omega, w.field());
  CHECK((c * c + c + w.field().one()).is_zero());
  CHECK_FALSE(c.is_one());

  // (i pi)^2 = pi^2 = -p on y^2 = x^3 + x with p = 3 mod 4.
  const Isogeny j = endo_from_recipe(E, {AutKind::I, 0, 0, 0, 1});
  CHECK(j.degree == 11);
  const Isogeny jj = compose(j, j);
  const Isogeny m11 = scalar_map(identity_isogeny(j.domain), -11);
  CHECK(jj.X == m11.X);
  CHECK(jj.Y == m11.Y);
  const Isogeny pi = frobenius_map(E);
  CHECK(pi.degree == 11);
  const ExtField F121 = make_ext_field(11, 2);
  const Curve C(F121.from_index(13), F121.from_index(1));
  REQUIRE_FALSE(C.rational_over(1));
  CHECK_THROWS_AS(frobenius_map(C), std::invalid_argument);
  CHECK_THROWS_AS(endo_from_recipe(E, {AutKind::None, 1, 1, 0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(endo_from_recipe(E, {AutKind::I, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("recipe maps agree with point arithmetic") {
  struct Case {
    std::uint64_t p;
    int a, b;
    EndoRecipe r;
  };
  for (const Case& c : {Case{11, 1, 0, {AutKind::I, 1, 3, 0, 0}}, Case{11, 1, 0, {AutKind::I, 2, 0, 1, 1}}, Case{13, 2, 0, {AutKind::I, 0, 1, 1, 0}},
                        Case{17, 0, 3, {AutKind::Omega, 1, 2, 0, 0}}, Case{7, 3, 2, {AutKind::None, 2, 0, 1, 0}}}) {
    const Curve E = Curve::make(c.p, 1, c.a, c.b);
    const Isogeny f = endo_from_recipe(E, c.r);
    const Curve EL = E.base_change(make_ext_field(c.p, 4));
    for (const auto& P : random_points(EL, 12, c.p)) CHECK(evaluate(f, P) == evaluate_recipe(E, c.r, P));
    // Degree equals the reduced norm for 1 + n i: 1 + n^2.
    if (c.r.g == AutKind::I && c.r.c == 0 && c.r.d == 0) CHECK(f.degree == static_cast<u128>(c.r.a * c.r.a + c.r.b * c.r.b));
  }
}

TEST_CASE("field of definition oracles") {
  // 1 + 2i on y^2 = x^3 + x over F_11: s is not in F_11.
  const Curve E11 = Curve::make(11, 1, 1, 0);
  const Isogeny f = endo_from_recipe(E11, {AutKind::I, 1, 2, 0, 0});
  CHECK_FALSE(coeff_field_test(f, 1));
  CHECK(coeff_field_test(f, 2));
  const auto r1 = field_of_definition(f, 1);
  CHECK_FALSE(r1.commutation_test);
  CHECK_FALSE(r1.witnesses.empty());
  const auto r2 = field_of_definition(f, 2);
  CHECK(r2.commutation_test);

  // Over F_13, s is rational.
  const Isogeny g = endo_from_recipe(Curve::make(13, 1, 1, 0), {AutKind::I, 1, 2, 0, 0});
  CHECK(field_of_definition(g, 1).commutation_test);
  CHECK(field_of_definition(frobenius_map(E11), 1).commutation_test);

  // Quadratic twist isomorphism: both curves over F_p, the map is not.
  const ExtField F2 = make_ext_field(13, 2);
  const Fe d = make_ext_field(13, 1).from_int(2);
  REQUIRE_FALSE(d.is_square());
  const Fe u = *lift(d, F2).sqrt();
  const Isogeny tw = scaling_isomorphism(Curve::make(13, 1, 2, 5), u);
  CHECK(tw.codomain.rational_over(1));
  CHECK_FALSE(field_of_definition(tw, 1).commutation_test);
  CHECK(field_of_definition(tw, 2).commutation_test);

  // Curve not defined over F_p: not applicable, and the coefficient test agrees.
  const ExtField F49 = make_ext_field(7, 2);
  const Curve C(F49.from_index(8), F49.from_index(3));
  REQUIRE_FALSE(C.rational_over(1));
  const CommutationResult cr = commutation_test(identity_isogeny(C), 1);
  CHECK(cr.status == CommutationStatus::NotApplicable);
  CHECK_FALSE(coeff_field_test(identity_isogeny(C), 1));
  CHECK(commutation_test(identity_isogeny(C), 2).value());
}

TEST_CASE("pairing compatibility with isogenies") {
  const Curve E = Curve::make(13, 1, 2, 5);
  const u128 N = count_points(E);
  const int n = 7;
  std::vector<Isogeny> maps;
  for (u128 ell : {2ull, 3ull, 5ull})
    if (N % ell == 0) maps.push_back(velu(E, first_of_order(E, ell)));
  maps.push_back(frobenius_map(E));
  maps.push_back(scalar_map(identity_isogeny(E), 3));
  const TorsionBasis B = torsion_basis(E, n);
  const PairingAxiomReport rep = pairing_axiom_suite(B, maps);
  CHECK(rep.ok());
  CHECK(rep.failures.empty());

  // A wrong degree is detected.
  Isogeny bad = maps.back();
  bad.degree = 10;
  CHECK_FALSE(pairing_axiom_suite(B, {bad}).compatibility);
}

TEST_CASE("dual composite acts as a scalar") {
  int done = 0;
  for (auto [p, a, b] : {std::tuple{13ull, 2, 5}, std::tuple{19ull, 4, 1}, std::tuple{31ull, 3, 7}}) {
    const Curve E = Curve::make(p, 1, a, b);
    const TorsionBasis B = torsion_basis(E, 3);
    const Curve& EL = B.curve;
    const Isogeny f = velu(E, B.P);
    const Isogeny g = velu(f.codomain, evaluate(f, B.Q));
    // Bring g's codomain back to E with (x, y) -> (u^2 x, u^3 y).
    const Curve& C = g.codomain;
    const Fe r = (EL.b() * C.a()) / (EL.a() * C.b());
    const std::optional<Fe> u = r.sqrt();
    if (!u) continue;
    const Isogeny h = compose(scaling_isomorphism(C, *u), compose(g, f));
    REQUIRE(h.codomain == EL);
    CHECK(h.degree == 9);
    ++done;
    int sign = 0;
    for (const auto& R : random_points(EL, 30, p)) {
      const Point hR = evaluate(h, R);
      const Point t = point_mul(EL, R, 3);
      const int s = hR == t ? 1 : hR == point_neg(t) ? -1 : 0;
      CHECK(s != 0);
      if (sign == 0) sign = s;
      if (!t.inf && !(t == point_neg(t))) CHECK(s == sign);
    }
  }
  CHECK(done >= 2);
}

TEST_CASE("homomorphism on random pairs and order bookkeeping") {
  const Curve E = Curve::make(11, 1, 1, 0);
  const Isogeny f = velu(E, Point::affine(E.field().zero(), E.field().zero()));
  const TorsionBasis B = torsion_basis(E, 4);
  const Curve& EL = B.curve;
  // Some point of order 4 doubles to (0, 0); its image has order 2.
  std::optional<Point> above;
  for (int s = 0; s < 4 && !above; ++s)
    for (int t = 0; t < 4 && !above; ++t) {
      const Point R = point_add(EL, point_mul(EL, B.P, s), point_mul(EL, B.Q, t));
      const Point R2 = point_double(EL, R);
      if (!R2.inf && R2.x.is_zero()) above = R;
    }
  REQUIRE(above);
  const Point im = evaluate(f, *above);
  CHECK_FALSE(im.inf);
  CHECK(point_double(f.codomain.base_change(EL.field()), im).inf);

  const auto pts = random_points(EL, 200, 99);
  const Curve CL = f.codomain.base_change(EL.field());
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2)
    CHECK(evaluate(f, point_add(EL, pts[i], pts[i + 1])) == point_add(CL, evaluate(f, pts[i]), evaluate(f, pts[i + 1])));
  const Isogeny id = compose(identity_isogeny(f.codomain), f);
  CHECK(id.X == f.X);
  CHECK(id.Y == f.Y);
}

TEST_CASE("1 + n i fixes a rational cyclic subgroup") {
  // E(F_11) = Z/12; 1 + 6i acts as the identity on the points of order 6.
  const Curve E = Curve::make(11, 1, 1, 0);
  const GroupStructure gs = group_structure(E);
  const Point P6 = point_mul(E, gs.g1, 2);
  const EndoRecipe r{AutKind::I, 1, 6, 0, 0};
  const Curve EL = E.base_change(make_ext_field(11, 2));
  for (int k = 0; k < 6; ++k) {
    const Point R = lift_point(point_mul(E, P6, k), EL.field());
    CHECK(evaluate_recipe(E, r, R) == R);
  }
  CHECK(endo_from_recipe(E, r).degree == 37);
}
