#include <stdexcept>

#include "doctest.h"
#include "isodesc/phi_checker.hpp"
#include "isodesc/weil.hpp"

using namespace isodesc;

namespace {

PhiInstance reference_instance(std::int64_t nb) {
  const Curve E = Curve::make(11, 1, 1, 0);
  const GroupStructure gs = group_structure(E);
  PhiInstance inst;
  inst.p = 11;
  inst.A = inst.B = E;
  inst.m = 2;
  inst.n = 6;
  inst.f = endo_from_recipe(E, {AutKind::I, 1, nb, 0, 0});
  const Point P6 = point_mul(E, gs.g1, static_cast<i128>(gs.ab / 6));
  inst.A_tilde = inst.B_tilde = {P6};
  return inst;
}

}  // namespace

TEST_CASE("the 1 + 6i instance over F_11") {
  REQUIRE(group_structure(Curve::make(11, 1, 1, 0)).ab == 12);
  const PhiReport r = check_phi(reference_instance(6));
  for (char c = 'a'; c <= 'g'; ++c) CHECK_MESSAGE(r.clause(c).ok, "clause ", c, ": ", r.clause(c).witness);
  CHECK(r.overall);
  CHECK(r.degree == 37);
  CHECK(r.lambda_multiplier == 37);
  CHECK(r.a_tilde_order == 6);
  CHECK(r.b_tilde_pointwise_rational);
  // f is not defined over F_11 itself.
  CHECK_FALSE(field_of_definition(reference_instance(6).f, 1).coeff_test);
  // Deterministic.
  CHECK(check_phi(reference_instance(6)).to_json() == r.to_json());
}

TEST_CASE("clause failures") {
  // deg(1 + 3i) = 10 shares 2 with n = 6.
  const PhiReport r = check_phi(reference_instance(3));
  CHECK_FALSE(r.clause('c').ok);
  CHECK_FALSE(r.overall);

  PhiInstance q = reference_instance(6);
  q.n = 11;
  q.A_tilde = q.B_tilde = {};
  CHECK_FALSE(check_phi(q).clause('b').ok);

  // An unstable line in E[3] over F_121.
  const Curve E = Curve::make(11, 1, 1, 0);
  const TorsionBasis B = torsion_basis(E, 3);
  std::optional<Point> unstable;
  for (int u = 0; u < 3 && !unstable; ++u)
    for (int v = 0; v < 3 && !unstable; ++v) {
      const Point R = point_add(B.curve, point_mul(B.curve, B.P, u), point_mul(B.curve, B.Q, v));
      if (R.inf) continue;
      const Point F = point_frobenius(R, 1);
      if (!(F == R) && !(F == point_neg(R))) unstable = R;
    }
  REQUIRE(unstable);
  PhiInstance s;
  s.p = 11;
  s.A = s.B = E;
  s.m = 1;
  s.n = 3;
  s.f = identity_isogeny(E);
  s.A_tilde = s.B_tilde = {*unstable};
  const PhiReport rs = check_phi(s);
  CHECK_FALSE(rs.clause('e').ok);
  CHECK_FALSE(rs.clause('f').ok);
  CHECK(rs.clause('e').witness.find("Frobenius") != std::string::npos);
  CHECK(rs.clause('c').ok);

  PhiInstance bad = reference_instance(6);
  bad.m = 0;
  CHECK_THROWS_AS(check_phi(bad), std::invalid_argument);
  bad = reference_instance(6);
  bad.A_tilde = {group_structure(E).g1};
  CHECK_THROWS_AS(check_phi(bad), std::invalid_argument);
}

TEST_CASE("instances from json") {
  const json j = json::parse(R"({
    "p": 11, "m": 2, "n": 6, "field_degree": 1,
    "A": {"a": 1, "b": 0}, "B": {"a": 1, "b": 0},
    "f": {"recipe": {"g": "i", "a": 1, "b": 6}},
    "A_tilde": [{"x": 9, "y": 1}], "B_tilde": [{"x": 9, "y": 1}]
  })");
  const Curve E = Curve::make(11, 1, 1, 0);
  const ExtField F = E.field();
  const Point P = Point::affine(F.from_int(9), F.from_int(1));
  REQUIRE(E.contains(P));
  REQUIRE(point_order(E, P, 12) == 6);
  const PhiReport r = check_phi(phi_instance_from_json(j));
  CHECK(r.overall);

  // Velu chain with an F_p-rational kernel of order 2 to a different curve.
  const Curve A = Curve::make(13, 1, 1, 0);
  const Isogeny h = velu(A, Point::affine(A.field().zero(), A.field().zero()));
  json k{{"p", 13}, {"m", 1}, {"n", 5}, {"field_degree", 1}, {"A", {{"a", 1}, {"b", 0}}}, {"B", curve_to_json(h.codomain)},
         {"f", {{"velu", json::array({json{{"x", 0}, {"y", 0}}})}}}, {"A_tilde", json::array()}, {"B_tilde", json::array()}};
  const PhiReport rk = check_phi(phi_instance_from_json(k));
  CHECK(rk.clause('c').ok);
  CHECK(rk.degree == 2);
  CHECK_FALSE(rk.clause('e').ok);
}
