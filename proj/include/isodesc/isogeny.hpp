// Isogenies as explicit rational maps (x, y) -> (X(x), y * Y(x)).
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isodesc/curve.hpp"
#include "isodesc/poly.hpp"

namespace isodesc {

// Extra automorphism used by endomorphism recipes.
enum class AutKind { None, I, Omega };

// a + b*g + c*pi + d*(g o pi), with pi the p-power Frobenius and g either
// i: (x, y) -> (-x, s y) on y^2 = x^3 + a x, s^2 = -1, or
// omega: (x, y) -> (w x, y) on y^2 = x^3 + b, w^2 + w + 1 = 0.
// s and w are the smaller roots (canonical order) in F_{p^2}.
struct EndoRecipe {
  AutKind g = AutKind::None;
  std::int64_t a = 1, b = 0, c = 0, d = 0;
  std::string to_string() const;
};

struct Isogeny {
  Curve domain, codomain;  // both over the working field
  RatFn X, Y;
  u128 degree = 1;
  std::vector<Point> kernel;  // generator for Velu isogenies, else empty
  std::optional<EndoRecipe> recipe;

  ExtField field() const { return domain.field(); }
  // Coefficients lifted into an extension of the working field.
  Isogeny base_change(ExtField L) const;
};

// Raised when the two field-of-definition oracles disagree.
class OracleDisagreement : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Isogeny identity_isogeny(const Curve& E);
// Vélu isogeny with kernel <K>; K may live over an extension of E's field,
// in which case the working field is K's field.  K must have prime order
// l != p; the identity gives the identity isogeny.
Isogeny velu(const Curve& E, const Point& K);
// Isomorphism (x, y) -> (u^2 x, u^3 y) onto y^2 = x^3 + u^4 a x + u^6 b.
Isogeny scaling_isomorphism(const Curve& E, const Fe& u);

// Throws std::domain_error when the point hits a pole off the kernel.
Point evaluate(const Isogeny& f, const Point& P);
// g o f; throws std::invalid_argument on a curve mismatch.
Isogeny compose(const Isogeny& g, const Isogeny& f);
// f + g for maps with common domain and codomain; throws std::domain_error
// when the sum is the zero map.
Isogeny add_maps(const Isogeny& f, const Isogeny& g);
Isogeny negate_map(const Isogeny& f);
Isogeny scalar_map(const Isogeny& f, std::int64_t k);

// The automorphism g on E, over the smallest field containing its constant.
Isogeny automorphism(const Curve& E, AutKind g);
// Unit scalars on E: +-1, +-g, +-g^2 (omega) as maps.
Isogeny automorphism_power(const Curve& E, AutKind g, int power, bool negate);
// Frobenius relative to F_p; E must be defined over F_p.
Isogeny frobenius_map(const Curve& E);
// Throws std::invalid_argument if the recipe needs an automorphism that E
// does not have, or the Frobenius on a curve not defined over F_p.
Isogeny endo_from_recipe(const Curve& E, const EndoRecipe& r);
// Same endomorphism by point arithmetic, for cross-checks.
Point evaluate_recipe(const Curve& E, const EndoRecipe& r, const Point& P);
// Constant s or w in the given field (which must contain it).
Fe automorphism_constant(AutKind g, ExtField L);

// Maps and curves fixed by the p^j-power Frobenius of the coefficients.
bool coeff_field_test(const Isogeny& f, int j);

enum class CommutationStatus { Commutes, Differs, NotApplicable };

struct CommutationResult {
  CommutationStatus status = CommutationStatus::NotApplicable;
  int probe_n = 0;       // level of the torsion basis used (0 when none)
  int basis_degree = 0;  // absolute degree of the basis field
  u128 certificate = 0;  // lower bound on the size of the agreement kernel
  std::vector<Point> witnesses;
  std::optional<TorsionBasis> basis;
  bool value() const { return status == CommutationStatus::Commutes; }
};

// f o pi = pi o f for the p^j-power Frobenius, on a basis of E[n] and 32
// pseudo-random points over F_{p^lcm(w, 6)}.  probe_n = 0 chooses n >= 5
// coprime to p deg(f) with the smallest torsion field.  Agreement is only
// reported when the checked points force the difference map to vanish.
CommutationResult commutation_test(const Isogeny& f, int j, int probe_n = 0);

struct FieldOfDefinitionReport {
  int j = 1;
  bool coeff_test = false;
  bool commutation_test = false;
  bool applicable = true;
  std::vector<std::string> witnesses;
};

// Runs both oracles; throws OracleDisagreement if they differ.
FieldOfDefinitionReport field_of_definition(const Isogeny& f, int j);

struct PairingAxiomReport {
  int n = 0;
  bool equivariance = true;
  bool compatibility = true;
  bool nondegeneracy = true;
  std::vector<std::string> failures;
  bool ok() const { return equivariance && compatibility && nondegeneracy; }
};

// Galois equivariance under the p-power Frobenius, e(fP, fQ) = e(P, Q)^deg f
// for each map whose domain base-changes to the basis curve, and exact order
// n of e(P, Q).
PairingAxiomReport pairing_axiom_suite(const TorsionBasis& B, const std::vector<Isogeny>& maps);

}  // namespace isodesc
