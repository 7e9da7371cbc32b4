// The quaternion algebra (-1, -p)/Q with basis 1, i, j, ij, realized as
// End^0 of y^2 = x^3 + x over F_p for p = 3 mod 4.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "isodesc/curve.hpp"
#include "isodesc/isogeny.hpp"

namespace isodesc {

using Rational = boost::multiprecision::cpp_rational;

// "5", "-12/13".
std::string rational_string(const Rational& r);

struct Quaternion {
  std::int64_t p = 3;
  Rational a, b, c, d;  // a + b i + c j + d ij

  static Quaternion scalar(std::int64_t p, Rational r) { return {p, std::move(r), 0, 0, 0}; }
  static Quaternion one(std::int64_t p) { return {p, 1, 0, 0, 0}; }
  static Quaternion i(std::int64_t p) { return {p, 0, 1, 0, 0}; }
  static Quaternion j(std::int64_t p) { return {p, 0, 0, 1, 0}; }
  static Quaternion ij(std::int64_t p) { return {p, 0, 0, 0, 1}; }

  Quaternion operator+(const Quaternion& o) const;
  Quaternion operator-(const Quaternion& o) const;
  Quaternion operator-() const;
  Quaternion operator*(const Quaternion& o) const;
  Quaternion operator*(const Rational& r) const;
  Quaternion conj() const;
  Rational norm() const;   // a^2 + b^2 + p c^2 + p d^2
  Rational trace() const;  // 2a
  // Throws std::domain_error for zero.
  Quaternion inv() const;
  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }
  bool is_scalar() const { return b == 0 && c == 0 && d == 0; }
  bool operator==(const Quaternion& o) const { return p == o.p && a == o.a && b == o.b && c == o.c && d == o.d; }
  std::string to_string() const;
};

Quaternion quat_mul(const Quaternion& x, const Quaternion& y);
Quaternion quat_inv(const Quaternion& x);
Quaternion quat_conj(const Quaternion& x);

// f^{-1} x f.
Quaternion conjugation_map(const Quaternion& f, const Quaternion& x);

// Q + Q g for a pure quaternion g with negative rational square.
struct QuadraticSubfield {
  Quaternion generator;
  explicit QuadraticSubfield(Quaternion g);
  bool contains(const Quaternion& x) const;
  bool operator==(const QuadraticSubfield& o) const { return contains(o.generator) && o.contains(generator); }
};

struct ConjugationExample {
  std::int64_t p = 0, n = 0;
  Quaternion f, f_inv, phi_j, closed_form;
  bool matches_closed_form = false;
  Rational phi_j_squared;
  bool square_is_minus_p = false;
  bool subfields_distinct = false;
  Rational ij_coordinate;
};

// f = 1 + n i and phi(j) = f^{-1} j f; p = 3 mod 4 prime, n >= 0.
ConjugationExample conjugation_example(std::int64_t p, std::int64_t n);

// Equivalent conditions for phi(u) = f^{-1} u f on A = B = E, with
// End^0_F(E) = Z_F(E) = Q + Q j and pi = j.
struct EquivalenceReport {
  bool a = false;  // f commutes with j
  bool b = false;  // phi(j) = j
  bool c = false;  // phi(Q + Qj) = Q + Qj as endomorphism algebras over F
  bool d = false;  // phi(Z) = Z
  bool e = false;  // phi(Z) in Z
  bool f = false;  // phi(Z) contains Z
  bool all_equal() const { return a == b && b == c && c == d && d == e && e == f; }
};
EquivalenceReport equivalence_report(const Quaternion& f);

// Matrix on E[n] of the endomorphism a + b i + c j + d ij of y^2 = x^3 + x
// over F_p, with j the Frobenius and i normalized so that its upper-right
// entry lies in [0, n/2].  Coordinates must be integers and n coprime to 2p.
Mat2 torsion_representation(std::int64_t p, int n, const Quaternion& x);
// Recipe for x under the same sign normalization of i.
EndoRecipe quaternion_recipe(std::int64_t p, int n, const Quaternion& x);

}  // namespace isodesc
