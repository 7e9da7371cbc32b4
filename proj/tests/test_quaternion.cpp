#include <random>
#include <stdexcept>

#include "doctest.h"
#include "isodesc/quaternion.hpp"

using namespace isodesc;

namespace {

Quaternion q(std::int64_t p, Rational a, Rational b, Rational c, Rational d) { return {p, std::move(a), std::move(b), std::move(c), std::move(d)}; }

// Oracle: expand products of basis elements by the relations
// i^2 = -1, j^2 = -p, ji = -ij, written as words over {i, j}.
Quaternion word(std::int64_t p, const std::string& w) {
  // Reduce a word to sign * coefficient * (i^e1 j^e2) by moving i left.
  Rational coef = 1;
  int ei = 0, ej = 0;
  for (char ch : w) {
    if (ch == 'i') {
      // Moving i past j^ej flips the sign ej times.
      if (ej % 2) coef = -coef;
      ++ei;
    } else {
      ++ej;
    }
  }
  for (; ei >= 2; ei -= 2) coef *= -1;
  for (; ej >= 2; ej -= 2) coef *= -p;
  Quaternion r{p, 0, 0, 0, 0};
  if (ei == 0 && ej == 0) r.a = coef;
  if (ei == 1 && ej == 0) r.b = coef;
  if (ei == 0 && ej == 1) r.c = coef;
  if (ei == 1 && ej == 1) r.d = coef;
  return r;
}

}  // namespace

TEST_CASE("quaternion relations") {
  const std::int64_t p = 11;
  const auto I = Quaternion::i(p), J = Quaternion::j(p), IJ = Quaternion::ij(p);
  CHECK(I * J == IJ);
  CHECK(J * I == -IJ);
  CHECK(I * I == Quaternion::scalar(p, -1));
  CHECK(J * J == Quaternion::scalar(p, -11));
  CHECK(J.norm() == 11);
  // All products of basis words against the rewriting oracle.
  const std::vector<std::string> words{"", "i", "j", "ij", "ji", "iji", "jj", "jij"};
  for (const auto& u : words)
    for (const auto& v : words) CHECK(word(p, u) * word(p, v) == word(p, u + v));

  for (std::int64_t n = 0; n < 8; ++n) {
    const Quaternion f = Quaternion::one(p) + I * Rational(n);
    CHECK(f.inv() == q(p, Rational(1, n * n + 1), Rational(-n, n * n + 1), 0, 0));
    CHECK(f * f.inv() == Quaternion::one(p));
  }
  CHECK_THROWS_AS(Quaternion::scalar(p, 0).inv(), std::domain_error);
  CHECK(rational_string(Rational(-24, 26)) == "-12/13");
  CHECK(rational_string(Rational(5)) == "5");
}

TEST_CASE("norm and conjugation") {
  std::mt19937_64 rng(5);
  auto rnd = [&] { return Rational(static_cast<std::int64_t>(rng() % 21) - 10, static_cast<std::int64_t>(rng() % 5) + 1); };
  for (std::int64_t p : {7, 19, 23}) {
    for (int t = 0; t < 50; ++t) {
      const Quaternion x = q(p, rnd(), rnd(), rnd(), rnd()), y = q(p, rnd(), rnd(), rnd(), rnd());
      CHECK((x * y).norm() == x.norm() * y.norm());
      const Quaternion f = q(p, rnd() + 11, rnd(), rnd(), rnd());
      const Quaternion cx = conjugation_map(f, x), cy = conjugation_map(f, y);
      CHECK(cx.norm() == x.norm());
      CHECK(cx.trace() == x.trace());
      CHECK(conjugation_map(f, x * y) == cx * cy);
      CHECK(conjugation_map(f, Quaternion::one(p)) == Quaternion::one(p));
      CHECK(conjugation_map(Quaternion::one(p), x) == x);
    }
    CHECK(conjugation_map(Quaternion::i(p), Quaternion::j(p)) == -Quaternion::j(p));
  }
}

TEST_CASE("conjugation by 1 + n i") {
  const ConjugationExample r = conjugation_example(11, 5);
  CHECK(r.matches_closed_form);
  CHECK(rational_string(r.phi_j.c) == "-12/13");
  CHECK(rational_string(r.phi_j.d) == "-5/13");
  CHECK(r.phi_j.a == 0);
  CHECK(r.phi_j.b == 0);
  CHECK(r.phi_j_squared == -11);
  CHECK(r.square_is_minus_p);
  CHECK(r.subfields_distinct);

  const ConjugationExample z = conjugation_example(7, 0);
  CHECK(z.phi_j == Quaternion::j(7));
  CHECK_FALSE(z.subfields_distinct);

  for (std::int64_t p : {7, 11, 19, 23})
    for (std::int64_t n = 1; n <= 7; ++n) {
      const auto rep = conjugation_example(p, n);
      CHECK(rep.matches_closed_form);
      CHECK(rep.ij_coordinate == Rational(-2 * n, n * n + 1));
      CHECK(rep.subfields_distinct);
    }
  CHECK_THROWS_AS(conjugation_example(13, 1), std::invalid_argument);
}

TEST_CASE("equivalent conditions in the quaternion model") {
  for (std::int64_t p : {7, 11, 19}) {
    for (std::int64_t n = 1; n < 6; ++n) {
      const EquivalenceReport r = equivalence_report(Quaternion::one(p) + Quaternion::i(p) * Rational(n));
      CHECK(r.all_equal());
      CHECK_FALSE(r.a);
      // F-rational f = 1 + n j.
      const EquivalenceReport s = equivalence_report(Quaternion::one(p) + Quaternion::j(p) * Rational(n));
      CHECK(s.all_equal());
      CHECK(s.a);
    }
    CHECK(equivalence_report(q(p, 2, 1, 3, 1)).all_equal());
  }
}

TEST_CASE("torsion representation") {
  for (std::int64_t p : {7, 11, 19, 23})
    for (int n : {3, 5}) {
      const Mat2 Id = Mat2::identity(n);
      const Mat2 Mi = torsion_representation(p, n, Quaternion::i(p));
      const Mat2 Mj = torsion_representation(p, n, Quaternion::j(p));
      CHECK(torsion_representation(p, n, Quaternion::one(p)) == Id);
      CHECK(Mi * Mi == -Id);
      CHECK(Mj * Mj == Mat2::scalar(n, -p));
      CHECK(Mj * Mi == -(Mi * Mj));
      CHECK(2 * Mi.m[1] <= n);
      // j is the Frobenius.
      const TorsionBasis B = torsion_basis(Curve::make(static_cast<std::uint64_t>(p), 1, 1, 0), n);
      CHECK(Mj == frobenius_matrix(B, 1));
      const std::vector<Quaternion> xs{Quaternion::one(p), Quaternion::i(p), Quaternion::j(p), Quaternion::ij(p),
                                       Quaternion::one(p) + Quaternion::i(p) * Rational(6), q(p, 2, -1, 3, 4)};
      for (const auto& x : xs)
        for (const auto& y : xs) CHECK(torsion_representation(p, n, x * y) == torsion_representation(p, n, x) * torsion_representation(p, n, y));
    }
  CHECK_THROWS_AS(torsion_representation(11, 5, q(11, Rational(1, 2), 0, 0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(torsion_representation(11, 4, Quaternion::one(11)), std::invalid_argument);
  CHECK_THROWS_AS(torsion_representation(11, 11, Quaternion::one(11)), std::invalid_argument);
}
