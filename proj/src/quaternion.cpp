#include "isodesc/quaternion.hpp"

#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace isodesc {

std::string rational_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

namespace {

void same_algebra(const Quaternion& x, const Quaternion& y) {
  if (x.p != y.p) throw std::invalid_argument("quaternions from different algebras");
}

}  // namespace

Quaternion Quaternion::operator+(const Quaternion& o) const {
  same_algebra(*this, o);
  return {p, a + o.a, b + o.b, c + o.c, d + o.d};
}

Quaternion Quaternion::operator-(const Quaternion& o) const {
  same_algebra(*this, o);
  return {p, a - o.a, b - o.b, c - o.c, d - o.d};
}

Quaternion Quaternion::operator-() const { return {p, -a, -b, -c, -d}; }

Quaternion Quaternion::operator*(const Quaternion& o) const {
  same_algebra(*this, o);
  const Rational P(p);
  return {p,
          a * o.a - b * o.b - P * c * o.c - P * d * o.d,
          a * o.b + b * o.a + P * c * o.d - P * d * o.c,
          a * o.c + c * o.a - b * o.d + d * o.b,
          a * o.d + d * o.a + b * o.c - c * o.b};
}

Quaternion Quaternion::operator*(const Rational& r) const { return {p, a * r, b * r, c * r, d * r}; }

Quaternion Quaternion::conj() const { return {p, a, -b, -c, -d}; }

Rational Quaternion::norm() const { return a * a + b * b + Rational(p) * (c * c + d * d); }

Rational Quaternion::trace() const { return 2 * a; }

Quaternion Quaternion::inv() const {
  const Rational nm = norm();
  if (nm == 0) throw std::domain_error("quaternion inverse of zero");
  return conj() * (Rational(1) / nm);
}

std::string Quaternion::to_string() const {
  std::ostringstream os;
  os << rational_string(a) << " + " << rational_string(b) << "*i + " << rational_string(c) << "*j + " << rational_string(d) << "*ij";
  return os.str();
}

Quaternion quat_mul(const Quaternion& x, const Quaternion& y) { return x * y; }
Quaternion quat_inv(const Quaternion& x) { return x.inv(); }
Quaternion quat_conj(const Quaternion& x) { return x.conj(); }

Quaternion conjugation_map(const Quaternion& f, const Quaternion& x) { return f.inv() * x * f; }

QuadraticSubfield::QuadraticSubfield(Quaternion g) : generator(std::move(g)) {
  if (generator.a != 0 || generator.is_zero()) throw std::invalid_argument("QuadraticSubfield: generator must be a nonzero pure quaternion");
  const Quaternion sq = generator * generator;
  if (!sq.is_scalar() || sq.a >= 0) throw std::logic_error("QuadraticSubfield: generator square is not a negative rational");
}

bool QuadraticSubfield::contains(const Quaternion& x) const {
  // x in Q + Q g iff the pure part of x is a rational multiple of g.
  const Quaternion& g = generator;
  return x.b * g.c == x.c * g.b && x.b * g.d == x.d * g.b && x.c * g.d == x.d * g.c;
}

ConjugationExample conjugation_example(std::int64_t p, std::int64_t n) {
  if (p < 7 || p % 4 != 3 || !is_prime(static_cast<std::uint64_t>(p))) throw std::invalid_argument("conjugation_example: p must be a prime = 3 mod 4");
  if (n < 0) throw std::invalid_argument("conjugation_example: n must be nonnegative");
  ConjugationExample r;
  r.p = p;
  r.n = n;
  r.f = Quaternion::one(p) + Quaternion::i(p) * Rational(n);
  r.f_inv = r.f.inv();
  const Quaternion J = Quaternion::j(p);
  r.phi_j = conjugation_map(r.f, J);
  const Rational den(n * n + 1);
  r.closed_form = {p, 0, 0, Rational(1 - n * n) / den, Rational(-2 * n) / den};
  r.matches_closed_form = r.phi_j == r.closed_form;
  const Quaternion sq = r.phi_j * r.phi_j;
  r.phi_j_squared = sq.a;
  r.square_is_minus_p = sq.is_scalar() && sq.a == -p && (J * J) == Quaternion::scalar(p, -p);
  r.subfields_distinct = !(QuadraticSubfield(r.phi_j) == QuadraticSubfield(J));
  r.ij_coordinate = r.phi_j.d;
  return r;
}

EquivalenceReport equivalence_report(const Quaternion& f) {
  const std::int64_t p = f.p;
  const Quaternion J = Quaternion::j(p);
  const Quaternion phij = conjugation_map(f, J);
  const QuadraticSubfield Z(J), phiZ(phij);
  EquivalenceReport r;
  r.a = f * J == J * f;
  r.b = phij == J;
  // End^0_F(E) = Z_F(E) here, so (c) compares the images of both basis vectors.
  r.c = Z.contains(conjugation_map(f, Quaternion::one(p))) && Z.contains(phij) && phiZ.contains(J);
  r.d = Z == phiZ;
  r.e = Z.contains(phij);
  r.f = phiZ.contains(J);
  return r;
}

namespace {

std::int64_t integral(const Rational& r, int n) {
  if (boost::multiprecision::denominator(r) != 1) throw std::invalid_argument("torsion_representation: coordinates must be integers");
  const auto v = boost::multiprecision::numerator(r) % n;
  return mod(static_cast<std::int64_t>(v), n);
}

struct RepData {
  TorsionBasis basis;
  Curve curve;
  int sign = 1;
};

const RepData& rep_data(std::int64_t p, int n) {
  static std::mutex mu;
  static std::map<std::pair<std::int64_t, int>, RepData> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find({p, n});
    if (it != memo.end()) return it->second;
  }
  if (p < 7 || p % 4 != 3 || !is_prime(static_cast<std::uint64_t>(p))) throw std::invalid_argument("torsion_representation: p must be a prime = 3 mod 4");
  if (n < 2 || gcd(static_cast<std::int64_t>(n), 2 * p) != 1) throw std::invalid_argument("torsion_representation: level must be coprime to 2p");
  RepData d;
  d.curve = Curve::make(static_cast<std::uint64_t>(p), 1, 1, 0);
  d.basis = torsion_basis(d.curve, n);
  const EndoRecipe ri{AutKind::I, 0, 1, 0, 0};
  const Mat2 Mi = matrix_from_images(d.basis, evaluate_recipe(d.curve, ri, d.basis.P), evaluate_recipe(d.curve, ri, d.basis.Q));
  const Mat2 Mm = -Mi;
  auto ok = [n](const Mat2& M) { return 2 * M.m[1] <= n; };
  if (ok(Mi) && ok(Mm)) d.sign = Mm.m < Mi.m ? -1 : 1;
  else d.sign = ok(Mi) ? 1 : -1;
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(std::make_pair(p, n), std::move(d)).first->second;
}

}  // namespace

EndoRecipe quaternion_recipe(std::int64_t p, int n, const Quaternion& x) {
  const RepData& d = rep_data(p, n);
  if (x.p != p) throw std::invalid_argument("torsion_representation: algebra parameter mismatch");
  auto whole = [](const Rational& r) {
    if (boost::multiprecision::denominator(r) != 1) throw std::invalid_argument("torsion_representation: coordinates must be integers");
    return static_cast<std::int64_t>(boost::multiprecision::numerator(r));
  };
  return {AutKind::I, whole(x.a), d.sign * whole(x.b), whole(x.c), d.sign * whole(x.d)};
}

Mat2 torsion_representation(std::int64_t p, int n, const Quaternion& x) {
  const RepData& d = rep_data(p, n);
  if (x.p != p) throw std::invalid_argument("torsion_representation: algebra parameter mismatch");
  // Reduce coordinates mod n first; the map is additive.
  const EndoRecipe r{AutKind::I, integral(x.a, n), d.sign * integral(x.b, n), integral(x.c, n), d.sign * integral(x.d, n)};
  const Point imP = evaluate_recipe(d.curve, r, d.basis.P);
  const Point imQ = evaluate_recipe(d.curve, r, d.basis.Q);
  return matrix_from_images(d.basis, imP, imQ);
}

}  // namespace isodesc
