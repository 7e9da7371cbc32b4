// Dense univariate polynomials and reduced rational functions over F_{p^k}.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isodesc/finite_field.hpp"

namespace isodesc {

class Poly {
 public:
  Poly() = default;
  explicit Poly(ExtField f) : f_(f) {}
  Poly(ExtField f, std::vector<Fe> coeffs);

  static Poly constant(const Fe& c);
  static Poly x(ExtField f);
  // x - r
  static Poly linear_root(const Fe& r);

  ExtField field() const { return f_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Fe coeff(int i) const;
  const Fe& lead() const { return c_.back(); }
  const std::vector<Fe>& coeffs() const { return c_; }

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator-() const;
  Poly operator*(const Poly& o) const;
  Poly scale(const Fe& s) const;
  // Exact division; throws std::domain_error if there is a remainder.
  Poly exact_div(const Poly& d) const;

  Poly monic() const;
  Fe eval(const Fe& x) const;
  Poly derivative() const;
  Poly pow(unsigned e) const;
  // this(g(x))
  Poly compose(const Poly& g) const;
  // Coefficientwise x -> x^(p^j).
  Poly frobenius(int j) const;
  Poly powmod(u128 e, const Poly& m) const;

  // Distinct roots lying in the coefficient field, in canonical order.
  std::vector<Fe> roots() const;

  bool operator==(const Poly& o) const;
  std::string to_string() const;

 private:
  void trim();
  ExtField f_;
  std::vector<Fe> c_;
};

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
// Monic gcd (zero polynomial when both inputs are zero).
Poly gcd(const Poly& a, const Poly& b);

// num/den with gcd(num, den) = 1 and den monic.
class RatFn {
 public:
  RatFn() = default;
  RatFn(Poly num, Poly den);
  explicit RatFn(Poly num);

  static RatFn x(ExtField f) { return RatFn(Poly::x(f)); }
  static RatFn constant(const Fe& c) { return RatFn(Poly::constant(c)); }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  ExtField field() const { return num_.field(); }
  bool is_zero() const { return num_.is_zero(); }
  int degree() const { return std::max(num_.degree(), den_.degree()); }

  RatFn operator+(const RatFn& o) const;
  RatFn operator-(const RatFn& o) const;
  RatFn operator-() const;
  RatFn operator*(const RatFn& o) const;
  RatFn operator/(const RatFn& o) const;
  RatFn operator*(const Poly& o) const { return *this * RatFn(o); }

  // this(g(x))
  RatFn compose(const RatFn& g) const;
  RatFn frobenius(int j) const { return RatFn(num_.frobenius(j), den_.frobenius(j)); }

  // nullopt at a pole.
  std::optional<Fe> eval(const Fe& x) const;

  bool operator==(const RatFn& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  Poly num_, den_;
};

}  // namespace isodesc
