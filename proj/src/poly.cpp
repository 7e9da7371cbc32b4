#include "isodesc/poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace isodesc {

Poly::Poly(ExtField f, std::vector<Fe> coeffs) : f_(f), c_(std::move(coeffs)) { trim(); }

Poly Poly::constant(const Fe& c) { return Poly(c.field(), {c}); }

Poly Poly::x(ExtField f) { return Poly(f, {f.zero(), f.one()}); }

Poly Poly::linear_root(const Fe& r) { return Poly(r.field(), {-r, r.field().one()}); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Fe Poly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return f_.zero();
  return c_[static_cast<std::size_t>(i)];
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<Fe> r(std::max(c_.size(), o.c_.size()), f_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return Poly(f_, std::move(r));
}

Poly Poly::operator-(const Poly& o) const {
  std::vector<Fe> r(std::max(c_.size(), o.c_.size()), f_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
  for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return Poly(f_, std::move(r));
}

Poly Poly::operator-() const {
  std::vector<Fe> r = c_;
  for (auto& v : r) v = -v;
  return Poly(f_, std::move(r));
}

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly(f_);
  std::vector<Fe> r(c_.size() + o.c_.size() - 1, f_.zero());
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  }
  return Poly(f_, std::move(r));
}

Poly Poly::scale(const Fe& s) const {
  std::vector<Fe> r = c_;
  for (auto& v : r) v *= s;
  return Poly(f_, std::move(r));
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const ExtField f = b.field();
  if (a.degree() < b.degree()) return {Poly(f), a};
  std::vector<Fe> rem = a.coeffs();
  std::vector<Fe> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), f.zero());
  const Fe il = b.lead().inv();
  const int db = b.degree();
  for (int i = a.degree(); i >= db; --i) {
    const Fe c = rem[static_cast<std::size_t>(i)] * il;
    if (c.is_zero()) continue;
    q[static_cast<std::size_t>(i - db)] = c;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  return {Poly(f, std::move(q)), Poly(f, std::move(rem))};
}

Poly Poly::exact_div(const Poly& d) const {
  auto [q, r] = divmod(*this, d);
  if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
  return q;
}

Poly gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : x.monic();
}

Poly Poly::monic() const {
  if (c_.empty()) return *this;
  return scale(lead().inv());
}

Fe Poly::eval(const Fe& x) const {
  Fe r = f_.zero();
  for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
  return r;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly(f_);
  std::vector<Fe> r(c_.size() - 1, f_.zero());
  for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i].scale(static_cast<std::int64_t>(i));
  return Poly(f_, std::move(r));
}

Poly Poly::pow(unsigned e) const {
  Poly r = constant(f_.one());
  Poly b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

Poly Poly::compose(const Poly& g) const {
  Poly r(f_);
  for (std::size_t i = c_.size(); i-- > 0;) r = r * g + constant(c_[i]);
  return r;
}

Poly Poly::frobenius(int j) const {
  std::vector<Fe> r = c_;
  for (auto& v : r) v = v.frobenius(j);
  return Poly(f_, std::move(r));
}

Poly Poly::powmod(u128 e, const Poly& m) const {
  Poly r = divmod(constant(f_.one()), m).second;
  Poly b = divmod(*this, m).second;
  while (e > 0) {
    if (e & 1) r = divmod(r * b, m).second;
    e >>= 1;
    if (e > 0) b = divmod(b * b, m).second;
  }
  return r;
}

namespace {

void split_roots(const Poly& g, std::vector<Fe>& out) {
  if (g.degree() <= 0) return;
  if (g.degree() == 1) {
    out.push_back(-g.coeff(0) * g.lead().inv());
    return;
  }
  const ExtField f = g.field();
  const u128 q = f.order();
  // Deterministic equal-degree splitting with shifts c in canonical order.
  for (u128 idx = 0; idx < q; ++idx) {
    const Fe c = f.from_index(idx);
    Poly h = Poly(f, {c, f.one()}).powmod((q - 1) / 2, g) - Poly::constant(f.one());
    Poly d = gcd(g, h);
    if (d.degree() > 0 && d.degree() < g.degree()) {
      split_roots(d, out);
      split_roots(g.exact_div(d), out);
      return;
    }
  }
  throw std::logic_error("root splitting failed");
}

}  // namespace

std::vector<Fe> Poly::roots() const {
  if (c_.empty()) throw std::domain_error("roots of the zero polynomial");
  if (degree() == 0) return {};
  const Poly xq = x(f_).powmod(f_.order(), *this);
  Poly g = gcd(*this, xq - x(f_));
  std::vector<Fe> out;
  if (g.degree() > 0 && g.coeff(0).is_zero()) {
    out.push_back(f_.zero());
    g = g.exact_div(x(f_));
  }
  split_roots(g, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool Poly::operator==(const Poly& o) const {
  if (c_.size() != o.c_.size()) return false;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (!(c_[i] == o.c_[i])) return false;
  return true;
}

std::string Poly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (c_[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << c_[i].to_string();
    if (i >= 1) os << "*x";
    if (i >= 2) os << '^' << i;
  }
  return os.str();
}

RatFn::RatFn(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.field().one())) {}

RatFn::RatFn(Poly num, Poly den) {
  if (den.is_zero()) throw std::domain_error("rational function with zero denominator");
  const ExtField f = den.field();
  if (num.is_zero()) {
    num_ = Poly(f);
    den_ = Poly::constant(f.one());
    return;
  }
  Poly g = gcd(num, den);
  if (g.degree() > 0) {
    num = num.exact_div(g);
    den = den.exact_div(g);
  }
  const Fe il = den.lead().inv();
  num_ = num.scale(il);
  den_ = den.scale(il);
}

RatFn RatFn::operator+(const RatFn& o) const {
  if (den_ == o.den_) return RatFn(num_ + o.num_, den_);
  return RatFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RatFn RatFn::operator-(const RatFn& o) const {
  if (den_ == o.den_) return RatFn(num_ - o.num_, den_);
  return RatFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RatFn RatFn::operator-() const { return RatFn(-num_, den_); }

RatFn RatFn::operator*(const RatFn& o) const {
  // Cross-cancel before multiplying to keep degrees down.
  Poly g1 = gcd(num_, o.den_);
  Poly g2 = gcd(o.num_, den_);
  Poly a = g1.degree() > 0 ? num_.exact_div(g1) : num_;
  Poly d2 = g1.degree() > 0 ? o.den_.exact_div(g1) : o.den_;
  Poly b = g2.degree() > 0 ? o.num_.exact_div(g2) : o.num_;
  Poly d1 = g2.degree() > 0 ? den_.exact_div(g2) : den_;
  if (a.is_zero() || b.is_zero()) return RatFn(Poly(field()));
  return RatFn(a * b, d1 * d2);
}

RatFn RatFn::operator/(const RatFn& o) const {
  if (o.is_zero()) throw std::domain_error("rational function division by zero");
  return *this * RatFn(o.den_, o.num_);
}

RatFn RatFn::compose(const RatFn& g) const {
  const int d = degree();
  const ExtField f = field();
  const Poly& A = g.num();
  const Poly& B = g.den();
  std::vector<Poly> apow{Poly::constant(f.one())}, bpow{Poly::constant(f.one())};
  for (int i = 1; i <= d; ++i) {
    apow.push_back(apow.back() * A);
    bpow.push_back(bpow.back() * B);
  }
  auto homog = [&](const Poly& P) {
    Poly r(f);
    for (int i = 0; i <= P.degree(); ++i) {
      const Fe c = P.coeff(i);
      if (c.is_zero()) continue;
      r = r + (apow[static_cast<std::size_t>(i)] * bpow[static_cast<std::size_t>(d - i)]).scale(c);
    }
    return r;
  };
  return RatFn(homog(num_), homog(den_));
}

std::optional<Fe> RatFn::eval(const Fe& x) const {
  const Fe d = den_.eval(x);
  if (d.is_zero()) return std::nullopt;
  return num_.eval(x) / d;
}

}  // namespace isodesc
