#include "isodesc/isogeny.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <tuple>

#include "isodesc/embedding.hpp"
#include "isodesc/weil.hpp"

namespace isodesc {

std::string EndoRecipe::to_string() const {
  std::ostringstream os;
  const char* gs = g == AutKind::I ? "i" : g == AutKind::Omega ? "w" : "g";
  os << a << (b < 0 ? " - " : " + ") << (b < 0 ? -b : b) << "*" << gs << (c < 0 ? " - " : " + ") << (c < 0 ? -c : c) << "*pi"
     << (d < 0 ? " - " : " + ") << (d < 0 ? -d : d) << "*" << gs << "pi";
  return os.str();
}

namespace {

Poly lift_poly(const Poly& P, ExtField L) {
  std::vector<Fe> c;
  c.reserve(P.coeffs().size());
  for (const auto& v : P.coeffs()) c.push_back(lift(v, L));
  return Poly(L, std::move(c));
}

RatFn lift_ratfn(const RatFn& R, ExtField L) {
  if (R.field() == L) return R;
  return RatFn(lift_poly(R.num(), L), lift_poly(R.den(), L));
}

bool poly_fixed(const Poly& P, int j) {
  for (const auto& c : P.coeffs())
    if (!c.in_subfield(j)) return false;
  return true;
}

// Common working field of two isogenies, with both base-changed to it.
std::pair<Isogeny, Isogeny> align(const Isogeny& f, const Isogeny& g) {
  if (f.field() == g.field()) return {f, g};
  const ExtField L = common_field(f.field(), g.field());
  return {f.base_change(L), g.base_change(L)};
}

Isogeny from_maps(const Curve& dom, const Curve& cod, RatFn X, RatFn Y) {
  Isogeny r;
  r.domain = dom;
  r.codomain = cod;
  r.degree = static_cast<u128>(X.degree());
  r.X = std::move(X);
  r.Y = std::move(Y);
  return r;
}

}  // namespace

Isogeny Isogeny::base_change(ExtField L) const {
  if (L == field()) return *this;
  Isogeny r;
  r.domain = domain.base_change(L);
  r.codomain = codomain.base_change(L);
  r.X = lift_ratfn(X, L);
  r.Y = lift_ratfn(Y, L);
  r.degree = degree;
  for (const auto& K : kernel) r.kernel.push_back(K.x.field() == L ? K : lift_point(K, L));
  r.recipe = recipe;
  return r;
}

Isogeny identity_isogeny(const Curve& E) {
  const ExtField f = E.field();
  return from_maps(E, E, RatFn::x(f), RatFn::constant(f.one()));
}

Isogeny velu(const Curve& E, const Point& K) {
  if (K.inf) return identity_isogeny(E);
  const ExtField W = K.x.field();
  if (W.degree() % E.field().degree() != 0) throw std::invalid_argument("velu: kernel point outside an extension of the curve's field");
  const Curve EW = E.base_change(W);
  if (!EW.contains(K)) throw std::invalid_argument("velu: kernel point not on the curve");
  std::vector<Point> mult{K};
  while (!mult.back().inf) {
    if (mult.size() > 100000) throw std::invalid_argument("velu: kernel order too large");
    mult.push_back(point_add(EW, mult.back(), K));
  }
  const std::uint64_t ell = mult.size();
  if (!is_prime(ell)) throw std::invalid_argument("velu: kernel order must be prime");
  if (ell == E.characteristic()) throw std::invalid_argument("velu: kernel order divisible by the characteristic");

  std::vector<Point> reps;
  if (ell == 2) reps.push_back(K);
  else
    for (std::uint64_t m = 0; m < (ell - 1) / 2; ++m) reps.push_back(mult[m]);

  Fe v = W.zero(), w = W.zero();
  RatFn X = RatFn::x(W);
  RatFn Y = RatFn::constant(W.one());
  for (const auto& Q : reps) {
    const Fe gx = Q.x * Q.x * W.from_int(3) + EW.a();
    Fe vQ, uQ;
    if (Q.y.is_zero()) {
      vQ = gx;
      uQ = W.zero();
    } else {
      vQ = gx + gx;
      uQ = Q.y * Q.y * W.from_int(4);
    }
    v += vQ;
    w += uQ + Q.x * vQ;
    const Poly t = Poly::linear_root(Q.x);
    const Poly t2 = t * t;
    const Poly t3 = t2 * t;
    X = X + RatFn(Poly::constant(vQ), t) + RatFn(Poly::constant(uQ), t2);
    Y = Y - RatFn(Poly::constant(vQ), t2) - RatFn(Poly::constant(uQ + uQ), t3);
  }
  const Curve cod(EW.a() - v.scale(5), EW.b() - w.scale(7));
  Isogeny r = from_maps(EW, cod, std::move(X), std::move(Y));
  if (r.degree != ell) throw std::logic_error("velu: degree mismatch");
  r.kernel.push_back(K);
  return r;
}

Isogeny scaling_isomorphism(const Curve& E, const Fe& u) {
  const ExtField W = u.field();
  const Curve EW = E.base_change(W);
  const Fe u2 = u * u;
  const Curve cod(EW.a() * u2 * u2, EW.b() * u2 * u2 * u2);
  return from_maps(EW, cod, RatFn(Poly(W, {W.zero(), u2})), RatFn::constant(u2 * u));
}

Point evaluate(const Isogeny& f, const Point& P) {
  if (P.inf) return P;
  if (!(P.x.field() == f.field())) {
    if (P.x.field().degree() % f.field().degree() != 0) throw std::invalid_argument("evaluate: point field does not contain the map's field");
    return evaluate(f.base_change(P.x.field()), P);
  }
  if (!f.domain.contains(P)) throw std::invalid_argument("evaluate: point not on the domain");
  const Fe dx = f.X.den().eval(P.x);
  if (dx.is_zero()) return Point::identity();
  const Fe X = f.X.num().eval(P.x) / dx;
  const Fe dy = f.Y.den().eval(P.x);
  if (dy.is_zero()) throw std::domain_error("evaluate: denominator vanishes off the kernel");
  const Point R = Point::affine(X, P.y * f.Y.num().eval(P.x) / dy);
  if (!f.codomain.contains(R)) throw std::logic_error("evaluate: image not on the codomain");
  return R;
}

Isogeny compose(const Isogeny& g0, const Isogeny& f0) {
  auto [g, f] = align(g0, f0);
  if (!(f.codomain == g.domain)) throw std::invalid_argument("compose: codomain and domain differ");
  Isogeny r = from_maps(f.domain, g.codomain, g.X.compose(f.X), g.Y.compose(f.X) * f.Y);
  if (r.degree != f.degree * g.degree) throw std::logic_error("compose: degree is not multiplicative");
  return r;
}

Isogeny negate_map(const Isogeny& f) {
  Isogeny r = f;
  r.Y = -f.Y;
  r.kernel.clear();
  r.recipe.reset();
  return r;
}

Isogeny add_maps(const Isogeny& f0, const Isogeny& g0) {
  auto [f, g] = align(f0, g0);
  if (!(f.domain == g.domain) || !(f.codomain == g.codomain)) throw std::invalid_argument("add_maps: maps between different curves");
  const ExtField W = f.field();
  const Curve& E = f.domain;
  const RatFn fx = RatFn(Poly(W, {E.b(), E.a(), W.zero(), W.one()}));
  const Fe A = f.codomain.a();
  RatFn X3, Y3;
  if (f.X == g.X) {
    if (f.Y == -g.Y) throw std::domain_error("add_maps: sum is the zero map");
    if (!(f.Y == g.Y)) throw std::logic_error("add_maps: inconsistent maps");
    // Doubling: lambda = y (3X^2 + A) / (2 f Y).
    const RatFn num = f.X * f.X * RatFn::constant(W.from_int(3)) + RatFn::constant(A);
    const RatFn den = fx * f.Y * RatFn::constant(W.from_int(2));
    const RatFn q = num / den;
    X3 = q * q * fx - f.X - f.X;
    Y3 = q * (f.X - X3) - f.Y;
  } else {
    const RatFn q = (g.Y - f.Y) / (g.X - f.X);
    X3 = q * q * fx - f.X - g.X;
    Y3 = q * (f.X - X3) - f.Y;
  }
  return from_maps(f.domain, f.codomain, std::move(X3), std::move(Y3));
}

Isogeny scalar_map(const Isogeny& f, std::int64_t k) {
  if (k == 0) throw std::domain_error("scalar_map: zero multiple");
  if (k < 0) return negate_map(scalar_map(f, -k));
  std::optional<Isogeny> acc;
  Isogeny base = f;
  while (k > 0) {
    if (k & 1) acc = acc ? add_maps(*acc, base) : base;
    k >>= 1;
    if (k > 0) base = add_maps(base, base);
  }
  acc->kernel.clear();
  acc->recipe.reset();
  return *acc;
}

Fe automorphism_constant(AutKind g, ExtField L) {
  const std::uint64_t p = L.characteristic();
  const ExtField F2 = ExtField::make(p, 2);
  Fe c;
  if (g == AutKind::I) {
    c = *(-F2.one()).sqrt();
  } else if (g == AutKind::Omega) {
    // Roots of x^2 + x + 1 are (-1 +- sqrt(-3)) / 2.
    const Fe r = *F2.from_int(-3).sqrt();
    const Fe w1 = (r - F2.one()) / F2.from_int(2);
    const Fe w2 = (-r - F2.one()) / F2.from_int(2);
    c = std::min(w1, w2);
  } else {
    throw std::invalid_argument("automorphism_constant: no automorphism selected");
  }
  if (L.degree() % 2 == 0) return lift(c, L);
  const auto d = descend(c, ExtField::make(p, 1));
  if (!d) throw std::invalid_argument("automorphism_constant: field does not contain the constant");
  return lift(*d, L);
}

namespace {

ExtField automorphism_field(const Curve& E, AutKind g) {
  const ExtField F = E.field();
  const std::uint64_t p = F.characteristic();
  if (F.degree() % 2 == 0) return F;
  const Fe c = automorphism_constant(g, ExtField::make(p, 2));
  if (descend(c, ExtField::make(p, 1))) return F;
  return common_field(F, ExtField::make(p, 2));
}

void check_automorphism(const Curve& E, AutKind g) {
  if (g == AutKind::I && !E.b().is_zero()) throw std::invalid_argument("recipe uses i on a curve without the order-4 automorphism");
  if (g == AutKind::Omega && !E.a().is_zero()) throw std::invalid_argument("recipe uses omega on a curve without the order-3 automorphism");
}

}  // namespace

Isogeny automorphism(const Curve& E, AutKind g) {
  check_automorphism(E, g);
  const ExtField W = automorphism_field(E, g);
  const Curve EW = E.base_change(W);
  const Fe c = automorphism_constant(g, W);
  if (g == AutKind::I) return from_maps(EW, EW, RatFn(Poly(W, {W.zero(), -W.one()})), RatFn::constant(c));
  return from_maps(EW, EW, RatFn(Poly(W, {W.zero(), c})), RatFn::constant(W.one()));
}

Isogeny automorphism_power(const Curve& E, AutKind g, int power, bool negate) {
  Isogeny r = identity_isogeny(E);
  if (power > 0) {
    const Isogeny a = automorphism(E, g);
    r = a;
    for (int i = 1; i < power; ++i) r = compose(a, r);
  }
  return negate ? negate_map(r) : r;
}

Isogeny frobenius_map(const Curve& E) {
  if (!E.rational_over(1)) throw std::invalid_argument("frobenius_map: curve not defined over F_p");
  const ExtField W = E.field();
  const std::uint64_t p = E.characteristic();
  std::vector<Fe> xp(static_cast<std::size_t>(p) + 1, W.zero());
  xp.back() = W.one();
  const Poly fx(W, {E.b(), E.a(), W.zero(), W.one()});
  return from_maps(E, E, RatFn(Poly(W, std::move(xp))), RatFn(fx.pow(static_cast<unsigned>((p - 1) / 2))));
}

Isogeny endo_from_recipe(const Curve& E, const EndoRecipe& r) {
  if (r.g == AutKind::None && (r.b != 0 || r.d != 0)) throw std::invalid_argument("recipe references an automorphism but none is selected");
  if (r.g != AutKind::None) check_automorphism(E, r.g);
  if ((r.c != 0 || r.d != 0) && !E.rational_over(1)) throw std::invalid_argument("recipe uses the Frobenius on a curve not defined over F_p");
  if (r.a == 0 && r.b == 0 && r.c == 0 && r.d == 0) throw std::invalid_argument("zero recipe");
  const ExtField W = r.g != AutKind::None && (r.b != 0 || r.d != 0) ? automorphism_field(E, r.g) : E.field();
  const Curve EW = E.base_change(W);
  std::optional<Isogeny> acc;
  auto add_term = [&](std::int64_t k, const Isogeny& m) {
    if (k == 0) return;
    Isogeny t = scalar_map(m, k);
    acc = acc ? add_maps(*acc, t) : t;
  };
  add_term(r.a, identity_isogeny(EW));
  if (r.b != 0) add_term(r.b, automorphism(EW, r.g));
  if (r.c != 0) add_term(r.c, frobenius_map(EW));
  if (r.d != 0) add_term(r.d, compose(automorphism(EW, r.g), frobenius_map(EW)));
  acc->kernel.clear();
  acc->recipe = r;
  return *acc;
}

Point evaluate_recipe(const Curve& E, const EndoRecipe& r, const Point& P) {
  if (P.inf) return P;
  const ExtField L = P.x.field();
  const Curve EL = E.base_change(L);
  if (!EL.contains(P)) throw std::invalid_argument("evaluate_recipe: point not on the curve");
  auto g = [&](const Point& X) {
    if (X.inf) return X;
    const Fe c = automorphism_constant(r.g, L);
    if (r.g == AutKind::I) return Point::affine(-X.x, c * X.y);
    return Point::affine(c * X.x, X.y);
  };
  const std::uint64_t p = E.characteristic();
  (void)p;
  Point acc = point_mul(EL, P, r.a);
  if (r.b != 0) acc = point_add(EL, acc, point_mul(EL, g(P), r.b));
  if (r.c != 0 || r.d != 0) {
    const Point fp = point_frobenius(P, 1);
    if (r.c != 0) acc = point_add(EL, acc, point_mul(EL, fp, r.c));
    if (r.d != 0) acc = point_add(EL, acc, point_mul(EL, g(fp), r.d));
  }
  return acc;
}

bool coeff_field_test(const Isogeny& f, int j) {
  for (const Poly* P : {&f.X.num(), &f.X.den(), &f.Y.num(), &f.Y.den()})
    if (!poly_fixed(*P, j)) return false;
  return f.domain.rational_over(j) && f.codomain.rational_over(j);
}

namespace {

u128 gcd_u(u128 a, u128 b) { return gcd(a, b); }

const std::vector<std::pair<u128, int>>& cached_factor(u128 N) {
  static std::mutex mu;
  static std::map<u128, std::vector<std::pair<u128, int>>> memo;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(N);
    if (it != memo.end()) return it->second;
  }
  auto fac = factor(N);
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(N, std::move(fac)).first->second;
}

}  // namespace

CommutationResult commutation_test(const Isogeny& f, int j, int probe_n) {
  CommutationResult res;
  if (j < 1) throw std::invalid_argument("commutation_test: subfield degree must be positive");
  if (!f.domain.rational_over(j) || !f.codomain.rational_over(j)) {
    res.status = CommutationStatus::NotApplicable;
    return res;
  }
  const ExtField W = f.field();
  const std::uint64_t p = W.characteristic();
  const int w = W.degree();
  const u128 pj = ipow(p, static_cast<unsigned>(j));
  const u128 threshold = 4 * f.degree * pj;

  bool differs = false;
  u128 bound = 0;
  auto check = [&](const Isogeny& g, const Point& P) {
    const Point lhs = evaluate(g, point_frobenius(P, j));
    const Point rhs = point_frobenius(evaluate(g, P), j);
    if (!(lhs == rhs)) {
      differs = true;
      res.witnesses.push_back(P);
      return false;
    }
    return true;
  };

  // Torsion basis part.
  int n = probe_n;
  int K = 0;
  if (n == 0) {
    for (int cand = 5; cand <= 48; ++cand) {
      if (gcd_u(static_cast<u128>(cand), static_cast<u128>(p) * f.degree) != 1) continue;
      const auto k = torsion_field_degree(f.domain, cand);
      if (k && (K == 0 || *k < K)) {
        K = *k;
        n = cand;
      }
    }
  } else {
    if (n < 2 || gcd_u(static_cast<u128>(n), static_cast<u128>(p) * f.degree) != 1)
      throw std::invalid_argument("commutation_test: probe level must be coprime to p deg(f)");
    const auto k = torsion_field_degree(f.domain, n);
    if (!k) throw std::out_of_range("commutation_test: torsion field of the probe level is too large");
    K = *k;
  }
  if (n != 0) {
    const ExtField L = ExtField::make(p, K * w);
    TorsionBasis B = torsion_basis_over(f.domain, n, L);
    const Isogeny fL = f.base_change(L);
    bool ok = check(fL, B.P);
    ok = check(fL, B.Q) && ok;
    if (ok) bound = static_cast<u128>(n) * static_cast<u128>(n);
    res.probe_n = n;
    res.basis_degree = L.degree();
    res.basis = std::move(B);
  }

  // Pseudo-random points over F_{p^lcm(w, 6)}.
  const int rdeg = static_cast<int>(lcm(static_cast<std::int64_t>(w), 6));
  if (rdeg <= kMaxExtDegree && checked_pow(p, static_cast<unsigned>(rdeg), kFieldSizeBits) != 0) {
    const ExtField R = ExtField::make(p, rdeg);
    const Curve ER = f.domain.base_change(R);
    const Isogeny fR = f.base_change(R);
    const u128 N = count_over_extension(f.domain, rdeg / w);
    const bool can_factor = (N >> 64) == 0;
    std::mt19937_64 rng(0x5bd1e995u + static_cast<unsigned>(j));
    std::vector<std::pair<Point, u128>> agreed;
    int got = 0;
    for (int attempt = 0; got < 32 && attempt < 4096; ++attempt) {
      const Fe x = R.from_index(static_cast<u128>(rng()) % R.order());
      const auto y = ER.rhs(x).sqrt();
      if (!y) continue;
      ++got;
      const Point P = Point::affine(x, *y);
      if (check(fR, P) && can_factor && bound <= threshold) {
        const u128 ord = point_order(ER, P, N, cached_factor(N));
        if (ord > bound) bound = ord;
        agreed.emplace_back(P, ord);
      }
    }
    // Single orders can stay small when the group is far from cyclic; a pair
    // R1, R2 with e_m(R1, R2) of order k spans at least ord(R1) * k points.
    if (!differs && bound <= threshold && !agreed.empty()) {
      const auto top = std::max_element(agreed.begin(), agreed.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
      // The p-parts are stripped before pairing; they only add to ord(R1).
      auto prime_to_p = [&](const Point& P, u128 ord) {
        Point Q = P;
        while (ord % p == 0) {
          ord /= p;
          Q = point_mul(ER, Q, static_cast<i128>(p));
        }
        return std::pair{Q, ord};
      };
      const auto [R1, o1] = prime_to_p(top->first, top->second);
      for (const auto& [R2full, o2full] : agreed) {
        if (bound > threshold) break;
        const auto [R2, o2] = prime_to_p(R2full, o2full);
        const u128 m = o1 / gcd(o1, o2) * o2;
        if (m < 2 || m >= (u128{1} << 31)) continue;
        const int mi = static_cast<int>(m);
        const int k = root_order(weil_pairing_value(ER, mi, R1, R2), mi);
        if (top->second * static_cast<u128>(k) > bound) bound = top->second * static_cast<u128>(k);
      }
    }
  }

  res.certificate = bound;
  if (differs) {
    res.status = CommutationStatus::Differs;
    return res;
  }
  if (bound <= threshold) throw std::runtime_error("commutation_test: checked points do not certify agreement");
  res.status = CommutationStatus::Commutes;
  return res;
}

FieldOfDefinitionReport field_of_definition(const Isogeny& f, int j) {
  FieldOfDefinitionReport rep;
  rep.j = j;
  rep.coeff_test = coeff_field_test(f, j);
  const CommutationResult c = commutation_test(f, j);
  rep.applicable = c.status != CommutationStatus::NotApplicable;
  rep.commutation_test = c.value();
  for (const auto& w : c.witnesses) rep.witnesses.push_back(w.to_string());
  if (rep.coeff_test != rep.commutation_test) {
    std::ostringstream os;
    os << "field-of-definition oracles disagree at j = " << j << " for a map of degree " << to_string(f.degree) << " on " << f.domain.to_string();
    throw OracleDisagreement(os.str());
  }
  return rep;
}

PairingAxiomReport pairing_axiom_suite(const TorsionBasis& B, const std::vector<Isogeny>& maps) {
  PairingAxiomReport rep;
  rep.n = B.n;
  const Curve& E = B.curve;
  const ExtField L = E.field();
  const int n = B.n;
  if (root_order(B.zeta, n) != n) {
    rep.nondegeneracy = false;
    rep.failures.push_back("basis pairing does not have exact order n");
  }
  const Curve Es = E.frobenius_twist(1);
  const Point PQ = point_add(E, B.P, B.Q);
  const std::vector<std::pair<Point, Point>> pairs{{B.P, B.Q}, {B.Q, B.P}, {PQ, B.Q}, {point_double(E, B.P), PQ}};
  for (const auto& [X, Y] : pairs) {
    const Fe lhs = weil_pairing_value(E, n, X, Y).frobenius(1);
    const Fe rhs = weil_pairing_value(Es, n, point_frobenius(X, 1), point_frobenius(Y, 1));
    if (!(lhs == rhs)) {
      rep.equivariance = false;
      rep.failures.push_back("Frobenius equivariance fails at " + X.to_string());
    }
  }
  for (const auto& f : maps) {
    if (L.degree() % f.field().degree() != 0) throw std::invalid_argument("pairing_axiom_suite: basis field does not contain the map's field");
    const Isogeny fL = f.base_change(L);
    if (!(fL.domain == E)) throw std::invalid_argument("pairing_axiom_suite: map domain differs from the basis curve");
    const Fe lhs = weil_pairing_value(fL.codomain, n, evaluate(fL, B.P), evaluate(fL, B.Q));
    const Fe rhs = B.zeta.pow(f.degree);
    if (!(lhs == rhs)) {
      rep.compatibility = false;
      rep.failures.push_back("degree compatibility fails for a map of degree " + to_string(f.degree));
    }
  }
  return rep;
}

}  // namespace isodesc
