#include "isodesc/weil.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "isodesc/embedding.hpp"

namespace isodesc {

namespace {

// Running value num/den of a Miller function at one evaluation point.
struct Eval {
  Point R;
  Fe num, den;
};

// Multiply each evaluation by l(R)/v(R) for the step T + U; false on a zero
// factor (evaluation point in the support of the divisor).
bool line_step(const Curve& E, const Point& T, const Point& U, std::vector<Eval>& ev) {
  if (T.inf || U.inf) return true;
  const ExtField f = E.field();
  if (T.x == U.x && !(T.y == U.y)) {
    for (auto& e : ev) {
      const Fe l = e.R.x - T.x;
      if (l.is_zero()) return false;
      e.num *= l;
    }
    return true;
  }
  if (T.x == U.x && T.y.is_zero()) {
    for (auto& e : ev) {
      const Fe l = e.R.x - T.x;
      if (l.is_zero()) return false;
      e.num *= l;
    }
    return true;
  }
  Fe lambda;
  if (T.x == U.x) lambda = (T.x * T.x * f.from_int(3) + E.a()) / (T.y + T.y);
  else lambda = (U.y - T.y) / (U.x - T.x);
  const Fe x3 = lambda * lambda - T.x - U.x;
  for (auto& e : ev) {
    const Fe l = e.R.y - T.y - lambda * (e.R.x - T.x);
    const Fe v = e.R.x - x3;
    if (l.is_zero() || v.is_zero()) return false;
    e.num *= l;
    e.den *= v;
  }
  return true;
}

// f_{n,P} with divisor n(P) - n(O) at each point; nullopt when degenerate.
std::optional<std::vector<Fe>> miller(const Curve& E, const Point& P, int n, const std::vector<Point>& at) {
  const ExtField f = E.field();
  std::vector<Eval> ev;
  for (const auto& R : at) {
    if (R.inf) return std::nullopt;
    ev.push_back({R, f.one(), f.one()});
  }
  int top = 31;
  while (!((n >> top) & 1)) --top;
  Point T = P;
  for (int bit = top - 1; bit >= 0; --bit) {
    for (auto& e : ev) {
      e.num = e.num * e.num;
      e.den = e.den * e.den;
    }
    if (!line_step(E, T, T, ev)) return std::nullopt;
    T = point_double(E, T);
    if ((n >> bit) & 1) {
      if (!line_step(E, T, P, ev)) return std::nullopt;
      T = point_add(E, T, P);
    }
  }
  if (!T.inf) throw std::logic_error("miller: point is not n-torsion");
  std::vector<Fe> out;
  for (const auto& e : ev) out.push_back(e.num / e.den);
  return out;
}

}  // namespace

Fe weil_pairing_value(const Curve& E, int n, const Point& P, const Point& Q) {
  if (n < 1) throw std::invalid_argument("weil_pairing: level must be positive");
  if (static_cast<std::uint64_t>(n) % E.characteristic() == 0) throw std::invalid_argument("weil_pairing: level divisible by the characteristic");
  if (!E.contains(P) || !E.contains(Q)) throw std::invalid_argument("weil_pairing: point not on curve");
  if (!point_mul(E, P, n).inf || !point_mul(E, Q, n).inf) throw std::invalid_argument("weil_pairing: points are not n-torsion");
  const ExtField f = E.field();
  if (P.inf || Q.inf || P == Q || n == 1) return f.one();
  // e(P, Q) = [f_P(Q + S) / f_P(S)] / [f_Q(P - S) / f_Q(-S)] with S the
  // first canonical point giving a nondegenerate evaluation.
  PointSampler sampler(E);
  while (auto S = sampler.next()) {
    const Point QS = point_add(E, Q, *S);
    const Point PS = point_add(E, P, point_neg(*S));
    const Point mS = point_neg(*S);
    auto fp = miller(E, P, n, {QS, *S});
    if (!fp) continue;
    auto fq = miller(E, Q, n, {PS, mS});
    if (!fq) continue;
    return ((*fp)[0] * (*fq)[1]) / ((*fp)[1] * (*fq)[0]);
  }
  // Tiny groups can leave no usable S; the pairing value lies in E's field,
  // so compute over the quadratic extension and descend.
  const int k2 = 2 * f.degree();
  if (k2 <= kMaxExtDegree && checked_pow(f.characteristic(), static_cast<unsigned>(k2), kFieldSizeBits) != 0) {
    const ExtField L = ExtField::make(f.characteristic(), k2);
    const Fe z = weil_pairing_value(E.base_change(L), n, lift_point(P, L), lift_point(Q, L));
    if (auto d = descend(z, f)) return *d;
  }
  throw std::logic_error("weil_pairing: no auxiliary point found");
}

int root_order(const Fe& z, int n) {
  if (!z.pow(static_cast<u128>(n)).is_one()) return 0;
  int best = n;
  for (auto [l, e] : factor(static_cast<u128>(n))) {
    for (int i = 0; i < e; ++i) {
      if (z.pow(static_cast<u128>(best / static_cast<int>(l))).is_one()) best /= static_cast<int>(l);
      else break;
    }
  }
  return best;
}

std::optional<int> mu_log(const Fe& base, const Fe& z, int n) {
  Fe acc = base.field().one();
  for (int k = 0; k < n; ++k) {
    if (acc == z) return k;
    acc *= base;
  }
  return std::nullopt;
}

RootOfUnity weil_pairing(const Curve& E, int n, const Point& P, const Point& Q) {
  const Fe v = weil_pairing_value(E, n, P, Q);
  const int ord = root_order(v, n);
  if (ord == 0) throw std::logic_error("weil_pairing: value is not an n-th root of unity");
  return {v, ord};
}

std::vector<Point> generated_subgroup(const Curve& E, const std::vector<Point>& gens) {
  std::set<Point> seen{Point::identity()};
  std::vector<Point> frontier{Point::identity()};
  while (!frontier.empty()) {
    std::vector<Point> nxt;
    for (const auto& x : frontier) {
      for (const auto& g : gens) {
        const Point y = point_add(E, x, g);
        if (seen.insert(y).second) nxt.push_back(y);
      }
    }
    frontier = std::move(nxt);
  }
  return std::vector<Point>(seen.begin(), seen.end());
}

bool is_maximal_isotropic(const Curve& E, int n, const std::vector<Point>& gens) {
  for (const auto& g : gens)
    if (!E.contains(g) || !point_mul(E, g, n).inf) throw std::invalid_argument("is_maximal_isotropic: generator is not n-torsion");
  if (generated_subgroup(E, gens).size() != static_cast<std::size_t>(n)) return false;
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!weil_pairing_value(E, n, gens[i], gens[j]).is_one()) return false;
  return true;
}

}  // namespace isodesc
