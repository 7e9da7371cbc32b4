#include "isodesc/curve.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "isodesc/embedding.hpp"
#include "isodesc/weil.hpp"

namespace isodesc {

bool Point::operator==(const Point& o) const {
  if (inf || o.inf) return inf == o.inf;
  return x == o.x && y == o.y;
}

bool Point::operator<(const Point& o) const {
  if (inf || o.inf) return inf && !o.inf;
  if (!(x == o.x)) return x < o.x;
  return y < o.y;
}

std::string Point::to_string() const {
  if (inf) return "O";
  return "(" + x.to_string() + ", " + y.to_string() + ")";
}

Curve::Curve(Fe a, Fe b) : f_(a.field()), a_(a), b_(b) {
  if (!(b.field() == f_)) throw std::invalid_argument("curve coefficients from different fields");
  const Fe disc = a * a * a * f_.from_int(4) + b * b * f_.from_int(27);
  if (disc.is_zero()) throw std::invalid_argument("singular curve");
}

Curve Curve::make(std::uint64_t p, int k, std::int64_t a, std::int64_t b) {
  if (p <= 3) throw std::invalid_argument("curves need characteristic at least 5");
  const ExtField f = ExtField::make(p, k);
  return Curve(f.from_int(a), f.from_int(b));
}

bool Curve::contains(const Point& P) const {
  if (P.inf) return true;
  if (!(P.x.field() == f_) || !(P.y.field() == f_)) return false;
  return P.y * P.y == rhs(P.x);
}

Curve Curve::base_change(ExtField L) const {
  if (L == f_) return *this;
  return Curve(lift(a_, L), lift(b_, L));
}

bool Curve::rational_over(int j) const { return a_.in_subfield(j) && b_.in_subfield(j); }

Curve Curve::frobenius_twist(int j) const { return Curve(a_.frobenius(j), b_.frobenius(j)); }

int Curve::definition_degree() const {
  const int k = f_.degree();
  for (int d = 1; d <= k; ++d)
    if (k % d == 0 && rational_over(d)) return d;
  return k;
}

Fe Curve::j_invariant() const {
  const Fe a3 = a_ * a_ * a_ * f_.from_int(4);
  return a3 * f_.from_int(1728) / (a3 + b_ * b_ * f_.from_int(27));
}

std::string Curve::to_string() const {
  std::ostringstream os;
  os << "y^2 = x^3 + " << a_.to_string() << "*x + " << b_.to_string() << " over F_" << f_.characteristic();
  if (f_.degree() > 1) os << '^' << f_.degree();
  return os.str();
}

Point point_neg(const Point& P) {
  if (P.inf) return P;
  return Point::affine(P.x, -P.y);
}

Point point_double(const Curve& E, const Point& P) {
  if (P.inf || P.y.is_zero()) return Point::identity();
  const ExtField f = E.field();
  const Fe l = (P.x * P.x * f.from_int(3) + E.a()) / (P.y + P.y);
  const Fe x3 = l * l - P.x - P.x;
  return Point::affine(x3, l * (P.x - x3) - P.y);
}

Point point_add(const Curve& E, const Point& P, const Point& Q) {
  if (P.inf) return Q;
  if (Q.inf) return P;
  if (!(P.x.field() == E.field()) || !(Q.x.field() == E.field())) throw std::invalid_argument("point_add: points not on this curve's field");
  if (P.x == Q.x) {
    if (P.y == Q.y) return point_double(E, P);
    return Point::identity();
  }
  const Fe l = (Q.y - P.y) / (Q.x - P.x);
  const Fe x3 = l * l - P.x - Q.x;
  return Point::affine(x3, l * (P.x - x3) - P.y);
}

Point point_mul(const Curve& E, const Point& P, i128 s) {
  if (s < 0) return point_mul(E, point_neg(P), -s);
  u128 k = static_cast<u128>(s);
  Point r = Point::identity();
  Point b = P;
  while (k > 0) {
    if (k & 1) r = point_add(E, r, b);
    k >>= 1;
    if (k > 0) b = point_double(E, b);
  }
  return r;
}

namespace {

Point mul_u(const Curve& E, const Point& P, u128 k) {
  Point r = Point::identity();
  Point b = P;
  while (k > 0) {
    if (k & 1) r = point_add(E, r, b);
    k >>= 1;
    if (k > 0) b = point_double(E, b);
  }
  return r;
}

}  // namespace

Point point_frobenius(const Point& P, int j) {
  if (P.inf) return P;
  return Point::affine(P.x.frobenius(j), P.y.frobenius(j));
}

Point lift_point(const Point& P, ExtField L) {
  if (P.inf) return P;
  return Point::affine(lift(P.x, L), lift(P.y, L));
}

u128 point_order(const Curve& E, const Point& P, u128 multiple, const std::vector<std::pair<u128, int>>& fac) {
  if (!mul_u(E, P, multiple).inf) throw std::invalid_argument("point_order: not a multiple of the order");
  u128 ord = multiple;
  for (auto [l, e] : fac) {
    for (int i = 0; i < e; ++i) {
      if (mul_u(E, P, ord / l).inf) ord /= l;
      else break;
    }
  }
  return ord;
}

u128 point_order(const Curve& E, const Point& P, u128 multiple) { return point_order(E, P, multiple, factor(multiple)); }

namespace {

// Quadratic character tables, one per field, for exhaustive counting.
std::shared_ptr<const std::vector<std::uint8_t>> square_table(ExtField f) {
  static std::mutex mu;
  static std::map<const void*, std::shared_ptr<const std::vector<std::uint8_t>>> tables;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(f.data());
    if (it != tables.end()) return it->second;
  }
  const u128 q = f.order();
  auto t = std::make_shared<std::vector<std::uint8_t>>(static_cast<std::size_t>(q), 0);
  for (u128 i = 1; i < q; ++i) {
    const Fe y = f.from_index(i);
    (*t)[static_cast<std::size_t>((y * y).index())] = 1;
  }
  std::lock_guard<std::mutex> lock(mu);
  return tables.emplace(f.data(), std::move(t)).first->second;
}

using CurveKey = std::tuple<const void*, u128, u128>;

CurveKey key_of(const Curve& E) { return {E.field().data(), E.a().index(), E.b().index()}; }

}  // namespace

u128 count_points(const Curve& E) {
  const u128 q = E.q();
  if (q > kExhaustiveCountLimit) throw std::out_of_range("count_points: field too large for exhaustive counting");
  static std::mutex mu;
  static std::map<CurveKey, u128> memo;
  const CurveKey key = key_of(E);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  const auto table = square_table(E.field());
  const ExtField f = E.field();
  u128 n = 1;
  for (u128 i = 0; i < q; ++i) {
    const Fe r = E.rhs(f.from_index(i));
    if (r.is_zero()) n += 1;
    else if ((*table)[static_cast<std::size_t>(r.index())]) n += 2;
  }
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, n);
  return n;
}

i128 frobenius_trace(const Curve& E) { return static_cast<i128>(E.q()) + 1 - static_cast<i128>(count_points(E)); }

i128 trace_over_extension(i128 t, u128 q, int m) {
  if (m < 0) throw std::invalid_argument("trace_over_extension: negative degree");
  if (m == 0) return 2;
  i128 prev = 2, cur = t;
  const i128 qq = static_cast<i128>(q);
  for (int j = 2; j <= m; ++j) {
    const i128 nxt = t * cur - qq * prev;
    prev = cur;
    cur = nxt;
  }
  return cur;
}

u128 count_over_extension(const Curve& E, int m) {
  const u128 qm = checked_pow(E.q(), static_cast<unsigned>(m), kFieldSizeBits);
  if (qm == 0) throw std::out_of_range("count_over_extension: field too large");
  return static_cast<u128>(static_cast<i128>(qm) + 1 - trace_over_extension(frobenius_trace(E), E.q(), m));
}

bool is_supersingular(const Curve& E) {
  const i128 t = frobenius_trace(E);
  return t % static_cast<i128>(E.characteristic()) == 0;
}

std::optional<Point> PointSampler::next() {
  const ExtField f = E_.field();
  while (idx_ < f.order()) {
    const Fe x = f.from_index(idx_++);
    const auto y = E_.rhs(x).sqrt();
    if (y) return Point::affine(x, *y);
  }
  return std::nullopt;
}

namespace {

int ell_exponent(const Curve& E, Point S, u128 ell) {
  int f = 0;
  while (!S.inf) {
    S = mul_u(E, S, ell);
    ++f;
  }
  return f;
}

// K with T = K * S1, where S1 has exact order ell^e1.
std::optional<u128> ell_dlog(const Curve& E, const Point& T, const Point& S1, int e1, u128 ell) {
  const int f = ell_exponent(E, T, ell);
  if (f > e1) return std::nullopt;
  if (f == 0) return 0;
  if (ell > (1u << 24)) throw std::out_of_range("ell_dlog: prime too large for digit search");
  const Point B = mul_u(E, S1, ipow(ell, static_cast<unsigned>(e1 - f)));
  const Point gamma = mul_u(E, B, ipow(ell, static_cast<unsigned>(f - 1)));
  u128 k = 0;
  for (int i = 0; i < f; ++i) {
    const Point H = mul_u(E, point_add(E, T, point_neg(mul_u(E, B, k))), ipow(ell, static_cast<unsigned>(f - 1 - i)));
    Point acc = Point::identity();
    bool found = false;
    for (u128 d = 0; d < ell; ++d) {
      if (acc == H) {
        k += d * ipow(ell, static_cast<unsigned>(i));
        found = true;
        break;
      }
      acc = point_add(E, acc, gamma);
    }
    if (!found) return std::nullopt;
  }
  return k * ipow(ell, static_cast<unsigned>(e1 - f));
}

// Smallest r with ell^r S in <S1>, and S minus the matching multiple of S1.
std::pair<int, Point> reduce_against(const Curve& E, const Point& S, const Point& S1, int e1, u128 ell) {
  Point T = S;
  u128 lr = 1;
  for (int r = 0;; ++r) {
    if (auto k = ell_dlog(E, T, S1, e1, ell)) {
      if (*k % lr != 0) throw std::logic_error("primary_part: divisibility violated");
      return {r, point_add(E, S, point_neg(mul_u(E, S1, *k / lr)))};
    }
    T = mul_u(E, T, ell);
    lr *= ell;
  }
}

}  // namespace

PrimaryPart primary_part(const Curve& E, u128 ell, u128 order) {
  PrimaryPart pp;
  pp.ell = ell;
  int e = 0;
  u128 cof = order;
  while (cof % ell == 0) {
    cof /= ell;
    ++e;
  }
  if (e == 0) return pp;
  PointSampler sampler(E);
  Point S1, G2;
  int e1 = 0, r = 0;
  while (e1 + r < e) {
    auto R = sampler.next();
    if (!R) throw std::logic_error("primary_part: ran out of sample points");
    const Point S = mul_u(E, *R, cof);
    const int f = ell_exponent(E, S, ell);
    if (f > e1) {
      const Point old1 = S1, old2 = G2;
      S1 = S;
      e1 = f;
      G2 = Point::identity();
      r = 0;
      for (const Point& c : {old1, old2}) {
        auto [rc, gc] = reduce_against(E, c, S1, e1, ell);
        if (rc > r) {
          r = rc;
          G2 = gc;
        }
      }
    } else {
      auto [rs, gs] = reduce_against(E, S, S1, e1, ell);
      if (rs > r) {
        r = rs;
        G2 = gs;
      }
    }
  }
  if (e1 + r != e) throw std::logic_error("primary_part: certificate mismatch");
  pp.e1 = e1;
  pp.e2 = r;
  pp.g1 = S1;
  pp.g2 = G2;
  return pp;
}

GroupStructure group_structure(const Curve& E) {
  const u128 N = count_points(E);
  GroupStructure gs;
  gs.g1 = Point::identity();
  gs.g2 = Point::identity();
  for (auto [l, e] : factor(N)) {
    const PrimaryPart pp = primary_part(E, l, N);
    gs.ab *= ipow(l, static_cast<unsigned>(pp.e1));
    gs.a *= ipow(l, static_cast<unsigned>(pp.e2));
    gs.g1 = point_add(E, gs.g1, pp.g1);
    gs.g2 = point_add(E, gs.g2, pp.g2);
  }
  if (gs.a * gs.ab != N) throw std::logic_error("group_structure: orders do not multiply to the count");
  return gs;
}

namespace {

void check_level(const Curve& E, int n) {
  if (n < 1) throw std::invalid_argument("torsion level must be positive");
  if (static_cast<std::uint64_t>(n) % E.characteristic() == 0) throw std::invalid_argument("torsion level divisible by the characteristic");
}

bool contains_full_torsion(const Curve& EL, int n, u128 order) {
  for (auto [l, v] : factor(static_cast<u128>(n))) {
    if (primary_part(EL, l, order).e2 < v) return false;
  }
  return true;
}

}  // namespace

std::optional<int> torsion_field_degree(const Curve& E, int n) {
  check_level(E, n);
  if (n == 1) return 1;
  static std::mutex mu;
  static std::map<std::tuple<const void*, u128, u128, int>, std::optional<int>> memo;
  const auto key = std::make_tuple(E.field().data(), E.a().index(), E.b().index(), n);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  std::optional<int> res;
  const int k = E.field().degree();
  const u128 nn = static_cast<u128>(n);
  // A base change from F_{p^d}: E[n] is defined over F_{p^(d K0)}, so over
  // F_{p^k} the degree is lcm(d K0, k) / k.
  if (const int d = E.definition_degree(); d < k) {
    const ExtField Fd = ExtField::make(E.characteristic(), d);
    const Curve Ed(*descend(E.a(), Fd), *descend(E.b(), Fd));
    if (const auto K0 = torsion_field_degree(Ed, n)) {
      const auto total = lcm(static_cast<std::int64_t>(d * *K0), static_cast<std::int64_t>(k));
      if (total <= kMaxExtDegree && checked_pow(E.characteristic(), static_cast<unsigned>(total), kFieldSizeBits) != 0)
        res = static_cast<int>(total / k);
    }
    std::lock_guard<std::mutex> lock(mu);
    memo.emplace(key, res);
    return res;
  }
  for (int K = 1; K * k <= kMaxExtDegree; ++K) {
    const u128 qK = checked_pow(E.q(), static_cast<unsigned>(K), kFieldSizeBits);
    if (qK == 0) break;
    if ((qK - 1) % nn != 0) continue;
    const u128 NK = count_over_extension(E, K);
    if (NK % (nn * nn) != 0) continue;
    const ExtField L = ExtField::make(E.characteristic(), K * k);
    if (contains_full_torsion(E.base_change(L), n, NK)) {
      res = K;
      break;
    }
  }
  std::lock_guard<std::mutex> lock(mu);
  memo.emplace(key, res);
  return res;
}

TorsionBasis torsion_basis(const Curve& E, int n) {
  check_level(E, n);
  if (n < 2) throw std::invalid_argument("torsion_basis: level must be at least 2");
  const auto K = torsion_field_degree(E, n);
  if (!K) throw std::out_of_range("torsion_basis: torsion field beyond the supported degree");
  return torsion_basis_over(E, n, ExtField::make(E.characteristic(), *K * E.field().degree()));
}

namespace {

TorsionBasis compute_torsion_basis(const Curve& E, int n, ExtField L);

}  // namespace

TorsionBasis torsion_basis_over(const Curve& E, int n, ExtField L) {
  check_level(E, n);
  if (n < 2) throw std::invalid_argument("torsion_basis: level must be at least 2");
  if (L.degree() % E.field().degree() != 0) throw std::invalid_argument("torsion_basis: field does not contain the curve's field");
  static std::mutex mu;
  static std::map<std::tuple<const void*, u128, u128, int, const void*>, TorsionBasis> memo;
  const auto key = std::make_tuple(E.field().data(), E.a().index(), E.b().index(), n, L.data());
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  TorsionBasis B = compute_torsion_basis(E, n, L);
  std::lock_guard<std::mutex> lock(mu);
  return memo.emplace(key, std::move(B)).first->second;
}

namespace {

TorsionBasis compute_torsion_basis(const Curve& E, int n, ExtField L) {
  const Curve EL = E.base_change(L);
  const u128 N = count_over_extension(E, L.degree() / E.field().degree());
  Point P0 = Point::identity(), Q0 = Point::identity();
  for (auto [l, v] : factor(static_cast<u128>(n))) {
    const PrimaryPart pp = primary_part(EL, l, N);
    if (pp.e2 < v) throw std::invalid_argument("torsion_basis: field does not contain E[n]");
    P0 = point_add(EL, P0, mul_u(EL, pp.g1, ipow(l, static_cast<unsigned>(pp.e1 - v))));
    Q0 = point_add(EL, Q0, mul_u(EL, pp.g2, ipow(l, static_cast<unsigned>(pp.e2 - v))));
  }
  struct Entry {
    Point pt;
    int a, b;
  };
  std::vector<Entry> all;
  all.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  Point row = Point::identity();
  for (int a = 0; a < n; ++a) {
    Point cur = row;
    for (int b = 0; b < n; ++b) {
      all.push_back({cur, a, b});
      cur = point_add(EL, cur, Q0);
    }
    row = point_add(EL, row, P0);
  }
  std::sort(all.begin(), all.end(), [](const Entry& x, const Entry& y) { return x.pt < y.pt; });
  const Entry* eP = nullptr;
  for (const auto& e : all) {
    if (gcd(gcd(static_cast<std::int64_t>(e.a), static_cast<std::int64_t>(e.b)), static_cast<std::int64_t>(n)) == 1) {
      eP = &e;
      break;
    }
  }
  const Entry* eQ = nullptr;
  for (const auto& e : all) {
    const std::int64_t det = static_cast<std::int64_t>(eP->a) * e.b - static_cast<std::int64_t>(eP->b) * e.a;
    if (gcd(det, static_cast<std::int64_t>(n)) == 1) {
      eQ = &e;
      break;
    }
  }
  if (!eP || !eQ) throw std::logic_error("torsion_basis: no basis found");
  TorsionBasis B;
  B.n = n;
  B.curve = EL;
  B.P = eP->pt;
  B.Q = eQ->pt;
  B.zeta = weil_pairing_value(EL, n, B.P, B.Q);
  if (root_order(B.zeta, n) != n) throw std::logic_error("torsion_basis: pairing certificate failed");
  return B;
}

}  // namespace

Mat2 Mat2::scalar(std::int64_t n, std::int64_t s) {
  const std::int64_t v = mod(s, n);
  return {n, {v, 0, 0, v}};
}

Mat2 Mat2::operator*(const Mat2& o) const {
  Mat2 r{n, {}};
  r.m[0] = mod(m[0] * o.m[0] + m[1] * o.m[2], n);
  r.m[1] = mod(m[0] * o.m[1] + m[1] * o.m[3], n);
  r.m[2] = mod(m[2] * o.m[0] + m[3] * o.m[2], n);
  r.m[3] = mod(m[2] * o.m[1] + m[3] * o.m[3], n);
  return r;
}

Mat2 Mat2::operator+(const Mat2& o) const {
  Mat2 r{n, {}};
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = mod(m[i] + o.m[i], n);
  return r;
}

Mat2 Mat2::operator-() const {
  Mat2 r{n, {}};
  for (std::size_t i = 0; i < 4; ++i) r.m[i] = mod(-m[i], n);
  return r;
}

std::int64_t Mat2::trace() const { return mod(m[0] + m[3], n); }

std::int64_t Mat2::det() const { return mod(m[0] * m[3] - m[1] * m[2], n); }

std::string Mat2::to_string() const {
  std::ostringstream os;
  os << "[[" << m[0] << "," << m[1] << "],[" << m[2] << "," << m[3] << "]] mod " << n;
  return os.str();
}

std::pair<std::int64_t, std::int64_t> basis_coordinates(const TorsionBasis& B, const Point& R) {
  const auto u = mu_log(B.zeta, weil_pairing_value(B.curve, B.n, R, B.Q), B.n);
  const auto v = mu_log(B.zeta, weil_pairing_value(B.curve, B.n, B.P, R), B.n);
  if (!u || !v) throw std::logic_error("basis_coordinates: pairing value outside <zeta>");
  return {*u, *v};
}

Mat2 matrix_from_images(const TorsionBasis& B, const Point& imP, const Point& imQ) {
  const auto [a, c] = basis_coordinates(B, imP);
  const auto [b, d] = basis_coordinates(B, imQ);
  return {B.n, {a, b, c, d}};
}

Mat2 frobenius_matrix(const TorsionBasis& B, int j) {
  if (j < 1) throw std::invalid_argument("frobenius_matrix: subfield degree must be positive");
  if (!B.curve.rational_over(j)) throw std::invalid_argument("frobenius_matrix: curve not defined over the subfield");
  return matrix_from_images(B, point_frobenius(B.P, j), point_frobenius(B.Q, j));
}

}  // namespace isodesc
