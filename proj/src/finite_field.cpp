#include "isodesc/finite_field.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace isodesc {

namespace detail {

namespace {

using Coeffs = std::vector<std::uint64_t>;

void trim(Coeffs& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Arithmetic in F_p[x] for the construction-time irreducibility tests.
Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Coeffs r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod64(a[i], b[j], p)) % p;
  const std::size_t d = m.size() - 1;
  for (std::size_t i = r.size(); i-- > d;) {
    const std::uint64_t c = r[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= d; ++j) r[i - d + j] = (r[i - d + j] + p - mulmod64(c, m[j], p)) % p;
  }
  r.resize(std::min(r.size(), d));
  trim(r);
  return r;
}

Coeffs poly_powmod(Coeffs base, std::uint64_t e, const Coeffs& m, std::uint64_t p) {
  Coeffs r{1};
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

Coeffs poly_mod(Coeffs a, const Coeffs& b, std::uint64_t p) {
  trim(a);
  const std::uint64_t inv_lead = invmod64(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t c = mulmod64(a.back(), inv_lead, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mulmod64(c, b[j], p)) % p;
    trim(a);
  }
  return a;
}

Coeffs poly_gcd(Coeffs a, Coeffs b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Coeffs r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^j) mod m for j = 0..k, by iterated p-th powers.
bool is_irreducible(const Coeffs& m, std::uint64_t p) {
  const int k = static_cast<int>(m.size()) - 1;
  if (k == 1) return true;
  std::vector<Coeffs> xp(static_cast<std::size_t>(k) + 1);
  xp[0] = Coeffs{0, 1};
  for (int j = 1; j <= k; ++j) xp[static_cast<std::size_t>(j)] = poly_powmod(xp[static_cast<std::size_t>(j) - 1], p, m, p);
  // Rabin: x^(p^k) == x and gcd(x^(p^(k/r)) - x, m) == 1 for primes r | k.
  Coeffs top = xp[static_cast<std::size_t>(k)];
  top.resize(std::max<std::size_t>(top.size(), 2), 0);
  top[1] = (top[1] + p - 1) % p;
  trim(top);
  if (!top.empty()) return false;
  for (auto [r, e] : factor(static_cast<u128>(k))) {
    Coeffs h = xp[static_cast<std::size_t>(k / static_cast<int>(r))];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    trim(h);
    if (h.empty()) return false;
    if (poly_gcd(m, h, p).size() != 1) return false;
  }
  return true;
}

Coeffs smallest_irreducible(std::uint64_t p, int k) {
  if (k == 1) return Coeffs{0, 1};
  // Coefficient tuples (c0, ..., c_{k-1}) in lexicographic order; c0 = 0 is
  // divisible by x, so the scan starts at c0 = 1.
  Coeffs c(static_cast<std::size_t>(k), 0);
  c[0] = 1;
  while (true) {
    Coeffs m = c;
    m.push_back(1);
    if (is_irreducible(m, p)) return m;
    // Increment with c_{k-1} the fastest-moving digit.
    int i = k - 1;
    while (i >= 0) {
      if (++c[static_cast<std::size_t>(i)] < p) break;
      c[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) throw std::logic_error("no irreducible polynomial found");
  }
}

}  // namespace

struct FieldData {
  std::uint64_t p = 0;
  int k = 0;
  u128 q = 0;
  std::vector<std::uint64_t> modulus;
  // red[i][j]: coefficient j of x^(k+i) mod m, for i in [0, k-1).
  std::vector<std::vector<std::uint64_t>> red;
  // frob[i][j]: coefficient j of (x^i)^p mod m.
  std::vector<std::vector<std::uint64_t>> frob;
  // Tonelli-Shanks data: q - 1 = 2^s * t, nonresidue z.
  int ts_s = 0;
  u128 ts_t = 0;
  std::array<std::uint32_t, kMaxExtDegree> nonresidue{};

  Fe make(const std::array<std::uint32_t, kMaxExtDegree>& c) const {
    Fe r;
    r.f_ = this;
    r.c_ = c;
    return r;
  }
};

}  // namespace detail

namespace {

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<std::uint64_t, int>, std::unique_ptr<detail::FieldData>>& registry() {
  static std::map<std::pair<std::uint64_t, int>, std::unique_ptr<detail::FieldData>> r;
  return r;
}

void check_same(const Fe& a, const Fe& b) {
  if (!(a.field() == b.field())) throw std::invalid_argument("field element mismatch");
}

}  // namespace

ExtField ExtField::make(std::uint64_t p, int k) {
  if (p < 3 || p >= (1ull << 31) || !is_prime(p)) throw std::invalid_argument("make_ext_field: p must be an odd prime below 2^31");
  if (k < 1 || k > kMaxExtDegree) throw std::invalid_argument("make_ext_field: degree out of range");
  const u128 q = checked_pow(p, static_cast<unsigned>(k), kFieldSizeBits);
  if (q == 0) throw std::invalid_argument("make_ext_field: field size exceeds 2^125");

  std::lock_guard<std::mutex> lock(registry_mutex());
  auto& reg = registry();
  auto it = reg.find({p, k});
  if (it != reg.end()) return ExtField(it->second.get());

  auto d = std::make_unique<detail::FieldData>();
  d->p = p;
  d->k = k;
  d->q = q;
  d->modulus = detail::smallest_irreducible(p, k);

  const auto& m = d->modulus;
  std::vector<std::uint64_t> cur(static_cast<std::size_t>(k), 0);
  // x^k mod m = -(m_0 + ... + m_{k-1} x^{k-1}).
  if (k >= 2) {
    for (int j = 0; j < k; ++j) cur[static_cast<std::size_t>(j)] = (p - m[static_cast<std::size_t>(j)]) % p;
    for (int i = 0; i < k - 1; ++i) {
      d->red.push_back(cur);
      // Multiply by x.
      std::vector<std::uint64_t> nxt(static_cast<std::size_t>(k), 0);
      const std::uint64_t top = cur[static_cast<std::size_t>(k) - 1];
      for (int j = k - 1; j >= 1; --j) nxt[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j) - 1];
      for (int j = 0; j < k; ++j)
        nxt[static_cast<std::size_t>(j)] = (nxt[static_cast<std::size_t>(j)] + mulmod64(top, (p - m[static_cast<std::size_t>(j)]) % p, p)) % p;
      cur = nxt;
    }
  }

  ExtField f(d.get());
  // Frobenius matrix from x^p.
  const Fe xp = f.generator().pow(p);
  Fe xpi = f.one();
  for (int i = 0; i < k; ++i) {
    d->frob.push_back(xpi.coeffs());
    xpi = xpi * xp;
  }

  u128 t = q - 1;
  int s = 0;
  while ((t & 1) == 0) {
    t >>= 1;
    ++s;
  }
  d->ts_s = s;
  d->ts_t = t;
  for (u128 idx = 1; idx < q; ++idx) {
    Fe z = f.from_index(idx);
    if (!z.is_square()) {
      for (int j = 0; j < k; ++j) d->nonresidue[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(z.coeff(j));
      break;
    }
  }

  reg.emplace(std::make_pair(p, k), std::move(d));
  return f;
}

std::uint64_t ExtField::characteristic() const { return d_->p; }
int ExtField::degree() const { return d_->k; }
u128 ExtField::order() const { return d_->q; }
std::span<const std::uint64_t> ExtField::modulus() const { return d_->modulus; }

Fe ExtField::zero() const { return d_->make({}); }

Fe ExtField::one() const { return from_int(1); }

Fe ExtField::from_int(std::int64_t v) const {
  std::array<std::uint32_t, kMaxExtDegree> c{};
  c[0] = static_cast<std::uint32_t>(mod(v, static_cast<std::int64_t>(d_->p)));
  return d_->make(c);
}

Fe ExtField::from_coeffs(std::span<const std::uint64_t> coeffs) const {
  if (static_cast<int>(coeffs.size()) > d_->k) throw std::invalid_argument("from_coeffs: too many coefficients");
  std::array<std::uint32_t, kMaxExtDegree> c{};
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = static_cast<std::uint32_t>(coeffs[i] % d_->p);
  return d_->make(c);
}

Fe ExtField::generator() const {
  if (d_->k == 1) return d_->make({});  // root of m(x) = x
  std::array<std::uint32_t, kMaxExtDegree> c{};
  c[1] = 1;
  return d_->make(c);
}

Fe ExtField::from_index(u128 idx) const {
  if (idx >= d_->q) throw std::out_of_range("from_index");
  std::array<std::uint32_t, kMaxExtDegree> c{};
  for (int i = d_->k - 1; i >= 0; --i) {
    c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(idx % d_->p);
    idx /= d_->p;
  }
  return d_->make(c);
}

ExtField Fe::field() const { return ExtField(f_); }

int Fe::degree() const { return f_->k; }

bool Fe::is_zero() const {
  for (int i = 0; i < f_->k; ++i)
    if (c_[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

bool Fe::is_one() const {
  if (c_[0] != 1) return false;
  for (int i = 1; i < f_->k; ++i)
    if (c_[static_cast<std::size_t>(i)] != 0) return false;
  return true;
}

Fe Fe::operator+(const Fe& o) const {
  if (f_ != o.f_) check_same(*this, o);
  Fe r = *this;
  const std::uint64_t p = f_->p;
  for (int i = 0; i < f_->k; ++i) {
    std::uint64_t s = static_cast<std::uint64_t>(c_[static_cast<std::size_t>(i)]) + o.c_[static_cast<std::size_t>(i)];
    r.c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(s >= p ? s - p : s);
  }
  return r;
}

Fe Fe::operator-(const Fe& o) const {
  if (f_ != o.f_) check_same(*this, o);
  Fe r = *this;
  const std::uint64_t p = f_->p;
  for (int i = 0; i < f_->k; ++i) {
    std::uint64_t a = c_[static_cast<std::size_t>(i)], b = o.c_[static_cast<std::size_t>(i)];
    r.c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(a >= b ? a - b : a + p - b);
  }
  return r;
}

Fe Fe::operator-() const {
  Fe r = *this;
  const std::uint64_t p = f_->p;
  for (int i = 0; i < f_->k; ++i) {
    std::uint64_t a = c_[static_cast<std::size_t>(i)];
    r.c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(a == 0 ? 0 : p - a);
  }
  return r;
}

Fe Fe::operator*(const Fe& o) const {
  if (f_ != o.f_) check_same(*this, o);
  const int k = f_->k;
  const std::uint64_t p = f_->p;
  Fe r;
  r.f_ = f_;
  if (k == 1) {
    r.c_[0] = static_cast<std::uint32_t>(static_cast<std::uint64_t>(c_[0]) * o.c_[0] % p);
    return r;
  }
  std::array<u128, 2 * kMaxExtDegree> acc{};
  for (int i = 0; i < k; ++i) {
    const std::uint64_t a = c_[static_cast<std::size_t>(i)];
    if (a == 0) continue;
    for (int j = 0; j < k; ++j) acc[static_cast<std::size_t>(i + j)] += static_cast<u128>(a * o.c_[static_cast<std::size_t>(j)]);
  }
  std::array<std::uint64_t, 2 * kMaxExtDegree> lo{};
  for (int i = 0; i < 2 * k - 1; ++i) lo[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(acc[static_cast<std::size_t>(i)] % p);
  for (int j = 0; j < k; ++j) {
    u128 s = lo[static_cast<std::size_t>(j)];
    for (int i = 0; i < k - 1; ++i) {
      const std::uint64_t hi = lo[static_cast<std::size_t>(k + i)];
      if (hi != 0) s += static_cast<u128>(hi * f_->red[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    r.c_[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(s % p);
  }
  return r;
}

Fe Fe::scale(std::int64_t s) const {
  const std::uint64_t p = f_->p;
  const std::uint64_t m = static_cast<std::uint64_t>(mod(s, static_cast<std::int64_t>(p)));
  Fe r = *this;
  for (int i = 0; i < f_->k; ++i) r.c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(c_[static_cast<std::size_t>(i)] * m % p);
  return r;
}

Fe Fe::inv() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  const std::uint64_t p = f_->p;
  const int k = f_->k;
  if (k == 1) {
    Fe r = *this;
    r.c_[0] = static_cast<std::uint32_t>(invmod64(c_[0], p));
    return r;
  }
  // Extended Euclid on (m, a) in F_p[x]; track the cofactor of a.
  using V = std::vector<std::uint64_t>;
  auto trim = [](V& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  V r0(f_->modulus.begin(), f_->modulus.end());
  V r1(c_.begin(), c_.begin() + k);
  trim(r1);
  V t0{}, t1{1};
  while (!r1.empty()) {
    // (q, rem) = divmod(r0, r1)
    V rem = r0;
    V q(rem.size() >= r1.size() ? rem.size() - r1.size() + 1 : 0, 0);
    const std::uint64_t il = invmod64(r1.back(), p);
    while (rem.size() >= r1.size() && !rem.empty()) {
      const std::uint64_t c = mulmod64(rem.back(), il, p);
      const std::size_t sh = rem.size() - r1.size();
      q[sh] = c;
      for (std::size_t j = 0; j < r1.size(); ++j) rem[sh + j] = (rem[sh + j] + p - mulmod64(c, r1[j], p)) % p;
      trim(rem);
    }
    // t2 = t0 - q * t1
    V qt(q.size() + t1.size(), 0);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < t1.size(); ++j) qt[i + j] = (qt[i + j] + mulmod64(q[i], t1[j], p)) % p;
    V t2(std::max(t0.size(), qt.size()), 0);
    for (std::size_t i = 0; i < t2.size(); ++i) {
      const std::uint64_t a = i < t0.size() ? t0[i] : 0;
      const std::uint64_t b = i < qt.size() ? qt[i] : 0;
      t2[i] = (a + p - b) % p;
    }
    trim(t2);
    r0 = std::move(r1);
    r1 = std::move(rem);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  // r0 is a nonzero constant.
  const std::uint64_t ic = invmod64(r0[0], p);
  Fe r;
  r.f_ = f_;
  for (std::size_t i = 0; i < t0.size() && i < static_cast<std::size_t>(k); ++i) r.c_[i] = static_cast<std::uint32_t>(mulmod64(t0[i], ic, p));
  return r;
}

Fe Fe::pow(u128 e) const {
  Fe r = field().one();
  Fe b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    e >>= 1;
    if (e > 0) b = b * b;
  }
  return r;
}

Fe Fe::frobenius(int j) const {
  const int k = f_->k;
  j %= k;
  if (j < 0) j += k;
  Fe cur = *this;
  const std::uint64_t p = f_->p;
  for (int step = 0; step < j; ++step) {
    Fe nxt;
    nxt.f_ = f_;
    std::array<u128, kMaxExtDegree> acc{};
    for (int i = 0; i < k; ++i) {
      const std::uint64_t a = cur.c_[static_cast<std::size_t>(i)];
      if (a == 0) continue;
      const auto& row = f_->frob[static_cast<std::size_t>(i)];
      for (int t = 0; t < k; ++t) acc[static_cast<std::size_t>(t)] += static_cast<u128>(a * row[static_cast<std::size_t>(t)]);
    }
    for (int t = 0; t < k; ++t) nxt.c_[static_cast<std::size_t>(t)] = static_cast<std::uint32_t>(acc[static_cast<std::size_t>(t)] % p);
    cur = nxt;
  }
  return cur;
}

bool Fe::is_square() const {
  if (is_zero()) return true;
  return pow((f_->q - 1) / 2).is_one();
}

std::optional<Fe> Fe::sqrt() const {
  if (is_zero()) return *this;
  const u128 q = f_->q;
  auto pick = [](const Fe& y) { return std::min(y, -y); };
  if (q <= 10000) {
    if (!is_square()) return std::nullopt;
    const ExtField f = field();
    for (u128 idx = 0; idx < q; ++idx) {
      Fe y = f.from_index(idx);
      if (y * y == *this) return y;
    }
    return std::nullopt;
  }
  if (!is_square()) return std::nullopt;
  if (q % 4 == 3) return pick(pow((q + 1) / 4));
  // Tonelli-Shanks with the canonical smallest nonresidue.
  Fe z = f_->make(f_->nonresidue);
  int m = f_->ts_s;
  Fe c = z.pow(f_->ts_t);
  Fe t = pow(f_->ts_t);
  Fe r = pow((f_->ts_t + 1) / 2);
  while (!t.is_one()) {
    int i = 0;
    Fe tt = t;
    while (!tt.is_one()) {
      tt = tt * tt;
      ++i;
    }
    Fe b = c;
    for (int j = 0; j < m - i - 1; ++j) b = b * b;
    m = i;
    c = b * b;
    t = t * c;
    r = r * b;
  }
  return pick(r);
}

u128 Fe::index() const {
  u128 idx = 0;
  for (int i = 0; i < f_->k; ++i) idx = idx * f_->p + c_[static_cast<std::size_t>(i)];
  return idx;
}

std::vector<std::uint64_t> Fe::coeffs() const { return std::vector<std::uint64_t>(c_.begin(), c_.begin() + f_->k); }

std::string Fe::to_string() const {
  if (f_->k == 1) return std::to_string(c_[0]);
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < f_->k; ++i) os << (i ? "," : "") << c_[static_cast<std::size_t>(i)];
  os << ']';
  return os.str();
}

bool Fe::operator==(const Fe& o) const {
  if (f_ != o.f_) return false;
  if (f_ == nullptr) return true;
  for (int i = 0; i < f_->k; ++i)
    if (c_[static_cast<std::size_t>(i)] != o.c_[static_cast<std::size_t>(i)]) return false;
  return true;
}

std::strong_ordering Fe::operator<=>(const Fe& o) const {
  const int k = f_ ? f_->k : 0;
  for (int i = 0; i < k; ++i) {
    auto c = c_[static_cast<std::size_t>(i)] <=> o.c_[static_cast<std::size_t>(i)];
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

ExtField make_ext_field(std::uint64_t p, int k) { return ExtField::make(p, k); }

Fe field_frobenius(const Fe& x, int j) {
  if (j < 0) throw std::invalid_argument("field_frobenius: negative power");
  return x.frobenius(j);
}

std::optional<Fe> sqrt_in_field(const Fe& x) { return x.sqrt(); }

}  // namespace isodesc
