#include "isodesc/embedding.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "isodesc/poly.hpp"

namespace isodesc {

namespace {

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::pair<const void*, const void*>, std::unique_ptr<FieldEmbedding>>& cache() {
  static std::map<std::pair<const void*, const void*>, std::unique_ptr<FieldEmbedding>> c;
  return c;
}

}  // namespace

FieldEmbedding::FieldEmbedding(ExtField small, ExtField large) : src_(small), dst_(large) {
  const int a = small.degree();
  const int b = large.degree();
  const std::uint64_t p = small.characteristic();

  Fe g;
  if (a == 1) {
    g = large.zero();
  } else {
    std::vector<Fe> mc;
    for (std::uint64_t c : small.modulus()) mc.push_back(large.from_int(static_cast<std::int64_t>(c)));
    const auto roots = Poly(large, mc).roots();
    if (roots.empty()) throw std::logic_error("embedding: modulus has no root");
    g = roots.front();
  }
  Fe cur = large.one();
  for (int i = 0; i < a; ++i) {
    basis_.push_back(cur);
    cur = cur * g;
  }

  // Columns are basis images; pick a independent rows by elimination.
  std::vector<std::vector<std::uint64_t>> m(static_cast<std::size_t>(b), std::vector<std::uint64_t>(static_cast<std::size_t>(a)));
  for (int i = 0; i < a; ++i)
    for (int r = 0; r < b; ++r) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = basis_[static_cast<std::size_t>(i)].coeff(r);
  std::vector<std::vector<std::uint64_t>> work;
  std::vector<int> rows;
  for (int r = 0; r < b && static_cast<int>(rows.size()) < a; ++r) {
    auto trial = work;
    trial.push_back(m[static_cast<std::size_t>(r)]);
    // Rank test by elimination on a copy.
    auto e = trial;
    int rank = 0;
    for (int c = 0; c < a && rank < static_cast<int>(e.size()); ++c) {
      int piv = -1;
      for (int i = rank; i < static_cast<int>(e.size()); ++i)
        if (e[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      std::swap(e[static_cast<std::size_t>(rank)], e[static_cast<std::size_t>(piv)]);
      const std::uint64_t iv = invmod64(e[static_cast<std::size_t>(rank)][static_cast<std::size_t>(c)], p);
      for (auto& v : e[static_cast<std::size_t>(rank)]) v = mulmod64(v, iv, p);
      for (int i = 0; i < static_cast<int>(e.size()); ++i) {
        if (i == rank) continue;
        const std::uint64_t f = e[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        if (f == 0) continue;
        for (int j = 0; j < a; ++j)
          e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
              (e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + p - mulmod64(f, e[static_cast<std::size_t>(rank)][static_cast<std::size_t>(j)], p)) % p;
      }
      ++rank;
    }
    if (rank == static_cast<int>(trial.size())) {
      work = std::move(trial);
      rows.push_back(r);
    }
  }
  if (static_cast<int>(rows.size()) != a) throw std::logic_error("embedding: singular basis");
  pivots_ = rows;

  // Invert the a x a block by Gauss-Jordan on [block | I].
  std::vector<std::vector<std::uint64_t>> aug(static_cast<std::size_t>(a), std::vector<std::uint64_t>(static_cast<std::size_t>(2 * a), 0));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < a; ++j) aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = work[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(a + i)] = 1;
  }
  for (int c = 0; c < a; ++c) {
    int piv = c;
    while (aug[static_cast<std::size_t>(piv)][static_cast<std::size_t>(c)] == 0) ++piv;
    std::swap(aug[static_cast<std::size_t>(c)], aug[static_cast<std::size_t>(piv)]);
    const std::uint64_t iv = invmod64(aug[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)], p);
    for (auto& v : aug[static_cast<std::size_t>(c)]) v = mulmod64(v, iv, p);
    for (int i = 0; i < a; ++i) {
      if (i == c) continue;
      const std::uint64_t f = aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      if (f == 0) continue;
      for (int j = 0; j < 2 * a; ++j)
        aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
            (aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] + p - mulmod64(f, aug[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)], p)) % p;
    }
  }
  inv_block_.assign(static_cast<std::size_t>(a), std::vector<std::uint64_t>(static_cast<std::size_t>(a)));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) inv_block_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aug[static_cast<std::size_t>(i)][static_cast<std::size_t>(a + j)];
}

const FieldEmbedding& FieldEmbedding::get(ExtField small, ExtField large) {
  if (small.characteristic() != large.characteristic() || large.degree() % small.degree() != 0)
    throw std::invalid_argument("embedding: incompatible fields");
  const auto key = std::make_pair(static_cast<const void*>(small.data()), static_cast<const void*>(large.data()));
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(key);
    if (it != cache().end()) return *it->second;
  }
  std::unique_ptr<FieldEmbedding> e(new FieldEmbedding(small, large));
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto [it, inserted] = cache().emplace(key, std::move(e));
  return *it->second;
}

Fe FieldEmbedding::map(const Fe& x) const {
  if (!(x.field() == src_)) throw std::invalid_argument("embedding: element from the wrong field");
  Fe r = dst_.zero();
  for (int i = 0; i < src_.degree(); ++i) {
    const std::uint64_t c = x.coeff(i);
    if (c != 0) r += basis_[static_cast<std::size_t>(i)].scale(static_cast<std::int64_t>(c));
  }
  return r;
}

std::optional<Fe> FieldEmbedding::preimage(const Fe& y) const {
  if (!(y.field() == dst_)) throw std::invalid_argument("embedding: element from the wrong field");
  const int a = src_.degree();
  const std::uint64_t p = src_.characteristic();
  std::vector<std::uint64_t> c(static_cast<std::size_t>(a), 0);
  for (int i = 0; i < a; ++i) {
    u128 s = 0;
    for (int j = 0; j < a; ++j) s += static_cast<u128>(inv_block_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * y.coeff(pivots_[static_cast<std::size_t>(j)]);
    c[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(s % p);
  }
  Fe x = src_.from_coeffs(c);
  if (!(map(x) == y)) return std::nullopt;
  return x;
}

Fe lift(const Fe& x, ExtField large) {
  if (x.field() == large) return x;
  return FieldEmbedding::get(x.field(), large).map(x);
}

std::optional<Fe> descend(const Fe& y, ExtField small) {
  if (y.field() == small) return y;
  return FieldEmbedding::get(small, y.field()).preimage(y);
}

ExtField common_field(ExtField a, ExtField b) {
  if (a == b) return a;
  if (a.characteristic() != b.characteristic()) throw std::invalid_argument("common_field: characteristic mismatch");
  const std::int64_t d = lcm(static_cast<std::int64_t>(a.degree()), static_cast<std::int64_t>(b.degree()));
  if (d > kMaxExtDegree) throw std::out_of_range("common_field: degree exceeds the supported bound");
  return ExtField::make(a.characteristic(), static_cast<int>(d));
}

}  // namespace isodesc
