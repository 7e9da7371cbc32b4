#include "isodesc/frobenius_algebra.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "isodesc/embedding.hpp"

namespace isodesc {

namespace {

Curve descend_curve(const Curve& E, int d) {
  const ExtField S = ExtField::make(E.characteristic(), d);
  const auto a = descend(E.a(), S);
  const auto b = descend(E.b(), S);
  if (!a || !b) throw std::logic_error("descend_curve: coefficients outside the subfield");
  return Curve(*a, *b);
}

}  // namespace

i128 trace_at(const Curve& E, int j) {
  if (j < 1) throw std::invalid_argument("trace_at: degree must be positive");
  if (!E.rational_over(j)) throw std::invalid_argument("trace_at: curve not defined over the requested field");
  const int d = E.definition_degree();
  const Curve D = d == E.field().degree() ? E : descend_curve(E, d);
  return trace_over_extension(frobenius_trace(D), D.q(), j / d);
}

bool tate_isogenous(const Curve& E1, const Curve& E2, int j) {
  if (E1.characteristic() != E2.characteristic()) throw std::invalid_argument("tate_isogenous: different characteristics");
  return trace_at(E1, j) == trace_at(E2, j);
}

FrobeniusData center_data(const Curve& E, int j) {
  FrobeniusData c;
  c.j = j;
  c.q = checked_pow(E.characteristic(), static_cast<unsigned>(j), 60);
  if (c.q == 0) throw std::out_of_range("center_data: field too large");
  c.t = trace_at(E, j);
  c.disc = c.t * c.t - 4 * static_cast<i128>(c.q);
  if (c.disc > 0) throw std::logic_error("center_data: trace violates the Hasse bound");
  if (c.disc == 0) {
    c.rational = true;
    c.pi_value = c.t / 2;
  } else {
    c.fund_disc = fundamental_discriminant(c.disc);
  }
  return c;
}

std::string FrobeniusData::center_string() const {
  if (rational) return "Q";
  std::ostringstream os;
  os << "Q(sqrt(" << to_string(fund_disc) << "))";
  return os.str();
}

bool center_inclusion_check(const Curve& E, int j_small, int j_large) {
  if (j_small < 1 || j_large % j_small != 0) throw std::invalid_argument("center_inclusion_check: degrees must divide");
  const FrobeniusData s = center_data(E, j_small), l = center_data(E, j_large);
  if (l.rational) return true;
  return !s.rational && s.fund_disc == l.fund_disc;
}

Partition isotypic_partition(const std::vector<Curve>& factors, int j) {
  if (factors.empty()) throw std::invalid_argument("isotypic_partition: no factors");
  for (const auto& E : factors)
    if (!(E.field() == factors.front().field())) throw std::invalid_argument("isotypic_partition: factors over different fields");
  std::vector<i128> tr;
  for (const auto& E : factors) tr.push_back(trace_at(E, j));
  Partition blocks;
  std::vector<i128> keys;
  for (int i = 0; i < static_cast<int>(factors.size()); ++i) {
    auto it = std::find(keys.begin(), keys.end(), tr[i]);
    if (it == keys.end()) {
      keys.push_back(tr[i]);
      blocks.push_back({i});
    } else {
      blocks[static_cast<std::size_t>(it - keys.begin())].push_back(i);
    }
  }
  return blocks;
}

Partition l_connected_components(const std::vector<Curve>& factors, int j_base, int j_ext) {
  if (j_base < 1 || j_ext % j_base != 0) throw std::invalid_argument("l_connected_components: degrees must divide");
  const Partition base = isotypic_partition(factors, j_base);
  Partition out;
  std::vector<int> reps;
  for (const auto& blk : base) {
    const Curve& r = factors[static_cast<std::size_t>(blk.front())];
    std::size_t k = 0;
    while (k < reps.size() && !tate_isogenous(factors[static_cast<std::size_t>(reps[k])], r, j_ext)) ++k;
    if (k == reps.size()) {
      reps.push_back(blk.front());
      out.push_back(blk);
    } else {
      out[k].insert(out[k].end(), blk.begin(), blk.end());
      std::sort(out[k].begin(), out[k].end());
    }
  }
  return out;
}

bool zeta_embedding_check(const FrobeniusData& c, int m) {
  if (m < 1) throw std::invalid_argument("zeta_embedding_check: m must be positive");
  if (m <= 2) return true;
  if (euler_phi(m) > 2) return false;
  if (c.rational) return false;
  return c.fund_disc == (m == 4 ? -4 : -3);
}

bool zeta_embedding_check(const Curve& E, int j, int m) { return zeta_embedding_check(center_data(E, j), m); }

std::string to_string(Disjointness d) {
  switch (d) {
    case Disjointness::Contains: return "contains";
    case Disjointness::Disjoint: return "disjoint";
    default: return "neither";
  }
}

Disjointness linear_disjointness_check(const FrobeniusData& c, int m) {
  if (m < 2 || !is_prime(static_cast<std::uint64_t>(m))) throw std::invalid_argument("linear_disjointness_check: m must be prime");
  if (zeta_embedding_check(c, m)) return Disjointness::Contains;
  if (c.rational) return Disjointness::Disjoint;
  const i128 mstar = (m % 4 == 1) ? m : -m;
  return c.fund_disc == mstar ? Disjointness::Neither : Disjointness::Disjoint;
}

Disjointness linear_disjointness_check(const Curve& E, int j, int m) { return linear_disjointness_check(center_data(E, j), m); }

}  // namespace isodesc
