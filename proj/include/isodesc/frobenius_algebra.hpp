// Frobenius centers of elliptic curves and products of them.
#pragma once

#include <string>
#include <vector>

#include "isodesc/curve.hpp"

namespace isodesc {

// Center Q[pi] of the Frobenius over F_q, q = p^j.
struct FrobeniusData {
  int j = 1;
  u128 q = 0;
  i128 t = 0;
  i128 disc = 0;         // t^2 - 4q, discriminant of x^2 - t x + q
  bool rational = false;  // pi is a rational integer (t^2 = 4q)
  i128 pi_value = 0;      // t / 2 when rational
  i128 fund_disc = 0;     // fundamental discriminant when imaginary quadratic, else 0

  std::string center_string() const;
};

// Trace of Frobenius over F_{p^j}; E must be rational over F_{p^j}.
i128 trace_at(const Curve& E, int j);

bool tate_isogenous(const Curve& E1, const Curve& E2, int j);
FrobeniusData center_data(const Curve& E, int j);
// Q[pi_L] sits inside Q[pi_F] for F_{p^js} within F_{p^jl}.
bool center_inclusion_check(const Curve& E, int j_small, int j_large);

using Partition = std::vector<std::vector<int>>;

// Blocks of equal traces over F_{p^j}, ordered by their smallest index.
Partition isotypic_partition(const std::vector<Curve>& factors, int j);
// Base blocks merged when their lowest-index representatives are isogenous
// over F_{p^j_ext}.
Partition l_connected_components(const std::vector<Curve>& factors, int j_base, int j_ext);

bool zeta_embedding_check(const Curve& E, int j, int m);
bool zeta_embedding_check(const FrobeniusData& c, int m);

enum class Disjointness { Contains, Disjoint, Neither };
std::string to_string(Disjointness d);
// m must be prime.
Disjointness linear_disjointness_check(const Curve& E, int j, int m);
Disjointness linear_disjointness_check(const FrobeniusData& c, int m);

}  // namespace isodesc
