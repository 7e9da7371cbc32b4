// The Weil e_n-pairing on E[n] and isotropy tests.
#pragma once

#include <vector>

#include "isodesc/curve.hpp"

namespace isodesc {

struct RootOfUnity {
  Fe value;
  int order = 1;  // exact multiplicative order, a divisor of n
};

// Throws std::invalid_argument when nP or nQ is not the identity, or p | n.
RootOfUnity weil_pairing(const Curve& E, int n, const Point& P, const Point& Q);
Fe weil_pairing_value(const Curve& E, int n, const Point& P, const Point& Q);

// Exact order of z given that z^n = 1; 0 if z^n != 1.
int root_order(const Fe& z, int n);
// Smallest k in [0, n) with base^k = z, given base of exact order n.
std::optional<int> mu_log(const Fe& base, const Fe& z, int n);

// Subgroup of E[n] generated by gens (all n-torsion), by closure.
std::vector<Point> generated_subgroup(const Curve& E, const std::vector<Point>& gens);

// Order n and all pairings between generators trivial.
bool is_maximal_isotropic(const Curve& E, int n, const std::vector<Point>& gens);

}  // namespace isodesc
