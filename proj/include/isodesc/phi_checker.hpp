// Line-item evaluation of the hypothesis bundle Phi(n) for elliptic curves
// A, B over F = F_p, an isogeny f: A -> B over L = F_{p^m}, and level
// subgroups A~ of A[n], B~ of B[n] given by generators.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "isodesc/isogeny.hpp"
#include "isodesc/json_io.hpp"

namespace isodesc {

struct PhiInstance {
  std::uint64_t p = 0;
  Curve A, B;  // over F_p
  int m = 1;   // [L : F]
  int n = 1;
  Isogeny f;   // A -> B, over any field containing its coefficients
  std::vector<Point> A_tilde, B_tilde;  // generators, over one common field
  std::string label;
};

struct ClauseResult {
  bool ok = false;
  std::string witness;
};

struct PhiReport {
  std::array<ClauseResult, 7> clauses;  // (a) .. (g)
  bool overall = false;
  u128 degree = 0;
  u128 lambda_multiplier = 0;
  std::size_t a_tilde_order = 0, b_tilde_order = 0;
  bool a_tilde_pointwise_rational = false;
  bool b_tilde_pointwise_rational = false;
  std::optional<Point> isotropic_generator;

  const ClauseResult& clause(char c) const { return clauses[static_cast<std::size_t>(c - 'a')]; }
  json to_json() const;
};

// Throws std::invalid_argument for malformed instances (m < 1, n < 1,
// points off their curves or not n-torsion, f between other curves).
PhiReport check_phi(const PhiInstance& inst);

// Instance file:
// {"p": 11, "m": 2, "n": 6,
//  "A": {"a": 1, "b": 0}, "B": {"a": 1, "b": 0},
//  "field_degree": 2,                      // field of all listed points
//  "f": {"recipe": {"g": "i", "a": 1, "b": 6, "c": 0, "d": 0}}
//     | {"velu": [point, ...], "scale": fe}  // kernel chain from A, then scaling
//  "A_tilde": [point, ...], "B_tilde": [point, ...]}
PhiInstance phi_instance_from_json(const json& j);

}  // namespace isodesc
