// JSON encodings shared by the CLI, the checker and the harness.
//
// Field elements: an integer for F_p, else a coefficient list [c0, c1, ...]
// in the field's polynomial basis (constant term first).  Points: the string
// "O" or {"x": ..., "y": ...}.  Curves: {"a": ..., "b": ...}.
#pragma once

#include "json.hpp"

#include "isodesc/curve.hpp"
#include "isodesc/isogeny.hpp"
#include "isodesc/quaternion.hpp"

namespace isodesc {

using json = nlohmann::json;

json fe_to_json(const Fe& x);
Fe fe_from_json(ExtField f, const json& j);
json point_to_json(const Point& P);
Point point_from_json(ExtField f, const json& j);
json curve_to_json(const Curve& E);
Curve curve_from_json(ExtField f, const json& j);
// {"g": "i" | "w" | "none", "a", "b", "c", "d"}
EndoRecipe recipe_from_json(const json& j);
json recipe_to_json(const EndoRecipe& r);
// Decimal string for 128-bit integers, number when it fits in 64 bits.
json int_to_json(i128 v);

// {"1": "a", "i": "b", "j": "c", "ij": "d"} with exact rational strings.
json quaternion_to_json(const Quaternion& q);
json conjugation_example_to_json(const ConjugationExample& r);

}  // namespace isodesc
