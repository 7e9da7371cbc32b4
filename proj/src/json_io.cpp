#include "isodesc/json_io.hpp"

#include <stdexcept>

namespace isodesc {

json fe_to_json(const Fe& x) {
  if (x.field().degree() == 1) return x.coeffs()[0];
  return x.coeffs();
}

Fe fe_from_json(ExtField f, const json& j) {
  const std::int64_t p = static_cast<std::int64_t>(f.characteristic());
  if (j.is_number_integer()) return f.from_int(mod(j.get<std::int64_t>(), p));
  if (!j.is_array() || j.size() > static_cast<std::size_t>(f.degree())) throw std::invalid_argument("field element must be an integer or a coefficient list of length <= " + std::to_string(f.degree()));
  std::vector<std::uint64_t> c;
  for (const auto& v : j) c.push_back(static_cast<std::uint64_t>(mod(v.get<std::int64_t>(), p)));
  c.resize(static_cast<std::size_t>(f.degree()), 0);
  return f.from_coeffs(c);
}

json point_to_json(const Point& P) {
  if (P.inf) return "O";
  return json{{"x", fe_to_json(P.x)}, {"y", fe_to_json(P.y)}};
}

Point point_from_json(ExtField f, const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "O") throw std::invalid_argument("point must be \"O\" or {x, y}");
    return Point::identity();
  }
  return Point::affine(fe_from_json(f, j.at("x")), fe_from_json(f, j.at("y")));
}

json curve_to_json(const Curve& E) { return json{{"a", fe_to_json(E.a())}, {"b", fe_to_json(E.b())}}; }

Curve curve_from_json(ExtField f, const json& j) { return Curve(fe_from_json(f, j.at("a")), fe_from_json(f, j.at("b"))); }

EndoRecipe recipe_from_json(const json& j) {
  EndoRecipe r;
  const std::string g = j.value("g", "none");
  if (g == "i") r.g = AutKind::I;
  else if (g == "w" || g == "omega") r.g = AutKind::Omega;
  else if (g == "none") r.g = AutKind::None;
  else throw std::invalid_argument("recipe: unknown automorphism '" + g + "'");
  r.a = j.value("a", std::int64_t{1});
  r.b = j.value("b", std::int64_t{0});
  r.c = j.value("c", std::int64_t{0});
  r.d = j.value("d", std::int64_t{0});
  return r;
}

json recipe_to_json(const EndoRecipe& r) {
  const char* g = r.g == AutKind::I ? "i" : r.g == AutKind::Omega ? "w" : "none";
  return json{{"g", g}, {"a", r.a}, {"b", r.b}, {"c", r.c}, {"d", r.d}};
}

json int_to_json(i128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return static_cast<std::int64_t>(v);
  return to_string(v);
}

json quaternion_to_json(const Quaternion& q) {
  return json{{"1", rational_string(q.a)}, {"i", rational_string(q.b)}, {"j", rational_string(q.c)}, {"ij", rational_string(q.d)}};
}

json conjugation_example_to_json(const ConjugationExample& r) {
  return json{{"p", r.p},
              {"n", r.n},
              {"f", quaternion_to_json(r.f)},
              {"f_inv", quaternion_to_json(r.f_inv)},
              {"phi_j", quaternion_to_json(r.phi_j)},
              {"closed_form", quaternion_to_json(r.closed_form)},
              {"matches_closed_form", r.matches_closed_form},
              {"phi_j_squared", rational_string(r.phi_j_squared)},
              {"square_is_minus_p", r.square_is_minus_p},
              {"subfields_distinct", r.subfields_distinct},
              {"ij_coordinate", rational_string(r.ij_coordinate)}};
}

}  // namespace isodesc
