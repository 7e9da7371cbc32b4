#include "isodesc/phi_checker.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

#include "isodesc/embedding.hpp"
#include "isodesc/weil.hpp"

namespace isodesc {

namespace {

const char* kClauseNames[7] = {"a", "b", "c", "d", "e", "f", "g"};

ExtField points_field(const std::vector<Point>& pts, ExtField fallback) {
  for (const auto& P : pts)
    if (!P.inf) return P.x.field();
  return fallback;
}

std::vector<Point> lift_all(const std::vector<Point>& pts, ExtField M) {
  std::vector<Point> out;
  for (const auto& P : pts) out.push_back(P.inf || P.x.field() == M ? P : lift_point(P, M));
  return out;
}

void check_torsion(const Curve& E, int n, const std::vector<Point>& gens, const char* what) {
  for (const auto& P : gens) {
    if (!E.contains(P)) throw std::invalid_argument(std::string(what) + ": generator not on its curve");
    if (!point_mul(E, P, n).inf) throw std::invalid_argument(std::string(what) + ": generator is not n-torsion");
  }
}

// First generator whose Frobenius image leaves the subgroup.
std::optional<Point> unstable_generator(const std::vector<Point>& gens, const std::set<Point>& group) {
  for (const auto& g : gens)
    if (!group.contains(point_frobenius(g, 1))) return g;
  return std::nullopt;
}

bool pointwise_rational(const std::set<Point>& group) {
  for (const auto& P : group)
    if (!P.inf && !(P.x.in_subfield(1) && P.y.in_subfield(1))) return false;
  return true;
}

}  // namespace

json PhiReport::to_json() const {
  json cl = json::object();
  for (std::size_t i = 0; i < clauses.size(); ++i) cl[kClauseNames[i]] = json{{"ok", clauses[i].ok}, {"witness", clauses[i].witness}};
  json j{{"clauses", cl},
         {"overall", overall},
         {"degree", int_to_json(static_cast<i128>(degree))},
         {"lambda_multiplier", int_to_json(static_cast<i128>(lambda_multiplier))},
         {"A_tilde_order", a_tilde_order},
         {"B_tilde_order", b_tilde_order},
         {"A_tilde_pointwise_rational", a_tilde_pointwise_rational},
         {"B_tilde_pointwise_rational", b_tilde_pointwise_rational}};
  j["isotropic_generator"] = isotropic_generator ? point_to_json(*isotropic_generator) : json(nullptr);
  return j;
}

PhiReport check_phi(const PhiInstance& inst) {
  if (inst.m < 1) throw std::invalid_argument("check_phi: m must be positive");
  if (inst.n < 1) throw std::invalid_argument("check_phi: n must be positive");
  const std::uint64_t p = inst.p;
  PhiReport rep;
  auto& [ca, cb, cc, cd, ce, cf, cg] = rep.clauses;

  // (a) Curves have dimension 1; they must be defined over F_p.
  ca.ok = inst.A.rational_over(1) && inst.B.rational_over(1) && inst.A.characteristic() == p && inst.B.characteristic() == p;
  ca.witness = ca.ok ? "elliptic curves over F_" + std::to_string(p) : "a curve is not defined over F_" + std::to_string(p);

  // Common field for the map and the level structure.
  ExtField M = inst.f.field();
  for (const auto* pts : {&inst.A_tilde, &inst.B_tilde}) M = common_field(M, points_field(*pts, M));
  const Isogeny f = inst.f.base_change(M);
  const Curve AM = inst.A.base_change(M), BM = inst.B.base_change(M);
  if (!(f.domain == AM) || !(f.codomain == BM)) throw std::invalid_argument("check_phi: f does not map A to B");
  const std::vector<Point> At = lift_all(inst.A_tilde, M), Bt = lift_all(inst.B_tilde, M);
  check_torsion(AM, inst.n, At, "A_tilde");
  check_torsion(BM, inst.n, Bt, "B_tilde");

  // (b)
  cb.ok = inst.n % static_cast<std::int64_t>(p) != 0;
  cb.witness = "gcd(" + std::to_string(inst.n) + ", " + std::to_string(p) + ") = " + std::to_string(gcd(static_cast<std::int64_t>(inst.n), static_cast<std::int64_t>(p)));

  // (c)
  rep.degree = f.degree;
  const bool coprime = gcd(f.degree, static_cast<u128>(inst.n)) == 1;
  {
    std::ostringstream os;
    os << "deg f = " << to_string(f.degree) << (coprime ? " prime to n" : " shares a factor with n");
    if (ca.ok) {
      const FieldOfDefinitionReport fod = field_of_definition(inst.f, inst.m);
      os << "; defined over F_{p^" << inst.m << "}: " << (fod.coeff_test ? "yes" : "no");
      if (!fod.witnesses.empty()) os << " (witness " << fod.witnesses.front() << ")";
      cc.ok = coprime && fod.coeff_test && fod.commutation_test;
    } else {
      os << "; curves not over F";
    }
    cc.witness = os.str();
  }

  // (d) The canonical principal polarization of B is defined over F.
  cd.ok = true;
  cd.witness = "canonical principal polarization, defined over F";

  // (e)
  const std::vector<Point> Bgrp = generated_subgroup(BM, Bt);
  const std::set<Point> Bset(Bgrp.begin(), Bgrp.end());
  rep.b_tilde_order = Bset.size();
  rep.b_tilde_pointwise_rational = pointwise_rational(Bset);
  if (auto bad = unstable_generator(Bt, Bset)) {
    ce.ok = false;
    ce.witness = "Frobenius moves " + bad->to_string() + " out of B~";
  } else {
    for (const auto& P : Bgrp) {
      if (P.inf || point_order(BM, P, static_cast<u128>(inst.n)) != static_cast<u128>(inst.n)) continue;
      if (is_maximal_isotropic(BM, inst.n, {P})) {
        rep.isotropic_generator = P;
        break;
      }
    }
    ce.ok = rep.isotropic_generator.has_value();
    ce.witness = ce.ok ? "maximal isotropic <" + rep.isotropic_generator->to_string() + ">" : "no cyclic maximal isotropic subgroup in B~";
  }

  // (f)
  const std::vector<Point> Agrp = generated_subgroup(AM, At);
  const std::set<Point> Aset(Agrp.begin(), Agrp.end());
  rep.a_tilde_order = Aset.size();
  rep.a_tilde_pointwise_rational = pointwise_rational(Aset);
  if (auto bad = unstable_generator(At, Aset)) {
    cf.ok = false;
    cf.witness = "Frobenius moves " + bad->to_string() + " out of A~";
  } else {
    std::set<Point> image;
    for (const auto& P : Agrp) image.insert(evaluate(f, P));
    if (image.size() != Aset.size()) {
      cf.ok = false;
      cf.witness = "f is not injective on A~";
    } else if (image != Bset) {
      cf.ok = false;
      cf.witness = "f(A~) differs from B~";
    } else {
      cf.ok = true;
      cf.witness = "f: A~ -> B~ is a Galois-equivariant isomorphism";
      for (const auto& g : At) {
        if (!(evaluate(f, point_frobenius(g, 1)) == point_frobenius(evaluate(f, g), 1))) {
          cf.ok = false;
          cf.witness = "f o pi != pi o f at " + g.to_string();
          break;
        }
      }
    }
  }

  // (g)
  rep.lambda_multiplier = f.degree;
  cg.ok = true;
  cg.witness = "lambda = deg(f) times the canonical polarization, defined over F";

  rep.overall = std::all_of(rep.clauses.begin(), rep.clauses.end(), [](const ClauseResult& c) { return c.ok; });
  return rep;
}

PhiInstance phi_instance_from_json(const json& j) {
  PhiInstance inst;
  inst.p = j.at("p").get<std::uint64_t>();
  inst.m = j.at("m").get<int>();
  inst.n = j.at("n").get<int>();
  inst.label = j.value("label", "");
  if (inst.m < 1) throw std::invalid_argument("instance: m must be positive");
  const ExtField Fp = ExtField::make(inst.p, 1);
  inst.A = curve_from_json(Fp, j.at("A"));
  inst.B = curve_from_json(Fp, j.at("B"));
  const ExtField P = ExtField::make(inst.p, j.value("field_degree", inst.m));
  const json& fj = j.at("f");
  if (fj.contains("recipe")) {
    inst.f = endo_from_recipe(inst.A, recipe_from_json(fj.at("recipe")));
  } else {
    Isogeny f = identity_isogeny(inst.A);
    for (const auto& kj : fj.value("velu", json::array())) {
      const Point K = point_from_json(P, kj);
      const Curve dom = f.codomain.field() == P ? f.codomain : f.codomain.base_change(common_field(f.codomain.field(), P));
      const Point Kd = K.inf || K.x.field() == dom.field() ? K : lift_point(K, dom.field());
      f = compose(velu(dom, Kd), f);
    }
    if (fj.contains("scale")) f = compose(scaling_isomorphism(f.codomain, fe_from_json(P, fj.at("scale"))), f);
    inst.f = f;
  }
  for (const auto& pj : j.value("A_tilde", json::array())) inst.A_tilde.push_back(point_from_json(P, pj));
  for (const auto& pj : j.value("B_tilde", json::array())) inst.B_tilde.push_back(point_from_json(P, pj));
  return inst;
}

}  // namespace isodesc
