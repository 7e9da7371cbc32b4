// Python bindings.  Structured results cross the boundary as JSON and come
// back as plain dicts and lists.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isodesc/curve.hpp"
#include "isodesc/experiments.hpp"
#include "isodesc/frobenius_algebra.hpp"
#include "isodesc/isogeny.hpp"
#include "isodesc/json_io.hpp"
#include "isodesc/phi_checker.hpp"
#include "isodesc/quaternion.hpp"

namespace py = pybind11;
using namespace isodesc;

namespace {

py::object to_py(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

json from_py(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::int_ big_int(i128 v) { return py::int_(py::str(to_string(v))); }

Rational rational_from(const py::handle& h) {
  if (py::isinstance<py::int_>(h)) return Rational(py::str(h).cast<std::string>());
  return Rational(h.cast<std::string>());
}

Quaternion quaternion_from(std::int64_t p, const py::sequence& s) {
  if (py::len(s) != 4) throw py::value_error("quaternion needs 4 coordinates (1, i, j, ij)");
  return Quaternion{p, rational_from(s[0]), rational_from(s[1]), rational_from(s[2]), rational_from(s[3])};
}

py::tuple quaternion_tuple(const Quaternion& q) {
  return py::make_tuple(rational_string(q.a), rational_string(q.b), rational_string(q.c), rational_string(q.d));
}

py::dict curve_info(std::uint64_t p, std::int64_t a, std::int64_t b, int k) {
  const Curve E = Curve::make(p, k, a, b);
  const GroupStructure gs = group_structure(E);
  py::dict d;
  d["count"] = big_int(static_cast<i128>(count_points(E)));
  d["trace"] = big_int(frobenius_trace(E));
  d["structure"] = py::make_tuple(big_int(static_cast<i128>(gs.a)), big_int(static_cast<i128>(gs.ab)));
  d["supersingular"] = is_supersingular(E);
  return d;
}

std::vector<Curve> curves_from(std::uint64_t p, int k, const std::vector<std::pair<std::int64_t, std::int64_t>>& ab) {
  std::vector<Curve> out;
  for (const auto& [a, b] : ab) out.push_back(Curve::make(p, k, a, b));
  return out;
}

}  // namespace

PYBIND11_MODULE(isogeny_descent, m) {
  m.doc() = "Isogenies, Frobenius and level structures over finite fields";

  m.def("count_points", [](std::uint64_t p, std::int64_t a, std::int64_t b, int k) {
    return big_int(static_cast<i128>(count_points(Curve::make(p, k, a, b))));
  }, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("k") = 1);

  m.def("frobenius_trace", [](std::uint64_t p, std::int64_t a, std::int64_t b, int k) {
    return big_int(frobenius_trace(Curve::make(p, k, a, b)));
  }, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("k") = 1);

  m.def("trace_over_extension", [](std::int64_t t, std::uint64_t q, int m) {
    return big_int(trace_over_extension(t, q, m));
  }, py::arg("t"), py::arg("q"), py::arg("m"), "trace of pi^m from t = tr(pi) and q");

  m.def("curve_info", &curve_info, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("k") = 1);

  m.def("torsion_field_degree", [](std::uint64_t p, std::int64_t a, std::int64_t b, int n, int k) {
    return torsion_field_degree(Curve::make(p, k, a, b), n);
  }, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("k") = 1);

  m.def("torsion_basis", [](std::uint64_t p, std::int64_t a, std::int64_t b, int n, int k) {
    const TorsionBasis B = torsion_basis(Curve::make(p, k, a, b), n);
    json out{{"n", n},
             {"field_degree", B.curve.field().degree()},
             {"P", point_to_json(B.P)},
             {"Q", point_to_json(B.Q)},
             {"zeta", fe_to_json(B.zeta)}};
    return to_py(out);
  }, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("k") = 1);

  m.def("frobenius_matrix", [](std::uint64_t p, std::int64_t a, std::int64_t b, int n, int j) {
    const Mat2 M = frobenius_matrix(torsion_basis(Curve::make(p, 1, a, b), n), j);
    return std::vector<std::vector<std::int64_t>>{{M.m[0], M.m[1]}, {M.m[2], M.m[3]}};
  }, py::arg("p"), py::arg("a"), py::arg("b"), py::arg("n"), py::arg("j") = 1);

  m.def("velu", [](const py::dict& kernel) {
    const json in = from_py(kernel);
    const auto p = in.at("p").get<std::uint64_t>();
    const int k = in.value("k", 1);
    const Curve E = Curve::make(p, k, in.at("a").get<std::int64_t>(), in.at("b").get<std::int64_t>());
    const ExtField W = ExtField::make(p, in.value("kernel_field_degree", k));
    const Point K = Point::affine(fe_from_json(W, in.at("kernel_x")), fe_from_json(W, in.at("kernel_y")));
    const Isogeny f = velu(E, K);
    json defined = json::array();
    const int w = f.field().degree();
    for (int j = 1; j <= w; ++j) {
      if (w % j != 0) continue;
      const FieldOfDefinitionReport rep = field_of_definition(f, j);
      if (rep.coeff_test && rep.commutation_test) defined.push_back(j);
    }
    return to_py(json{{"degree", int_to_json(static_cast<i128>(f.degree))}, {"codomain", curve_to_json(f.codomain)}, {"defined_over", defined}});
  }, py::arg("kernel"), "kernel: {p, k, a, b, kernel_x, kernel_y[, kernel_field_degree]}");

  m.def("quat_example", [](std::int64_t p, std::int64_t n) {
    return to_py(conjugation_example_to_json(conjugation_example(p, n)));
  }, py::arg("p"), py::arg("n"));

  m.def("quat_mul", [](std::int64_t p, const py::sequence& x, const py::sequence& y) {
    return quaternion_tuple(quaternion_from(p, x) * quaternion_from(p, y));
  }, py::arg("p"), py::arg("x"), py::arg("y"));

  m.def("conjugate", [](std::int64_t p, const py::sequence& f, const py::sequence& x) {
    return quaternion_tuple(conjugation_map(quaternion_from(p, f), quaternion_from(p, x)));
  }, py::arg("p"), py::arg("f"), py::arg("x"), "f^-1 x f in (-1, -p)/Q");

  m.def("equivalence_report", [](std::int64_t p, const py::sequence& f) {
    const EquivalenceReport r = equivalence_report(quaternion_from(p, f));
    py::dict d;
    d["a"] = r.a;
    d["b"] = r.b;
    d["c"] = r.c;
    d["d"] = r.d;
    d["e"] = r.e;
    d["f"] = r.f;
    d["all_equal"] = r.all_equal();
    return d;
  }, py::arg("p"), py::arg("f"));

  m.def("torsion_representation", [](std::int64_t p, int n, const py::sequence& x) {
    const Mat2 M = torsion_representation(p, n, quaternion_from(p, x));
    return std::vector<std::vector<std::int64_t>>{{M.m[0], M.m[1]}, {M.m[2], M.m[3]}};
  }, py::arg("p"), py::arg("n"), py::arg("x"));

  m.def("tate_isogenous", [](std::uint64_t p, std::pair<std::int64_t, std::int64_t> e1, std::pair<std::int64_t, std::int64_t> e2, int j) {
    return tate_isogenous(Curve::make(p, 1, e1.first, e1.second), Curve::make(p, 1, e2.first, e2.second), j);
  }, py::arg("p"), py::arg("e1"), py::arg("e2"), py::arg("j") = 1);

  m.def("isotypic_partition", [](std::uint64_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& factors, int j) {
    return isotypic_partition(curves_from(p, 1, factors), j);
  }, py::arg("p"), py::arg("factors"), py::arg("j"));

  m.def("check_phi", [](const py::dict& instance) {
    const PhiInstance inst = phi_instance_from_json(from_py(instance));
    json out = check_phi(inst).to_json();
    if (!inst.label.empty()) out["label"] = inst.label;
    return to_py(out);
  }, py::arg("instance"));

  m.def("run_experiment", [](const std::string& name, const py::object& config) {
    const SweepConfig cfg = config.is_none() ? SweepConfig{} : SweepConfig::from_json(from_py(config));
    cfg.validate();
    std::vector<ExperimentRecord> records;
    {
      py::gil_scoped_release release;
      records = run_experiment(name, cfg);
    }
    std::sort(records.begin(), records.end(), [](const ExperimentRecord& x, const ExperimentRecord& y) {
      return std::tie(x.experiment, x.stream, x.key) < std::tie(y.experiment, y.stream, y.key);
    });
    const ReportSummary s = summarize(records);
    py::list recs;
    for (const ExperimentRecord& r : records) recs.append(to_py(r.to_json()));
    py::dict d;
    d["records"] = recs;
    d["fatal"] = s.fatal;
    d["exit_code"] = s.exit_code();
    d["table"] = s.table;
    return d;
  }, py::arg("name"), py::arg("config") = py::none());
}
