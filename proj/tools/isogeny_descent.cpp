// isogeny-descent: command-line front end for the library and the sweeps.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "isodesc/curve.hpp"
#include "isodesc/experiments.hpp"
#include "isodesc/isogeny.hpp"
#include "isodesc/json_io.hpp"
#include "isodesc/phi_checker.hpp"
#include "isodesc/quaternion.hpp"

using namespace isodesc;

namespace {

json read_json_file(const std::string& path) {
  if (path == "-") return json::parse(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

json curve_record(const Curve& E, std::uint64_t p, int k, std::int64_t a, std::int64_t b) {
  const GroupStructure gs = group_structure(E);
  return json{{"p", p},
              {"k", k},
              {"a", a},
              {"b", b},
              {"count", int_to_json(static_cast<i128>(count_points(E)))},
              {"trace", int_to_json(frobenius_trace(E))},
              {"structure", json::array({int_to_json(static_cast<i128>(gs.a)), int_to_json(static_cast<i128>(gs.ab))})}};
}

struct CurveArgs {
  std::uint64_t p = 0;
  int k = 1;
  std::int64_t a = 0, b = 0;
};

void add_curve_options(CLI::App* app, CurveArgs& c) {
  app->add_option("--p", c.p, "characteristic")->required();
  app->add_option("--k", c.k, "extension degree")->default_val(1);
  app->add_option("--a", c.a, "coefficient a (in F_p)")->required();
  app->add_option("--b", c.b, "coefficient b (in F_p)")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Isogenies, Frobenius and level structures over finite fields"};
  app.require_subcommand(1);

  CurveArgs cc, sc, tc;
  int tn = 2;
  auto* count = app.add_subcommand("count", "point count and trace");
  add_curve_options(count, cc);
  auto* structure = app.add_subcommand("structure", "group structure Z/a x Z/ab with generators");
  add_curve_options(structure, sc);
  auto* tbasis = app.add_subcommand("torsion-basis", "basis of E[n] over its field of definition");
  add_curve_options(tbasis, tc);
  tbasis->add_option("--n", tn, "level")->required();

  std::string velu_input;
  auto* velu_cmd = app.add_subcommand("velu", "isogeny with a given kernel point");
  velu_cmd->add_option("--input", velu_input, "JSON {p, k, a, b, kernel_x, kernel_y[, kernel_field_degree]}; '-' for stdin")->required();

  std::int64_t qp = 11, qn = 1;
  auto* quat = app.add_subcommand("quat-example", "conjugation by 1 + n i in (-1, -p)/Q");
  quat->add_option("--p", qp, "prime, 3 mod 4")->required();
  quat->add_option("--n", qn, "n >= 0")->required();

  std::string phi_path;
  auto* phi = app.add_subcommand("check-phi", "evaluate the level-structure hypotheses on an instance");
  phi->add_option("--instance", phi_path, "instance JSON file")->required();

  std::string exp_name, exp_config, exp_out;
  auto* exp = app.add_subcommand("experiment", "run a sweep and write a JSON-lines report");
  exp->add_option("--name", exp_name, "sweep name")
      ->required()
      ->check(CLI::IsMember({"lemma-defined", "equiv", "mink", "descent", "isotypic", "all"}));
  exp->add_option("--config", exp_config, "config JSON (defaults when omitted)");
  exp->add_option("--out", exp_out, "report path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (count->parsed() || structure->parsed() || tbasis->parsed()) {
      const CurveArgs& c = count->parsed() ? cc : structure->parsed() ? sc : tc;
      const Curve E = Curve::make(c.p, c.k, c.a, c.b);
      json out = curve_record(E, c.p, c.k, c.a, c.b);
      if (structure->parsed()) {
        const GroupStructure gs = group_structure(E);
        out["generators"] = json::array({point_to_json(gs.g1), point_to_json(gs.g2)});
      }
      if (tbasis->parsed()) {
        const TorsionBasis B = torsion_basis(E, tn);
        out["n"] = tn;
        out["field_degree"] = B.curve.field().degree();
        out["P"] = point_to_json(B.P);
        out["Q"] = point_to_json(B.Q);
        out["zeta"] = fe_to_json(B.zeta);
      }
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (velu_cmd->parsed()) {
      const json in = read_json_file(velu_input);
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
      json out{{"degree", int_to_json(static_cast<i128>(f.degree))}, {"codomain", curve_to_json(f.codomain)}, {"defined_over", defined}};
      std::cout << out.dump() << "\n";
      return 0;
    }
    if (quat->parsed()) {
      std::cout << conjugation_example_to_json(conjugation_example(qp, qn)).dump() << "\n";
      return 0;
    }
    if (phi->parsed()) {
      const PhiInstance inst = phi_instance_from_json(read_json_file(phi_path));
      json out = check_phi(inst).to_json();
      if (!inst.label.empty()) out["label"] = inst.label;
      std::cout << out.dump(2) << "\n";
      return 0;
    }
    if (exp->parsed()) {
      const SweepConfig cfg = exp_config.empty() ? SweepConfig{} : SweepConfig::from_json(read_json_file(exp_config));
      cfg.validate();
      const ReportSummary s = emit_report(run_experiment(exp_name, cfg), exp_out);
      std::cout << s.table;
      return s.exit_code();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
