#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "isodesc/experiments.hpp"
#include "isodesc/isogeny.hpp"

using namespace isodesc;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) { return std::filesystem::temp_directory_path() / ("isodesc_test_" + name); }

}  // namespace

TEST_CASE("sweep config round trip and validation") {
  SweepConfig c;
  CHECK_NOTHROW(c.validate());
  const SweepConfig d = SweepConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());

  CHECK_THROWS(SweepConfig::from_json(json{{"p_maximum", 20}}));
  SweepConfig bad = c;
  bad.p_max = 400;
  CHECK_THROWS(bad.validate());
  bad = c;
  bad.isogeny_degrees = {4};
  CHECK_THROWS(bad.validate());
  bad = c;
  bad.p_min = 3;
  CHECK_THROWS(bad.validate());
}

TEST_CASE("report exit codes") {
  const auto empty = temp_path("empty.jsonl");
  const ReportSummary s0 = emit_report({}, empty.string());
  CHECK(s0.exit_code() == 0);
  CHECK(slurp(empty).empty());

  ExperimentRecord ok{"demo", "s", "b", json::object(), json::object(), true, true, json::object(), RecordStatus::Ok};
  ExperimentRecord bad{"demo", "s", "a", json::object(), json::object(), true, false, json::object(), RecordStatus::Fatal};
  const auto one = temp_path("one.jsonl");
  const ReportSummary s1 = emit_report({ok, bad}, one.string());
  CHECK(s1.exit_code() != 0);
  CHECK(s1.fatal == 1);
  CHECK(s1.table.find("demo/s") != std::string::npos);
  // Sorted by key: "a" first.
  const std::string text = slurp(one);
  CHECK(text.find("\"key\":\"a\"") < text.find("\"key\":\"b\""));
  std::filesystem::remove(empty);
  std::filesystem::remove(one);
}

TEST_CASE("stable lines are Frobenius eigenlines of exact order n") {
  for (auto [p, a, b, n] : {std::tuple<std::uint64_t, std::int64_t, std::int64_t, int>{11, 1, 0, 5}, {13, 2, 3, 5}, {11, 1, 0, 3}}) {
    const Curve E = Curve::make(p, 1, a, b);
    const auto lines = stable_lines(E, n, 12);
    REQUIRE_FALSE(lines.empty());
    for (const auto& line : lines) {
      const ExtField L = line.gen.x.field();
      const Curve EL = E.base_change(L);
      CHECK(point_order(EL, line.gen, static_cast<u128>(n)) == static_cast<u128>(n));
      CHECK(line.gen.x.in_subfield(line.field_degree));
      CHECK(line.gen.y.in_subfield(line.field_degree));
      CHECK(point_frobenius(line.gen, 1) == point_mul(EL, line.gen, line.eigenvalue));
    }
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i - 1].field_degree <= lines[i].field_degree);
  }
}

TEST_CASE("torsion commutation separates rational and irrational automorphisms") {
  // p = 11: i on y^2 = x^3 + x is not defined over F_11.  p = 13: it is.
  const Curve E11 = Curve::make(11, 1, 1, 0);
  const auto t11 = commutes_on_torsion(automorphism(E11, AutKind::I), 12);
  REQUIRE(t11);
  CHECK_FALSE(t11->commutes);
  const Curve E13 = Curve::make(13, 1, 1, 0);
  const auto t13 = commutes_on_torsion(automorphism(E13, AutKind::I), 12);
  REQUIRE(t13);
  CHECK(t13->commutes);
  const auto id = commutes_on_torsion(identity_isogeny(E11), 12);
  REQUIRE(id);
  CHECK(id->commutes);
}

TEST_CASE("sweeps are deterministic") {
  SweepConfig c;
  c.p_max = 13;
  c.levels = {5};
  c.products = 20;
  const auto r1 = summarize(run_experiment("isotypic", c));
  const auto r2 = summarize(run_experiment("isotypic", c));
  CHECK(r1.table == r2.table);
  CHECK(r1.fatal == 0);
}
