// Deterministic sweeps over small curves, one record per instance.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "isodesc/isogeny.hpp"
#include "isodesc/json_io.hpp"

namespace isodesc {

struct SweepConfig {
  std::uint64_t p_min = 5, p_max = 50;
  std::vector<int> extension_degrees{2, 3};  // m
  std::vector<int> levels{5, 6, 7, 8, 9, 10, 11, 12, 13};
  std::vector<int> isogeny_degrees{2, 3, 5, 7};
  std::vector<int> subfield_levels{1, 2};
  // Curve families: "small" (a, b in [0, coeff_bound]), "j0", "j1728".
  std::vector<std::string> families{"small"};
  int coeff_bound = 2;
  int max_torsion_degree = 12;  // largest [F_p(E[n]) : F_p] used for level structures
  int products = 200;
  int max_factors = 4;
  int lines_per_level = 1;  // stable cyclic subgroups tried per (curve, n)
  int max_map_degree = 400;  // symbolic maps above this degree are not built
  std::uint64_t seed = 1;

  static SweepConfig from_json(const json& j);
  json to_json() const;
  // Throws std::invalid_argument outside p <= 200, q^k <= 10^7 style bounds.
  void validate() const;
};

enum class RecordStatus { Ok, Rejected, Fatal };
std::string to_string(RecordStatus s);

struct ExperimentRecord {
  std::string experiment;
  std::string stream;
  std::string key;  // sort key, unique within (experiment, stream)
  json instance = json::object();
  json hypotheses = json::object();
  bool hypotheses_hold = false;
  bool conclusion = false;
  json witness = json::object();
  RecordStatus status = RecordStatus::Ok;

  json to_json() const;
};

std::vector<ExperimentRecord> run_lemma_defined_sweep(const SweepConfig& cfg);
std::vector<ExperimentRecord> run_theorem_equiv_experiment(const SweepConfig& cfg);
std::vector<ExperimentRecord> run_mink_rigidity_tests(const SweepConfig& cfg);
std::vector<ExperimentRecord> run_descent_experiments(const SweepConfig& cfg);
std::vector<ExperimentRecord> run_isotypic_experiments(const SweepConfig& cfg);
// name in {lemma-defined, equiv, mink, descent, isotypic, all}.
std::vector<ExperimentRecord> run_experiment(const std::string& name, const SweepConfig& cfg);

struct StreamCounts {
  std::size_t total = 0, ok = 0, rejected = 0, fatal = 0, hypotheses_hold = 0;
};

struct ReportSummary {
  std::map<std::string, StreamCounts> per_stream;  // "experiment/stream"
  std::size_t records = 0, fatal = 0;
  std::string table;
  int exit_code() const { return fatal == 0 ? 0 : 1; }
};

// Sorts records by (experiment, stream, key), writes JSON lines to path and
// returns counts with a printable table.
ReportSummary emit_report(std::vector<ExperimentRecord> records, const std::string& path);
ReportSummary summarize(const std::vector<ExperimentRecord>& records);

// ISODESC_THREADS, default 1.
int thread_count_from_env();

// Frobenius-stable cyclic subgroups of order n in E[n], E over F_p, with the
// generator descended to the smallest field containing the subgroup's points.
struct LevelLine {
  Point gen;
  int field_degree = 1;  // points lie in E(F_{p^field_degree})
  std::int64_t eigenvalue = 1;
  std::array<std::int64_t, 2> coords{};  // in the torsion basis
};
std::vector<LevelLine> stable_lines(const Curve& E, int n, int max_degree);

// f o pi_A == pi_B o f on A[l] for levels l until prod(l)^2 > 4 deg(f) p;
// A and B over F_p.  Returns nullopt when no feasible set of levels exists.
struct TorsionCommutation {
  bool commutes = false;
  std::vector<int> levels;
};
std::optional<TorsionCommutation> commutes_on_torsion(const Isogeny& f, int max_degree);

}  // namespace isodesc
