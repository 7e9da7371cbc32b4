// Acceptance suite: one PASS/FAIL line per criterion.
//
// AC1-AC3 run in process.  AC4-AC9 run the five sweeps twice through the
// isogeny-descent CLI, each invocation in a fresh process, and read the
// JSON-lines reports back.
#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isodesc/curve.hpp"
#include "isodesc/json_io.hpp"
#include "isodesc/quaternion.hpp"

using namespace isodesc;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool all_passed = true;

void report(const std::string& id, bool pass, const std::string& detail) {
  if (!pass) all_passed = false;
  std::cout << id << (pass ? " PASS " : " FAIL ") << detail << std::endl;
}

std::string fmt_s(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

// ---------------------------------------------------------------------------
// AC1: f = 1 + n i, phi(j) = f^{-1} j f against ((1 - n^2) j - 2n ij) / (n^2 + 1).

void ac1() {
  const auto t0 = Clock::now();
  int cases = 0, good = 0;
  std::string first_bad;
  for (std::int64_t p : {7, 11, 19, 23})
    for (std::int64_t n = 1; n <= 7; ++n) {
      ++cases;
      const Quaternion f{p, 1, n, 0, 0};
      const Quaternion phi_j = conjugation_map(f, Quaternion::j(p));
      const Rational den = 1 + n * n;
      const Rational c = Rational(1 - n * n) / den, d = Rational(-2 * n) / den;
      const Quaternion expected{p, 0, 0, c, d};
      // (c j + d ij)^2 = -p (c^2 + d^2) since j^2 = (ij)^2 = -p and j ij = -ij j.
      const Rational sq_closed = -Rational(p) * (c * c + d * d);
      const Quaternion sq = phi_j * phi_j;
      const bool square_ok = sq.is_scalar() && sq.a == -Rational(p) && sq_closed == -Rational(p);
      // Q + Q phi(j) = Q + Q j iff the ij coordinate vanishes.
      const bool distinct = !QuadraticSubfield(phi_j).contains(Quaternion::j(p)) && d != 0;
      const ConjugationExample r = conjugation_example(p, n);
      const bool report_ok = r.phi_j == expected && r.matches_closed_form && r.square_is_minus_p && r.subfields_distinct;
      if (phi_j == expected && square_ok && distinct && report_ok) ++good;
      else if (first_bad.empty()) first_bad = " first failure p=" + std::to_string(p) + " n=" + std::to_string(n);
    }
  const double s = seconds_since(t0);
  report("AC1", good == cases && s < 1.0,
         "quaternion closed form, phi(j)^2 = -p, distinct subfields: " + std::to_string(good) + "/" + std::to_string(cases) +
             " exact (tolerance: exact rational equality); " + fmt_s(s) + " (limit 1 s)" + first_bad);
}

// ---------------------------------------------------------------------------
// AC2: matrices of i and j on E[n] for y^2 = x^3 + x.

void ac2() {
  const auto t0 = Clock::now();
  int cases = 0, good = 0;
  std::string first_bad;
  for (std::int64_t p : {7, 11, 19, 23})
    for (int n : {3, 5}) {
      ++cases;
      const Mat2 Mi = torsion_representation(p, n, Quaternion::i(p));
      const Mat2 Mj = torsion_representation(p, n, Quaternion::j(p));
      // j is the p-power Frobenius; compare with the Frobenius matrix on an
      // independently built basis through the trace and determinant.
      const TorsionBasis B = torsion_basis(Curve::make(static_cast<std::uint64_t>(p), 1, 1, 0), n);
      const Mat2 F = frobenius_matrix(B, 1);
      const bool rel = Mi * Mi == Mat2::scalar(n, -1) && Mj * Mj == Mat2::scalar(n, -p) && Mj * Mi == -(Mi * Mj);
      const bool frob = F.trace() == Mj.trace() && F.det() == Mj.det() && F * F == Mat2::scalar(n, -p);
      if (rel && frob) ++good;
      else if (first_bad.empty()) first_bad = " first failure p=" + std::to_string(p) + " n=" + std::to_string(n);
    }
  const double s = seconds_since(t0);
  report("AC2", good == cases && s < 5.0,
         "M_i^2 = -I, M_j^2 = -pI, M_j M_i = -M_i M_j on E[3], E[5]: " + std::to_string(good) + "/" + std::to_string(cases) +
             " (tolerance: exact mod n); " + fmt_s(s) + " (limit 5 s)" + first_bad);
}

// ---------------------------------------------------------------------------
// AC3: point counts.

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Independent count over F_p by Euler's criterion.
std::uint64_t euler_count(std::uint64_t p, std::uint64_t a, std::uint64_t b) {
  std::uint64_t n = 1;
  for (std::uint64_t x = 0; x < p; ++x) {
    const std::uint64_t r = (x * x % p * x + a * x + b) % p;
    if (r == 0) n += 1;
    else if (powmod(r, (p - 1) / 2, p) == 1) n += 2;
  }
  return n;
}

bool is_small_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

void ac3() {
  const auto t0 = Clock::now();
  int ss_cases = 0, ss_good = 0;
  for (std::uint64_t p = 5; p <= 199; ++p) {
    if (!is_small_prime(p) || p % 4 != 3) continue;
    ++ss_cases;
    const Curve E = Curve::make(p, 1, 1, 0);
    if (count_points(E) == p + 1 && euler_count(p, 1, 0) == p + 1) ++ss_good;
  }
  // Every prime power q = p^k and every m >= 2 with q^m <= 10^4.  All curves
  // over F_p for p <= 23; a fixed coefficient grid above that and over F_{p^k}.
  int rec_cases = 0, rec_good = 0;
  std::set<std::pair<std::uint64_t, int>> fields;
  for (std::uint64_t p = 2; p <= 100; ++p) {
    if (!is_small_prime(p) || p < 5) continue;
    std::uint64_t q = p;
    for (int k = 1; q * q <= 10000; ++k, q *= p) {
      for (int m = 2; ; ++m) {
        double qm = 1;
        for (int i = 0; i < m; ++i) qm *= static_cast<double>(q);
        if (qm > 10000) break;
        fields.insert({p, k});
        std::vector<std::pair<std::int64_t, std::int64_t>> coeffs;
        if (k == 1 && p <= 23) {
          for (std::int64_t a = 0; a < static_cast<std::int64_t>(p); ++a)
            for (std::int64_t b = 0; b < static_cast<std::int64_t>(p); ++b) coeffs.push_back({a, b});
        } else {
          for (std::int64_t a = 0; a < 4; ++a)
            for (std::int64_t b = 0; b < 4; ++b) coeffs.push_back({a, b});
        }
        for (auto [a, b] : coeffs) {
          const std::int64_t P = static_cast<std::int64_t>(p);
          if ((4 * a * a % P * a + 27 * b * b) % P == 0) continue;
          const Curve E = Curve::make(p, k, a, b);
          ++rec_cases;
          const u128 via_recurrence = count_over_extension(E, m);
          const u128 exhaustive = count_points(Curve::make(p, k * m, a, b));
          bool ok = via_recurrence == exhaustive;
          if (k == 1) ok = ok && count_points(E) == euler_count(p, static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
          if (ok) ++rec_good;
        }
      }
    }
  }
  const double s = seconds_since(t0);
  report("AC3", ss_good == ss_cases && rec_good == rec_cases && s < 30.0,
         "#E(F_p) = p + 1 for y^2 = x^3 + x, p = 3 mod 4, 7 <= p <= 199: " + std::to_string(ss_good) + "/" + std::to_string(ss_cases) +
             "; trace recurrence = exhaustive count for q^m <= 10^4: " + std::to_string(rec_good) + "/" + std::to_string(rec_cases) +
             " curves over " + std::to_string(fields.size()) + " base fields (tolerance: exact); " + fmt_s(s) + " (limit 30 s)");
}

// ---------------------------------------------------------------------------
// Sweeps through the CLI.

const std::vector<std::string> kSweeps{"lemma-defined", "equiv", "mink", "descent", "isotypic"};

struct SweepRun {
  std::map<std::string, double> seconds;
  std::map<std::string, int> exit_codes;
  double total = 0;
};

SweepRun run_sweeps(const std::string& cli, const fs::path& dir) {
  fs::create_directories(dir);
  SweepRun run;
  for (const auto& name : kSweeps) {
    const fs::path out = dir / (name + ".jsonl");
    const std::string cmd = "\"" + cli + "\" experiment --name " + name + " --out \"" + out.string() + "\" > \"" + (dir / (name + ".summary")).string() + "\"";
    const auto t0 = Clock::now();
    const int rc = std::system(cmd.c_str());
    run.seconds[name] = seconds_since(t0);
    run.exit_codes[name] = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    run.total += run.seconds[name];
  }
  return run;
}

std::vector<json> read_records(const fs::path& path) {
  std::vector<json> out;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_fatal(const std::vector<json>& recs) {
  std::size_t n = 0;
  for (const auto& r : recs)
    if (r.at("status") == "fatal") ++n;
  return n;
}

std::string timing(const SweepRun& run, const std::string& name, double limit) {
  return fmt_s(run.seconds.at(name)) + " (limit " + fmt_s(limit) + ")";
}

void ac4_to_ac8(const SweepRun& run, const fs::path& dir) {
  {
    const auto recs = read_records(dir / "lemma-defined.jsonl");
    std::size_t total = 0, agree = 0;
    for (const auto& r : recs) {
      if (!r.at("hypotheses").contains("oracles_agree")) continue;
      ++total;
      if (r.at("hypotheses").at("oracles_agree").get<bool>()) ++agree;
    }
    report("AC4", total >= 500 && agree == total && count_fatal(recs) == 0 && run.seconds.at("lemma-defined") < 120,
           "coefficient vs commutation oracle agreement: " + std::to_string(agree) + "/" + std::to_string(total) +
               " isogenies (need >= 500, tolerance: zero disagreements); " + timing(run, "lemma-defined", 120));

    std::size_t checked = 0, failures = 0;
    for (const auto& r : recs) {
      const json& pw = r.at("witness").at("pairing");
      if (pw.at("n").get<int>() == 0) continue;
      ++checked;
      if (!pw.at("ok").get<bool>() || !pw.at("failures").empty()) ++failures;
    }
    report("AC5", checked > 0 && failures == 0 && run.seconds.at("lemma-defined") < 60,
           "pairing equivariance, deg f compatibility, nondegeneracy on " + std::to_string(checked) + " (basis, isogeny) pairs: " +
               std::to_string(failures) + " failures (tolerance: zero); sweep " + timing(run, "lemma-defined", 60));
  }
  {
    const auto recs = read_records(dir / "mink.jsonl");
    std::size_t rigidity = 0, counterexamples = 0, witnesses = 0;
    std::set<std::pair<std::string, int>> covered;  // (j-invariant, n)
    for (const auto& r : recs) {
      const json& in = r.at("instance");
      if (r.at("stream") == "rigidity") {
        ++rigidity;
        if (r.at("hypotheses_hold").get<bool>() || r.at("status") == "fatal") ++counterexamples;
        const std::string jinv = in.at("a").get<std::int64_t>() == 0 ? "0" : in.at("b").get<std::int64_t>() == 0 ? "1728" : "other";
        covered.insert({jinv, in.at("n").get<int>()});
      } else if (r.at("stream") == "sharpness") {
        const json& w = r.at("witness");
        if (r.at("status") == "ok" && r.at("hypotheses_hold").get<bool>() && in.at("n") == 4 && in.at("alpha") == "-1" &&
            w.at("B_tilde_order") == 4 && !w.at("B_tilde_is_Z4_power").get<bool>())
          ++witnesses;
      }
    }
    bool full = true;
    for (const char* jinv : {"0", "1728"})
      for (int n = 5; n <= 13; ++n) full = full && covered.contains({jinv, n});
    report("AC6", counterexamples == 0 && full && witnesses > 0 && count_fatal(recs) == 0 && run.seconds.at("mink") < 60,
           "rigidity: " + std::to_string(counterexamples) + " counterexamples in " + std::to_string(rigidity) +
               " instances (j = 0, 1728; n = 5..13 " + (full ? "covered" : "NOT covered") + "); sharpness witnesses at n = 4: " +
               std::to_string(witnesses) + "; " + timing(run, "mink", 60));
  }
  {
    const auto recs = read_records(dir / "descent.jsonl");
    std::size_t passing = 0, trace_equal = 0, violations = 0;
    std::map<std::string, std::size_t> hyp_true;
    for (const auto& r : recs) {
      const std::string stream = r.at("stream");
      if (stream == "phi") {
        const json& in = r.at("instance");
        const int m = in.at("m").get<int>();
        if (r.at("hypotheses_hold").get<bool>() && in.at("n").get<int>() >= 5 && (m == 2 || m == 3)) {
          ++passing;
          if (r.at("witness").at("t_A") == r.at("witness").at("t_B")) ++trace_equal;
        }
      } else if (r.at("hypotheses_hold").get<bool>()) {
        ++hyp_true[stream];
        if (!r.at("conclusion").get<bool>()) ++violations;
      }
    }
    std::string streams;
    for (const char* s : {"cor-m-le-3", "thm-zeta", "thm-prime-m", "n-not-dividing-m2"})
      streams += std::string(streams.empty() ? "" : ", ") + s + "=" + std::to_string(hyp_true[s]);
    report("AC7", passing >= 100 && trace_equal == passing && violations == 0 && count_fatal(recs) == 0 && run.seconds.at("descent") < 180,
           "Phi(n)-passing instances (n >= 5, m in {2,3}): " + std::to_string(passing) + " (need >= 100), trace equality " +
               std::to_string(trace_equal) + "/" + std::to_string(passing) + "; hypothesis-true records " + streams + ", violations " +
               std::to_string(violations) + " (tolerance: zero); " + timing(run, "descent", 180));
  }
  {
    const auto recs = read_records(dir / "isotypic.jsonl");
    std::size_t products = 0, laws = 0;
    for (const auto& r : recs) {
      if (r.at("stream") != "products") continue;
      ++products;
      const json& w = r.at("witness");
      if (w.at("coarsening").get<bool>() && w.at("count_equality_forces_equality").get<bool>() && r.at("status") == "ok") ++laws;
    }
    report("AC8", products >= 200 && laws == products && count_fatal(recs) == 0 && run.seconds.at("isotypic") < 60,
           "coarsening and count-equality laws on random products: " + std::to_string(laws) + "/" + std::to_string(products) +
               " (need >= 200, tolerance: zero failures); " + timing(run, "isotypic", 60));
  }
}

void ac9(const SweepRun& a, const SweepRun& b, const fs::path& da, const fs::path& db, double in_process) {
  std::string differing;
  std::size_t bytes = 0, fatal = 0;
  for (const auto& name : kSweeps) {
    const std::string x = read_bytes(da / (name + ".jsonl")), y = read_bytes(db / (name + ".jsonl"));
    bytes += x.size();
    fatal += count_fatal(read_records(da / (name + ".jsonl")));
    if (x.empty() || x != y) differing += " " + name;
  }
  const double total = a.total + b.total + 2 * in_process;
  int nonzero = 0;
  for (const auto* run : {&a, &b})
    for (const auto& [name, rc] : run->exit_codes)
      if (rc != 0) ++nonzero;
  report("AC9", differing.empty() && total < 600,
         "two full runs byte-identical over " + std::to_string(bytes) + " bytes" + (differing.empty() ? "" : "; DIFFER:" + differing) +
             "; 2 x full suite " + fmt_s(total) + " (limit 600 s; run 1 " + fmt_s(a.total) + ", run 2 " + fmt_s(b.total) + ")" +
             "; fatal records " + std::to_string(fatal) + ", nonzero CLI exits " + std::to_string(nonzero));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance suite"};
  std::string cli, workdir = "acceptance-work";
  bool quick = false;
  app.add_option("--cli", cli, "path to the isogeny-descent executable")->required();
  app.add_option("--workdir", workdir, "directory for sweep reports");
  app.add_flag("--quick", quick, "only the in-process criteria AC1-AC3");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto t0 = Clock::now();
    ac1();
    ac2();
    ac3();
    const double in_process = seconds_since(t0);
    if (!quick) {
      const fs::path da = fs::path(workdir) / "run1", db = fs::path(workdir) / "run2";
      const SweepRun a = run_sweeps(cli, da);
      ac4_to_ac8(a, da);
      const SweepRun b = run_sweeps(cli, db);
      ac9(a, b, da, db, in_process);
    }
  } catch (const std::exception& e) {
    std::cout << "acceptance aborted: " << e.what() << std::endl;
    return 2;
  }
  return all_passed ? 0 : 1;
}
