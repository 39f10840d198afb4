// Acceptance gates. Prints one PASS/FAIL line per criterion; exit 0 iff all
// selected criteria pass. `--criterion N` runs one gate, `--verbose` adds
// witnesses and per-mutant lines.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gaslie/report.hpp"

using namespace gaslie;

namespace {

// Pinned tolerances.
constexpr double kAlgebraSeconds = 1.0;
constexpr double kCatalogSeconds = 30.0;
constexpr double kZeroTol = 1e-9;
constexpr int kZeroSamples = 100;
constexpr double kRankTol = 1e-8;
constexpr int kAutomorphismVectors = 50;
constexpr double kTraceTol = 1e-6;
constexpr double kOrderLo = 3.7, kOrderHi = 4.3;
constexpr double kQuadricTol = 1e-10;
constexpr double kVolumeTol = 1e-12;
constexpr double kCommonStartTol = 1e-10;
constexpr int kMinMutants = 10;

struct Outcome {
  bool passed = false;
  std::string summary;
  std::vector<std::string> details;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

VerifyOptions verify_options() {
  VerifyOptions o;
  o.zero.tolerance = kZeroTol;
  o.zero.samples = kZeroSamples;
  o.rank_tolerance = kRankTol;
  return o;
}

Outcome algebra_gate() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  Section s = algebra_section(l12_table());
  double dt = seconds_since(t0);
  const int triples = s.body["triples_checked"].get<int>();
  o.passed = s.passed && triples == 220 && dt < kAlgebraSeconds;
  o.summary = std::to_string(triples) + " triples, " + std::to_string(s.body["jacobi_failures"].size()) +
              " Jacobi failures, " + std::to_string(s.body["realization_differences"].size()) +
              " differences between table and realization, " + fmt(dt) + " s (limit " + fmt(kAlgebraSeconds) + " s)";
  if (!s.passed) o.details.push_back(s.first_failure);
  return o;
}

Outcome automorphism_gate() {
  Outcome o;
  Section s = automorphism_section(kDefaultSeed, kAutomorphismVectors);
  o.passed = s.passed && s.body["maps"].size() == 8;
  o.summary = std::to_string(s.body["maps"].size()) + " maps, " + std::to_string(kAutomorphismVectors) +
              " vector pairs each, homomorphism and exact inverse";
  if (!s.passed) o.details.push_back(s.first_failure);
  return o;
}

Outcome catalog_gate(int jobs) {
  Outcome o;
  const Catalog& cat = Catalog::builtin();
  auto ids = cat.resolve("all");
  std::set<std::string> items;
  for (const auto& id : ids) items.insert(cat.find(id).item());
  auto t0 = std::chrono::steady_clock::now();
  Section s = catalog_section(cat, ids, verify_options(), jobs);
  double dt = seconds_since(t0);
  int gaps = 0;
  for (const auto& e : s.body["entries"]) gaps += static_cast<int>(e["simplifier_gaps"].size());
  o.passed = s.passed && items.size() == 20 && dt < kCatalogSeconds;
  o.summary = std::to_string(items.size()) + " items, " + std::to_string(ids.size()) + " entries, " +
              std::to_string(s.body["sample_count"].get<int>()) + " parameter samples, closure, 16 annihilations " +
              "(numeric tol " + fmt(kZeroTol) + "), rank 5 (cutoff " + fmt(kRankTol) + "), " +
              std::to_string(gaps) + " simplifier gaps, " + fmt(dt) + " s (limit " + fmt(kCatalogSeconds) + " s)";
  if (!s.passed) o.details.push_back(s.first_failure);
  return o;
}

Outcome classification_gate(int jobs) {
  Outcome o;
  const Catalog& cat = Catalog::builtin();
  auto ids = cat.resolve("all");
  Section s = classes_section(cat, builtin_classes(), ids, jobs);
  int rows_ok = 0;
  for (const auto& r : s.body["rows"]) {
    if (r["passed"].get<bool>()) {
      ++rows_ok;
    } else {
      std::string d = "row " + r["id"].get<std::string>() + " does not reproduce its stated commutators";
      if (r.contains("correction"))
        d += "; corrected basis " + std::string(r["correction"]["passed"].get<bool>() ? "confirms" : "does not confirm") +
             " " + r["class"].get<std::string>() + " (" + r["correction"]["note"].get<std::string>() + ")";
      o.details.push_back(d);
    }
  }
  const bool fp = s.body["fingerprints"]["groups"].size() > 0 &&
                  std::all_of(s.body["fingerprints"]["groups"].begin(), s.body["fingerprints"]["groups"].end(),
                              [](const Json& g) { return g["consistent"].get<bool>(); });
  o.passed = s.passed;
  o.summary = std::to_string(rows_ok) + "/" + std::to_string(s.body["rows"].size()) +
              " rows reproduce the stated commutators exactly (both signs for |.| coefficients), fingerprints " +
              (fp ? "consistent" : "INCONSISTENT") + " within every class";
  if (!s.passed && !s.first_failure.empty()) o.details.insert(o.details.begin(), s.first_failure);
  return o;
}

Outcome submodel_gate() {
  Outcome o;
  Section s = solutions_section({SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced,
                                 SolutionKind::NonisochoricGeneral, SolutionKind::NonisochoricReduced});
  int checks = 0;
  for (const auto& f : s.body["families"]) checks += static_cast<int>(f["checks"].size());
  o.passed = s.passed;
  o.summary = "4 families, " + std::to_string(checks) +
              " symbolic checks (5 submodel + 5 gas residuals each, vorticity, Jacobians 1 and t, opaque f)";
  if (!s.passed) o.details.push_back(s.first_failure);
  return o;
}

struct TraceRun {
  Section s;
  bool done = false;
};

const Section& traces() {
  static TraceRun run;
  if (!run.done) {
    TraceOptions opts;
    run.s = traces_section(opts);
    run.done = true;
  }
  return run.s;
}

Outcome trajectory_gate() {
  Outcome o;
  const Json& b = traces().body;
  const double iso = b["isochoric_max_error"].get<double>();
  const double non = b["nonisochoric_max_error"].get<double>();
  const double order = b["convergence"]["order"].get<double>();
  o.passed = iso < kTraceTol && non < kTraceTol && order >= kOrderLo && order <= kOrderHi;
  o.summary = "RK4 h=1e-3 max component error " + fmt(iso) + " (isochoric, t in [0,3]), " + fmt(non) +
              " (nonisochoric, t in [0.1,3]), limit " + fmt(kTraceTol) + "; order " + fmt(order) + " in [" +
              fmt(kOrderLo) + ", " + fmt(kOrderHi) + "]";
  return o;
}

Outcome geometry_gate() {
  Outcome o;
  const Json& b = traces().body;
  const double vol = 4.0 / 3.0 * std::numbers::pi;
  double residual = 0.0, volume_err = 0.0;
  int points = 0;
  bool times_ok = true;
  for (double t : {1.6, 2.0}) {
    bool seen = false;
    for (const auto& sp : b["sphere"]) {
      if (sp["t"].get<double>() != t) continue;
      seen = true;
      points = sp["points"].get<int>();
      residual = std::max(residual, sp["max_residual"].get<double>());
      volume_err = std::max(volume_err, std::abs(sp["volume"].get<double>() - vol));
    }
    times_ok = times_ok && seen;
  }
  double yz = 0.0, fit = 0.0;
  for (const auto& c : b["common_start"]) {
    yz = std::max(yz, c["max_yz_spread"].get<double>());
    fit = std::max(fit, c["affine_fit_residual"].get<double>());
  }
  o.passed = times_ok && points == 1000 && residual < kQuadricTol && volume_err < kVolumeTol && yz < kCommonStartTol &&
             fit < kCommonStartTol && b["common_start"].size() == 2;
  o.summary = std::to_string(points) + " sphere points at t = 1.6, 2: quadric residual " + fmt(residual) +
              " (limit " + fmt(kQuadricTol) + "), volume error " + fmt(volume_err) + " (limit " + fmt(kVolumeTol) +
              "); common start from (-2,1,1), u0 = 0..3 at t = 3: (y,z) spread " + fmt(yz) + ", affine residual " +
              fmt(fit) + " (limit " + fmt(kCommonStartTol) + ")";
  return o;
}

// --- mutation suite ----------------------------------------------------------

struct Mutant {
  std::string name;
  std::string gate;
  std::function<Section()> run;
};

LieAlgebra flipped(int i, int j) {
  LieAlgebra l = l12_table();
  RationalVector b = l.basis_bracket(i, j);
  for (auto& c : b) c = -c;
  l.set_bracket(i, j, b);
  return l;
}

Section catalog_with(const std::string& id, int invariant, const std::string& text) {
  auto doc = Json::parse(Catalog::builtin_text());
  for (auto& e : doc["entries"]) {
    if (e["id"] == id) e["invariants"][invariant] = text;
  }
  Catalog cat = Catalog::from_json(doc.dump());
  return catalog_section(cat, {id}, verify_options());
}

Section solution_with(SolutionKind kind, const std::function<void(Solution&)>& edit) {
  Solution s = solution(kind);
  edit(s);
  s.P = canonicalize(s.P1 + s.u);
  s.S = canonicalize(s.P - Expr::function("f", 0, s.rho));
  Section out;
  out.passed = true;
  for (const auto& c : solution_checks(s)) {
    if (c.passed) continue;
    out.passed = false;
    if (out.first_failure.empty()) out.first_failure = c.name + ": " + c.detail;
  }
  return out;
}

Expr sx(const std::string& text) { return parse(text, solution_symbols()); }

std::vector<Mutant> mutants() {
  std::vector<Mutant> m;
  auto lbl = [](int i) { return l12_labels()[i]; };
  for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 9}, {4, 10}, {7, 8}, {10, 11}, {2, 11}}) {
    m.push_back({"flip [" + lbl(i) + ", " + lbl(j) + "]", "algebra",
                 [i, j] { return algebra_section(flipped(i, j)); }});
  }
  struct Inv {
    const char* id;
    int k;
    const char* text;
  };
  for (const Inv& v : {Inv{"4.77", 3, "P + u"}, Inv{"4.1", 3, "P + ln|t|"}, Inv{"4.2", 3, "P + t"},
                       Inv{"4.3", 3, "u - P + a*theta - b*ln|t|"}, Inv{"4.23.i", 0, "(b/a)*x + t + theta + vartheta"}}) {
    m.push_back({std::string("entry ") + v.id + " invariant " + std::to_string(v.k + 1) + " -> " + v.text, "catalog",
                 [v] { return catalog_with(v.id, v.k, v.text); }});
  }
  m.push_back({"isochoric u: k0*y -> 2*k0*y", "submodel", [] {
                 return solution_with(SolutionKind::IsochoricReduced, [](Solution& s) {
                   s.u = sx("2*k0*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2");
                 });
               }});
  m.push_back({"isochoric v: -k0/rho0*t -> k0/rho0*t", "submodel", [] {
                 return solution_with(SolutionKind::IsochoricReduced, [](Solution& s) { s.v = sx("k0/rho0*t"); });
               }});
  m.push_back({"nonisochoric u: (k0^2 + m0^2 - 1) -> (k0^2 + m0^2 + 1)", "submodel", [] {
                 return solution_with(SolutionKind::NonisochoricReduced, [](Solution& s) {
                   s.u = sx("x/t + k0*y/t + m0*z/t + (k0^2 + m0^2 + 1)/(2*rho0)*t");
                 });
               }});
  m.push_back({"nonisochoric w: -m0/rho0*t -> -m0/(2*rho0)*t", "submodel", [] {
                 return solution_with(SolutionKind::NonisochoricReduced, [](Solution& s) { s.w = sx("-m0/(2*rho0)*t"); });
               }});
  return m;
}

Outcome mutation_gate(bool verbose) {
  Outcome o;
  auto ms = mutants();
  int killed = 0;
  for (const auto& mu : ms) {
    Section s = mu.run();
    const bool k = !s.passed && !s.first_failure.empty();
    killed += k;
    if (verbose || !k)
      o.details.push_back(std::string(k ? "killed " : "SURVIVED ") + mu.name + " [" + mu.gate + "]" +
                          (k ? ": " + s.first_failure : ""));
  }
  o.passed = static_cast<int>(ms.size()) >= kMinMutants && killed == static_cast<int>(ms.size());
  o.summary = std::to_string(killed) + "/" + std::to_string(ms.size()) +
              " mutants (structure constants, invariant signs, solution coefficients) fail their gate with a witness";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance gates"};
  int only = 0;
  int jobs = 1;
  bool verbose = false;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "print witnesses");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> gates = {
      {"algebra", algebra_gate},
      {"automorphisms", automorphism_gate},
      {"catalog", [&] { return catalog_gate(jobs); }},
      {"classification", [&] { return classification_gate(jobs); }},
      {"submodel", submodel_gate},
      {"trajectories", trajectory_gate},
      {"geometry", geometry_gate},
      {"mutation", [&] { return mutation_gate(verbose); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < gates.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = gates[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.summary = std::string("exception: ") + e.what();
    }
    failed += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << gates[i].first
              << "): " << o.summary << "\n";
    if (verbose || !o.passed) {
      for (const auto& d : o.details) std::cout << "    " << d << "\n";
    }
  }
  return failed ? 1 : 0;
}
