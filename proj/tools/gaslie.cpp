// Command-line front end: verification campaigns and trajectory export.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "gaslie/report.hpp"

using namespace gaslie;

namespace {

struct Config {
  std::vector<std::string> entries;
  std::string params;
  std::uint64_t seed = kDefaultSeed;
  double tol_zero = 1e-9;
  double tol_rank = 1e-8;
  int jobs = 1;
  std::string format = "json";
  std::string out;
  bool timing = false;
  std::string catalog_file;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

ParameterValues parse_params(const std::string& text) {
  ParameterValues out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("malformed parameter '" + item + "', expected k=v");
    try {
      Rational v(item.substr(eq + 1));
      v.canonicalize();
      out[item.substr(0, eq)] = v;
    } catch (const std::invalid_argument&) {
      throw UsageError("parameter value '" + item.substr(eq + 1) + "' is not a rational number");
    }
  }
  return out;
}

std::vector<double> parse_doubles(const std::string& text, std::size_t n) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.size() != n) throw UsageError("expected " + std::to_string(n) + " comma-separated numbers in '" + text + "'");
  return out;
}

const Catalog& load_catalog(const Config& cfg) {
  static Catalog custom;
  if (cfg.catalog_file.empty()) return Catalog::builtin();
  std::ifstream in(cfg.catalog_file);
  if (!in) throw UsageError("cannot read " + cfg.catalog_file);
  std::stringstream ss;
  ss << in.rdbuf();
  custom = Catalog::from_json(ss.str());
  return custom;
}

std::vector<std::string> resolve_ids(const Catalog& cat, const std::vector<std::string>& requested) {
  std::vector<std::string> ids;
  for (const auto& r : requested.empty() ? std::vector<std::string>{"all"} : requested) {
    try {
      for (const auto& id : cat.resolve(r)) {
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
      }
    } catch (const UnknownEntry& e) {
      throw UsageError(e.what());
    }
  }
  return ids;
}

void validate(const Config& cfg) {
  if (!(cfg.tol_zero > 0) || !(cfg.tol_rank > 0)) throw UsageError("tolerances must be positive");
  if (cfg.jobs < 1) throw UsageError("--jobs must be at least 1");
  if (cfg.format != "json" && cfg.format != "text") throw UsageError("--format is json or text");
}

VerifyOptions verify_options(const Config& cfg) {
  VerifyOptions o;
  o.seed = cfg.seed;
  o.zero.seed = cfg.seed;
  o.zero.tolerance = cfg.tol_zero;
  o.rank_tolerance = cfg.tol_rank;
  return o;
}

Json skeleton(const Config& cfg) {
  return Json{{"version", kVersion},   {"seed", cfg.seed},      {"algebra", nullptr},
              {"catalog", nullptr},    {"classes", nullptr},    {"solutions", nullptr},
              {"traces", nullptr}};
}

void print_text(std::ostream& os, const std::string& key, const Json& body) {
  if (body.is_null()) return;
  os << "== " << key << ": " << (body.value("passed", false) ? "PASS" : "FAIL") << "\n";
  if (key == "algebra") {
    os << "triples checked: " << body["triples_checked"] << ", Jacobi failures: " << body["jacobi_failures"].size()
       << ", differences from realization: " << body["realization_differences"].size() << "\n";
    if (body.contains("brackets")) {
      for (const auto& b : body["brackets"]) os << b.get<std::string>() << "\n";
    }
    if (body.contains("automorphisms")) {
      for (const auto& m : body["automorphisms"]["maps"])
        os << m["name"].get<std::string>() << ": homomorphism " << m["homomorphism"] << ", inverse " << m["inverse"]
           << "\n";
    }
  } else if (key == "catalog") {
    for (const auto& e : body["entries"]) {
      os << e["id"].get<std::string>() << ": " << (e["passed"].get<bool>() ? "pass" : "FAIL") << ", "
         << e["samples"] << " samples, symbolic zero " << e["symbolic_zero"] << "/16, rank " << e["rank"]["min"];
      if (!e["simplifier_gaps"].empty()) os << ", SIMPLIFIER-GAP " << e["simplifier_gaps"].dump();
      os << "\n";
    }
  } else if (key == "classes") {
    for (const auto& r : body["rows"]) {
      os << r["id"].get<std::string>() << " " << r["class"].get<std::string>() << ": "
         << (r["passed"].get<bool>() ? "pass" : "FAIL");
      if (r.contains("correction"))
        os << " (corrected basis " << (r["correction"]["passed"].get<bool>() ? "confirms" : "does not confirm")
           << " the class: " << r["correction"]["note"].get<std::string>() << ")";
      os << "\n";
    }
    for (const auto& g : body["fingerprints"]["groups"])
      os << "fingerprint " << g["class"].get<std::string>() << " " << g["ids"].dump() << ": "
         << (g["consistent"].get<bool>() ? g["fingerprint"].get<std::string>() : "INCONSISTENT") << "\n";
    for (const auto& i : body["fingerprints"]["info"]) os << "INFO shared fingerprint " << i.get<std::string>() << "\n";
  } else if (key == "solutions") {
    for (const auto& f : body["families"]) {
      os << f["kind"].get<std::string>() << ":\n";
      for (const auto& c : f["checks"])
        os << "  " << (c["passed"].get<bool>() ? "ok   " : "FAIL ") << c["check"].get<std::string>() << ": "
           << c["detail"].get<std::string>() << "\n";
    }
  } else if (key == "traces") {
    os << "isochoric max error " << body["isochoric_max_error"] << ", nonisochoric max error "
       << body["nonisochoric_max_error"] << ", order " << body["convergence"]["order"] << "\n";
    for (const auto& sp : body["sphere"])
      os << "sphere t=" << sp["t"] << ": residual " << sp["max_residual"] << ", volume " << sp["volume"] << "\n";
  }
}

int emit(const Config& cfg, Json report, const std::vector<Section*>& sections, const std::string& failure) {
  bool ok = true;
  for (auto* s : sections) ok = ok && s->passed;
  std::ofstream file;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) throw UsageError("cannot write " + cfg.out);
  }
  std::ostream& os = cfg.out.empty() ? std::cout : file;
  if (cfg.format == "json") {
    os << report.dump(2) << "\n";
  } else {
    for (const auto& [k, v] : report.items()) {
      if (k != "version" && k != "seed" && k != "timing") print_text(os, k, v);
    }
  }
  if (!ok) std::cerr << "FAILED: " << failure << "\n";
  return ok ? 0 : 1;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry algebra, invariants, and exact solutions of the gas dynamics system with P = f(rho) + S"};
  app.require_subcommand(1);
  app.fallthrough();
  Config cfg;
  app.add_option("--seed", cfg.seed, "seed for all sampling");
  app.add_option("--tol-zero", cfg.tol_zero, "numeric zero tolerance");
  app.add_option("--tol-rank", cfg.tol_rank, "relative singular value cutoff");
  app.add_option("--jobs", cfg.jobs, "worker threads");
  app.add_option("--format", cfg.format, "json or text");
  app.add_option("--out", cfg.out, "write the report here instead of stdout");
  app.add_flag("--timing", cfg.timing, "include wall-clock times in the report");
  app.add_option("--catalog", cfg.catalog_file, "catalog file replacing the built-in one");

  auto* alg = app.add_subcommand("verify-algebra", "Jacobi identity, table against realization, automorphisms");
  auto* inv = app.add_subcommand("verify-invariants", "annihilation and independence of the invariant sets");
  inv->add_option("ids", cfg.entries, "entry ids or items, or all");
  inv->add_option("--entries", cfg.entries, "entry ids or items, or all");
  inv->add_option("--params", cfg.params, "k=v,... for a single entry");
  auto* cls = app.add_subcommand("classify", "isomorphism classes and fingerprints");
  cls->add_option("ids", cfg.entries, "entry ids or items, or all");
  cls->add_option("--entries", cfg.entries, "entry ids or items, or all");
  std::vector<std::string> kinds;
  auto* sol = app.add_subcommand("verify-solution", "submodel and exact solution checks");
  sol->add_option("kinds", kinds, "isochoric, nonisochoric, or the -general/-reduced names (default: all)");
  auto* trc = app.add_subcommand("trace", "integrate particle paths and write CSV");
  std::string kind = "isochoric", start = "0,0,1", out_dir;
  double u0 = 0.0, t0 = 0.0, t1 = 3.0, h = 1e-3;
  std::string consts = "rho0=1,k0=1,m0=1";
  std::string preset;
  trc->add_option("--kind", kind, "isochoric-reduced or nonisochoric-reduced");
  trc->add_option("--start", start, "x0,y0,z0 (isochoric) or y0,z0 (nonisochoric)");
  trc->add_option("--u0", u0, "initial axial velocity label (nonisochoric)");
  trc->add_option("--t0", t0, "start time");
  trc->add_option("--t1", t1, "end time");
  trc->add_option("--step", h, "RK4 step");
  trc->add_option("--constants", consts, "rho0=..,k0=..,m0=..");
  trc->add_option("--preset", preset, "lines (three isochoric particles) or common-start (four nonisochoric)");
  trc->add_option("--out-dir", out_dir, "directory for --preset output");
  auto* all = app.add_subcommand("report", "run every check and emit the full report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    validate(cfg);
    Json report = skeleton(cfg);
    Json timing = Json::object();
    std::vector<Section> sections;
    sections.reserve(6);
    std::string failure;
    auto add = [&](const char* key, auto&& make) {
      Timer t;
      sections.push_back(make());
      if (cfg.timing) timing[key] = t.seconds();
      Section& s = sections.back();
      if (!s.passed && failure.empty()) failure = s.first_failure;
      return &s;
    };
    std::vector<Section*> run;

    if (*alg || *all) {
      Section* a = add("algebra", [&] { return algebra_section(l12_table(), cfg.format == "text"); });
      Section* m = add("automorphisms", [&] { return automorphism_section(cfg.seed); });
      a->body["automorphisms"] = m->body;
      a->body["passed"] = a->passed && m->passed;
      report["algebra"] = a->body;
      run.push_back(a);
      run.push_back(m);
    }
    if (*inv || *all) {
      const Catalog& cat = load_catalog(cfg);
      auto ids = resolve_ids(cat, *all ? std::vector<std::string>{} : cfg.entries);
      if (!cfg.params.empty()) {
        if (ids.size() != 1) throw UsageError("--params needs exactly one entry id");
        SubalgebraEntry e;
        try {
          e = get_entry(cat, ids[0], parse_params(cfg.params));
        } catch (const ConstraintViolation& err) {
          throw UsageError(err.what());
        }
        Section* s = add("catalog", [&] {
          Section sec;
          auto r = verify_invariants(e, verify_options(cfg));
          sec.passed = r.passed();
          if (!sec.passed) sec.first_failure = "entry " + e.id + " at " + to_string(e.params) + " failed";
          sec.body = {{"entries", Json::array({to_json(r)})}, {"passed", sec.passed}};
          return sec;
        });
        report["catalog"] = s->body;
        run.push_back(s);
      } else {
        Section* s = add("catalog", [&] { return catalog_section(cat, ids, verify_options(cfg), cfg.jobs); });
        report["catalog"] = s->body;
        run.push_back(s);
      }
    }
    if (*cls || *all) {
      const Catalog& cat = load_catalog(cfg);
      auto ids = resolve_ids(cat, *all ? std::vector<std::string>{} : cfg.entries);
      Section* s = add("classes", [&] { return classes_section(cat, builtin_classes(), ids, cfg.jobs); });
      report["classes"] = s->body;
      run.push_back(s);
    }
    if (*sol || *all) {
      std::vector<SolutionKind> ks;
      if (kinds.empty() || *all) {
        ks = {SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced, SolutionKind::NonisochoricGeneral,
              SolutionKind::NonisochoricReduced};
      }
      for (const auto& k : kinds) {
        try {
          ks.push_back(solution_kind_from_string(k));
        } catch (const std::invalid_argument& e) {
          throw UsageError(e.what());
        }
      }
      Section* s = add("solutions", [&] { return solutions_section(ks); });
      report["solutions"] = s->body;
      run.push_back(s);
    }
    if (*all) {
      TraceOptions to;
      to.seed = cfg.seed;
      Section* s = add("traces", [&] { return traces_section(to); });
      report["traces"] = s->body;
      run.push_back(s);
    }
    if (*trc) {
      if (!(t1 > t0)) throw UsageError("empty time range");
      if (!(h > 0)) throw UsageError("--step must be positive");
      Assignment c;
      for (const auto& [k, v] : parse_params(consts)) c.set(k, v.get_d());
      for (const char* k : {"rho0", "k0", "m0"}) {
        if (!c.values.count(k)) throw UsageError(std::string("--constants is missing ") + k);
      }
      struct Job {
        SolutionKind kind;
        Assignment labels;
        double t0, t1;
        std::string path;
      };
      std::vector<Job> jobs;
      if (preset == "lines" || preset == "common-start") {
        if (out_dir.empty()) throw UsageError("--preset needs --out-dir");
        std::filesystem::create_directories(out_dir);
        if (preset == "lines") {
          int n = 0;
          for (double z : {0.0, 1.0, -1.0}) {
            Assignment l = c;
            l.set("x0", 0).set("y0", 0).set("z0", z);
            jobs.push_back({SolutionKind::IsochoricReduced, l, 0.0, 3.0,
                            out_dir + "/lines_particle" + std::to_string(n++) + ".csv"});
          }
        } else {
          for (int u : {0, 1, 2, 3}) {
            Assignment l = c;
            l.set("u0", u).set("y0", 1).set("z0", 1);
            jobs.push_back({SolutionKind::NonisochoricReduced, l, 0.1, 3.0,
                            out_dir + "/common_start_u0_" + std::to_string(u) + ".csv"});
          }
        }
      } else if (!preset.empty()) {
        throw UsageError("--preset is lines or common-start");
      } else {
        SolutionKind k = solution_kind_from_string(kind);
        if (!is_reduced(k)) throw UsageError("trace needs a reduced family");
        Assignment l = c;
        if (is_isochoric(k)) {
          auto p = parse_doubles(start, 3);
          l.set("x0", p[0]).set("y0", p[1]).set("z0", p[2]);
        } else {
          auto p = parse_doubles(start, 2);
          l.set("u0", u0).set("y0", p[0]).set("z0", p[1]);
          if (!(t0 > 0)) throw UsageError("the nonisochoric family needs t0 > 0");
        }
        jobs.push_back({k, l, t0, t1, cfg.out});
      }
      Json traces = Json::array();
      bool ok = true;
      std::vector<double> released;
      std::vector<std::array<double, 3>> ends;
      for (const auto& j : jobs) {
        Solution s = solution(j.kind);
        FlowMap fm = flow_map(s);
        Assignment at = j.labels;
        at.set("t", j.t0);
        std::array<double, 3> x0{eval(fm.position[0], at), eval(fm.position[1], at), eval(fm.position[2], at)};
        Trajectory tr = integrate({s.u, s.v, s.w}, x0, j.t0, j.t1, h, j.labels);
        tr.kind = to_string(j.kind);
        double err = max_component_error(tr, fm, j.labels);
        ok = ok && err < 1e-6;
        if (j.path.empty()) {
          write_csv(std::cout, tr);
        } else {
          std::ofstream f(j.path);
          if (!f) throw UsageError("cannot write " + j.path);
          write_csv(f, tr);
        }
        if (preset == "common-start") {
          released.push_back(j.labels.values.at("u0"));
          ends.push_back({tr.samples.back()[1], tr.samples.back()[2], tr.samples.back()[3]});
        }
        traces.push_back({{"kind", tr.kind}, {"csv", j.path}, {"samples", tr.samples.size()},
                          {"max_component_error", err}});
      }
      if (!jobs.empty() && !jobs[0].path.empty()) {
        report["traces"] = {{"runs", traces}};
        if (preset == "common-start") {
          auto cc = common_start_check(released, ends);
          ok = ok && cc.passed;
          report["traces"]["common_start"] = {{"t", 3.0},
                                              {"max_yz_spread", cc.yz_spread},
                                              {"affine_fit_residual", cc.affine_residual},
                                              {"passed", cc.passed}};
        }
        report["traces"]["passed"] = ok;
        std::cout << report.dump(2) << "\n";
      }
      return ok ? 0 : 1;
    }

    if (cfg.timing) report["timing"] = timing;
    return emit(cfg, report, run, failure);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
