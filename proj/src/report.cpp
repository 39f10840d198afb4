#include "gaslie/report.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "gaslie/fields.hpp"

namespace gaslie {

namespace {

std::string vec_str(const RationalVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

std::string combo_str(const RationalVector& v, const std::vector<std::string>& labels) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (!s.empty()) s += v[i] > 0 ? " + " : " - ";
    else if (v[i] < 0) s += "-";
    Rational a = abs(v[i]);
    if (a != 1) s += a.get_str() + "*";
    s += labels[i];
  }
  return s.empty() ? "0" : s;
}

// Runs f(i) for i in [0, n) on `jobs` threads; results stay in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, int jobs, F f) {
  std::vector<T> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs && static_cast<std::size_t>(t) < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace

Assignment unit_constants() {
  Assignment a;
  a.set("rho0", 1.0).set("k0", 1.0).set("m0", 1.0);
  return a;
}

// --- algebra -----------------------------------------------------------------

Section algebra_section(const LieAlgebra& table, bool include_brackets) {
  Section s;
  const auto& labels = table.labels();
  auto anti = antisymmetry_report(table);
  auto jac = jacobi_report(table);
  LieAlgebra real = realized_algebra();
  Json diffs = Json::array();
  for (int i = 0; i < table.dim(); ++i) {
    for (int j = i + 1; j < table.dim(); ++j) {
      for (int k = 0; k < table.dim(); ++k) {
        if (table.constant(i, j, k) != real.constant(i, j, k)) {
          diffs.push_back({{"i", labels[i]}, {"j", labels[j]}, {"k", labels[k]},
                           {"table", table.constant(i, j, k).get_str()},
                           {"realized", real.constant(i, j, k).get_str()}});
        }
      }
    }
  }
  Json jfail = Json::array();
  for (const auto& t : jac)
    jfail.push_back({{"triple", {labels[t.i], labels[t.j], labels[t.k]}}, {"jacobiator", vec_str(t.value)}});
  Json afail = Json::array();
  for (const auto& t : anti) afail.push_back({{"pair", {labels[t.i], labels[t.j]}}});

  Json charts = Json::array();
  bool charts_ok = true;
  for (const Chart& ch : {chart_cylindrical(), chart_spherical(), chart_shifted(Expr(0)), chart_shifted(Expr(1))}) {
    auto coh = chart_coherence(ch);
    auto rt = round_trip(ch, 50, kDefaultSeed);
    bool ok = coh.empty() && rt.max_error_chart < 1e-10 && rt.max_error_cartesian < 1e-10;
    charts_ok = charts_ok && ok;
    charts.push_back({{"chart", ch.key()},
                      {"coherence_failures", coh.size()},
                      {"round_trip_chart", rt.max_error_chart},
                      {"round_trip_cartesian", rt.max_error_cartesian},
                      {"passed", ok}});
  }

  s.body["triples_checked"] = table.dim() * (table.dim() - 1) * (table.dim() - 2) / 6;
  s.body["jacobi_failures"] = jfail;
  s.body["antisymmetry_failures"] = afail;
  s.body["realization_differences"] = diffs;
  s.body["charts"] = charts;
  if (include_brackets) {
    Json b = Json::array();
    for (int i = 0; i < table.dim(); ++i) {
      for (int j = i + 1; j < table.dim(); ++j)
        b.push_back("[" + labels[i] + ", " + labels[j] + "] = " + combo_str(table.basis_bracket(i, j), labels));
    }
    s.body["brackets"] = b;
  }
  s.passed = jac.empty() && anti.empty() && diffs.empty() && charts_ok;
  if (!anti.empty()) {
    s.first_failure = "antisymmetry fails at [" + labels[anti[0].i] + ", " + labels[anti[0].j] + "]";
  } else if (!jac.empty()) {
    s.first_failure = "Jacobi fails at (" + labels[jac[0].i] + ", " + labels[jac[0].j] + ", " + labels[jac[0].k] +
                      "): " + vec_str(jac[0].value);
  } else if (!diffs.empty()) {
    const auto& d = diffs[0];
    s.first_failure = "table differs from realization at [" + d["i"].get<std::string>() + ", " +
                      d["j"].get<std::string>() + "] component " + d["k"].get<std::string>() + ": table " +
                      d["table"].get<std::string>() + ", realized " + d["realized"].get<std::string>();
  } else if (!charts_ok) {
    s.first_failure = "chart coherence or round trip failed";
  }
  s.body["passed"] = s.passed;
  return s;
}

Section automorphism_section(std::uint64_t seed, int vectors) {
  Section s;
  Rng rng(derive_seed(seed, "automorphisms"));
  auto rat = [&] {
    long num = static_cast<long>(rng.next() % 19) - 9;
    long den = static_cast<long>(rng.next() % 5) + 1;
    Rational r(num, den);
    r.canonicalize();
    return r;
  };
  auto vec = [&] {
    RationalVector v(kL12Dim);
    for (auto& x : v) x = rat();
    return v;
  };
  std::vector<std::pair<RationalVector, RationalVector>> pairs;
  for (int i = 0; i < vectors; ++i) pairs.emplace_back(vec(), vec());
  const std::vector<Automorphism> autos = {
      Automorphism::space_translation({Rational(1, 2), Rational(-3), Rational(2, 3)}),
      Automorphism::galilean({Rational(-1), Rational(5, 4), Rational(2)}),
      Automorphism::rotation(rotation_from_quaternion(1, 2, -1, 3)),
      Automorphism::time_translation(Rational(7, 3)),
      Automorphism::dilation(Rational(-5, 2)),
      Automorphism::inversion1(),
      Automorphism::inversion2(),
      Automorphism::outer_scale(Rational(3, 7)),
  };
  LieAlgebra alg = l12_table();
  s.passed = true;
  Json rows = Json::array();
  for (const auto& a : autos) {
    auto fail = check_homomorphism(alg, a, pairs);
    bool inverse_ok = true;
    for (const auto& [v, w] : pairs) {
      inverse_ok = inverse_ok && apply_automorphism(a.inverse(), apply_automorphism(a, v)) == v &&
                   apply_automorphism(a, apply_automorphism(a.inverse(), w)) == w;
    }
    Json row{{"name", a.name()}, {"vectors", vectors}, {"homomorphism", !fail}, {"inverse", inverse_ok}};
    if (fail) {
      row["witness"] = {{"v", vec_str(fail->v)}, {"w", vec_str(fail->w)}, {"A[v,w]", vec_str(fail->lhs)},
                        {"[Av,Aw]", vec_str(fail->rhs)}};
      if (s.first_failure.empty())
        s.first_failure = a.name() + " is not a homomorphism at v = " + vec_str(fail->v) + ", w = " + vec_str(fail->w);
    }
    if (!inverse_ok && s.first_failure.empty()) s.first_failure = a.name() + " composed with its inverse is not the identity";
    s.passed = s.passed && !fail && inverse_ok;
    rows.push_back(std::move(row));
  }
  s.body = {{"seed", seed}, {"maps", rows}, {"passed", s.passed}};
  return s;
}

// --- catalog -----------------------------------------------------------------

Json to_json(const VerificationReport& r) {
  Json j;
  j["params"] = to_string(r.params);
  if (!r.symbolic.empty()) j["symbolic"] = r.symbolic;
  j["closed"] = r.closed;
  j["independent"] = r.independent;
  Json v = Json::array();
  for (const auto& pv : r.verdicts) {
    Json e{{"generator", pv.generator + 1}, {"invariant", pv.invariant + 1}, {"verdict", to_string(pv.test.verdict)}};
    if (pv.test.verdict != ZeroVerdict::SymbolicZero) {
      e["max_abs"] = pv.test.max_abs;
      e["residual"] = pv.residual;
    }
    if (pv.test.verdict == ZeroVerdict::NonZero) {
      Json w = Json::object();
      for (const auto& [k, x] : pv.test.witness) w[k] = x;
      e["witness"] = w;
      e["witness_value"] = pv.test.witness_value;
      if (!pv.test.error.empty()) e["error"] = pv.test.error;
    }
    v.push_back(std::move(e));
  }
  j["verdicts"] = v;
  if (r.rank >= 0) j["rank"] = r.rank;
  if (!r.flags.empty()) j["flags"] = r.flags;
  return j;
}

Json to_json(const EntryReport& r) {
  Json j;
  j["id"] = r.id;
  j["passed"] = r.passed();
  j["samples"] = r.instances.size();
  int sym_zero = 0;
  for (const auto& v : r.symbolic.verdicts) sym_zero += v.test.verdict == ZeroVerdict::SymbolicZero;
  j["symbolic_zero"] = sym_zero;
  j["symbolic"] = to_json(r.symbolic);
  j["simplifier_gaps"] = r.simplifier_gaps;
  int min_rank = 99, max_rank = -1;
  Json failing = Json::array();
  for (const auto& inst : r.instances) {
    min_rank = std::min(min_rank, inst.rank);
    max_rank = std::max(max_rank, inst.rank);
    if (!inst.passed() && failing.size() < 3) failing.push_back(to_json(inst));
  }
  j["rank"] = {{"min", min_rank}, {"max", max_rank}};
  j["failures"] = failing;
  if (!r.symbolic.flags.empty()) j["flags"] = r.symbolic.flags;
  return j;
}

Section catalog_section(const Catalog& catalog, const std::vector<std::string>& ids, const VerifyOptions& opts,
                        int jobs) {
  Section s;
  auto reports = parallel_map<EntryReport>(ids.size(), jobs, [&](std::size_t i) {
    return verify_entry(catalog, ids[i], opts);
  });
  Json entries = Json::array();
  s.passed = !reports.empty();
  int samples = 0;
  for (const auto& r : reports) {
    entries.push_back(to_json(r));
    samples += static_cast<int>(r.instances.size());
    if (!r.passed()) {
      s.passed = false;
      if (s.first_failure.empty()) {
        s.first_failure = "entry " + r.id;
        for (const auto& inst : r.instances) {
          if (inst.passed()) continue;
          if (!inst.params.empty()) s.first_failure += " at " + to_string(inst.params);
          s.first_failure += ":";
          if (!inst.closed) s.first_failure += " not closed;";
          if (inst.rank != 5) s.first_failure += " rank " + std::to_string(inst.rank) + ";";
          for (const auto& v : inst.verdicts) {
            if (v.test.verdict != ZeroVerdict::NonZero) continue;
            s.first_failure += " generator " + std::to_string(v.generator + 1) + " on invariant " +
                               std::to_string(v.invariant + 1) + " leaves " + v.residual;
            std::ostringstream w;
            w.precision(6);
            for (const auto& [k, x] : v.test.witness) w << " " << k << "=" << x;
            s.first_failure += " (witness" + w.str() + ")";
            break;
          }
          break;
        }
      }
    }
  }
  s.body = {{"entries", entries},
            {"entry_count", reports.size()},
            {"sample_count", samples},
            {"tolerance", opts.zero.tolerance},
            {"zero_samples", opts.zero.samples},
            {"rank_tolerance", opts.rank_tolerance},
            {"passed", s.passed}};
  return s;
}

// --- classes -----------------------------------------------------------------

Section classes_section(const Catalog& catalog, const std::vector<ClassAssignment>& rows,
                        const std::vector<std::string>& ids, int jobs) {
  Section s;
  auto reports = parallel_map<ClassReport>(ids.size(), jobs, [&](std::size_t i) {
    return verify_class(catalog, find_class(rows, ids[i]));
  });
  Json out = Json::array();
  s.passed = !reports.empty();
  for (const auto& r : reports) {
    Json cases = Json::array();
    for (const auto& c : r.cases) {
      Json signs = Json::object();
      for (const auto& [k, v] : c.signs) signs[k] = v;
      Json cj{{"signs", signs},
              {"symbolic", c.symbolic_matches ? "match" : "mismatch"},
              {"samples", c.samples.size()}};
      if (!c.symbolic_matches) cj["symbolic_mismatch"] = c.symbolic_mismatch;
      Json bad = Json::array();
      for (const auto& smp : c.samples) {
        if (!smp.matches) bad.push_back({{"params", to_string(smp.params)}, {"mismatch", smp.mismatch}});
      }
      if (!bad.empty()) cj["failures"] = bad;
      cases.push_back(std::move(cj));
      for (const auto& smp : c.samples) {
        if (!smp.matches && s.first_failure.empty())
          s.first_failure = "class row " + r.id + (smp.params.empty() ? "" : " at " + to_string(smp.params)) + ": " + smp.mismatch;
      }
    }
    Json row{{"id", r.id}, {"class", r.label}, {"passed", r.passed()}, {"cases", cases}};
    if (r.has_correction)
      row["correction"] = {{"passed", r.correction_passed}, {"note", r.correction_note}};
    out.push_back(std::move(row));
    s.passed = s.passed && r.passed();
    if (!r.passed() && s.first_failure.empty()) s.first_failure = "class row " + r.id + " has no admissible sample";
  }
  std::vector<ClassAssignment> selected;
  for (const auto& id : ids) selected.push_back(find_class(rows, id));
  auto fc = fingerprint_consistency(catalog, selected);
  Json groups = Json::array();
  for (const auto& g : fc.groups)
    groups.push_back({{"class", g.label}, {"ids", g.ids}, {"fingerprint", g.fingerprint}, {"consistent", g.consistent}});
  for (const auto& g : fc.groups) {
    if (!g.consistent && s.first_failure.empty()) s.first_failure = "fingerprints differ within class " + g.label;
  }
  s.passed = s.passed && fc.passed();
  s.body = {{"rows", out}, {"fingerprints", {{"groups", groups}, {"info", fc.info}}}, {"passed", s.passed}};
  return s;
}

// --- solutions ---------------------------------------------------------------

namespace {

SolutionCheck zero_check(std::string name, const std::vector<Expr>& es) {
  SolutionCheck c{std::move(name), true, ""};
  for (const auto& e : es) {
    Expr r = canonicalize(e);
    if (!r.is_zero()) {
      c.passed = false;
      c.detail = to_infix(r);
      return c;
    }
  }
  c.detail = "0";
  return c;
}

SolutionCheck equal_check(std::string name, const std::vector<Expr>& got, const std::vector<std::string>& want) {
  std::vector<Expr> diffs;
  std::string shown;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diffs.push_back(got[i] - parse(want[i], solution_symbols()));
    shown += (i ? ", " : "") + to_infix(canonicalize(got[i]));
  }
  SolutionCheck c = zero_check(std::move(name), diffs);
  c.detail = c.passed ? shown : "got " + shown + "; difference " + c.detail;
  return c;
}

}  // namespace

std::vector<SolutionCheck> solution_checks(const Solution& s) {
  std::vector<SolutionCheck> out;
  auto rr = reduced_residuals(s.candidate());
  out.push_back(zero_check("submodel residuals", {rr.begin(), rr.end()}));
  auto fr = full_residuals(s);
  out.push_back(zero_check("gas dynamics residuals", {fr.begin(), fr.end()}));
  out.push_back(zero_check("P = P1 + u", {s.P - s.P1 - s.u}));
  out.push_back(zero_check("S = P - f(rho)", {s.S - s.P + Expr::function("f", 0, s.rho)}));
  out.push_back(zero_check("entropy transported (D S = 0)",
                           {differentiate(s.S, "t") + s.u * differentiate(s.S, "x") +
                            s.v * differentiate(s.S, "y") + s.w * differentiate(s.S, "z")}));
  const bool iso = is_isochoric(s.kind);
  if (!is_reduced(s.kind)) {
    Solution red = reduce_constants(s);
    Solution target = solution(iso ? SolutionKind::IsochoricReduced : SolutionKind::NonisochoricReduced);
    out.push_back(zero_check("translations reduce the constants",
                             {red.u - target.u, red.v - target.v, red.w - target.w, red.rho - target.rho,
                              red.P - target.P}));
    return out;
  }
  auto vort = vorticity(s);
  out.push_back(equal_check("vorticity", {vort.begin(), vort.end()},
                            iso ? std::vector<std::string>{"0", "m0", "-k0"}
                                : std::vector<std::string>{"0", "m0/t", "-k0/t"}));
  FlowMap fm = flow_map(s);
  auto fres = flow_residuals(fm, s);
  out.push_back(zero_check("flow map solves dx/dt = u", {fres.begin(), fres.end()}));
  out.push_back(equal_check("Jacobian determinant", {fm.jacobian}, {iso ? "1" : "t"}));
  if (iso) {
    std::map<std::string, Expr> t0{{"t", Expr(0)}};
    out.push_back(zero_check("flow map is the identity at t = 0",
                             {substitute(fm.position[0], t0) - sym("x0"), substitute(fm.position[1], t0) - sym("y0"),
                              substitute(fm.position[2], t0) - sym("z0")}));
  }
  auto lag = lagrangian_fields(s);
  out.push_back(equal_check("Lagrangian acceleration", {lag.acceleration.begin(), lag.acceleration.end()},
                            iso ? std::vector<std::string>{"0", "-k0/rho0", "-m0/rho0"}
                                : std::vector<std::string>{"-1/rho0", "-k0/rho0", "-m0/rho0"}));
  out.push_back(equal_check("Lagrangian velocity", {lag.velocity.begin(), lag.velocity.end()},
                            iso ? std::vector<std::string>{"k0*y0 + m0*z0", "-k0/rho0*t", "-m0/rho0*t"}
                                : std::vector<std::string>{"-t/rho0 + u0", "-k0/rho0*t", "-m0/rho0*t"}));
  out.push_back(equal_check("Lagrangian rho, P, S", {lag.rho, lag.P, lag.S},
                            iso ? std::vector<std::string>{"rho0", "k0*y0 + m0*z0", "k0*y0 + m0*z0 - f(rho0)"}
                                : std::vector<std::string>{"rho0/t", "u0 + f(rho0/t)", "u0"}));
  for (const auto& g : geometry_checks(s, unit_constants())) {
    std::ostringstream d;
    d << "max error " << g.max_error;
    out.push_back({g.name, g.passed, d.str()});
  }
  return out;
}

Section solutions_section(const std::vector<SolutionKind>& kinds) {
  Section s;
  s.passed = !kinds.empty();
  Json out = Json::array();
  for (auto k : kinds) {
    Solution sol = solution(k);
    Json checks = Json::array();
    bool ok = true;
    for (const auto& c : solution_checks(sol)) {
      checks.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      ok = ok && c.passed;
      if (!c.passed && s.first_failure.empty())
        s.first_failure = std::string(to_string(k)) + ": " + c.name + " fails: " + c.detail;
    }
    out.push_back({{"kind", to_string(k)},
                   {"u", to_infix(sol.u)},
                   {"v", to_infix(sol.v)},
                   {"w", to_infix(sol.w)},
                   {"rho", to_infix(sol.rho)},
                   {"P", to_infix(sol.P)},
                   {"checks", checks},
                   {"passed", ok}});
    s.passed = s.passed && ok;
  }
  s.body = {{"families", out}, {"passed", s.passed}};
  return s;
}

// --- traces ------------------------------------------------------------------

CommonStartCheck common_start_check(const std::vector<double>& u0, const std::vector<std::array<double, 3>>& ends) {
  CommonStartCheck c;
  const std::size_t n = ends.size();
  if (n == 0 || u0.size() != n) throw std::invalid_argument("common_start_check: size mismatch");
  for (const auto& e : ends)
    c.yz_spread = std::max({c.yz_spread, std::abs(e[1] - ends[0][1]), std::abs(e[2] - ends[0][2])});
  double mu = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mu += u0[i] / n;
    mx += ends[i][0] / n;
  }
  double suu = 0.0, sux = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    suu += (u0[i] - mu) * (u0[i] - mu);
    sux += (u0[i] - mu) * (ends[i][0] - mx);
  }
  const double slope = suu > 0 ? sux / suu : 0.0;
  for (std::size_t i = 0; i < n; ++i)
    c.affine_residual = std::max(c.affine_residual, std::abs(ends[i][0] - (mx + slope * (u0[i] - mu))));
  c.passed = c.yz_spread < 1e-10 && c.affine_residual < 1e-10;
  return c;
}

Section traces_section(const TraceOptions& opts) {
  Section s;
  const Assignment consts = unit_constants();
  Json runs = Json::array();
  bool ok = true;
  auto note = [&](const std::string& msg) {
    ok = false;
    if (s.first_failure.empty()) s.first_failure = msg;
  };

  Solution iso = solution(SolutionKind::IsochoricReduced);
  Solution non = solution(SolutionKind::NonisochoricReduced);
  FlowMap fiso = flow_map(iso);
  FlowMap fnon = flow_map(non);
  std::array<Expr, 3> viso{iso.u, iso.v, iso.w};
  std::array<Expr, 3> vnon{non.u, non.v, non.w};

  double iso_err = 0.0;
  for (const auto& start : std::vector<std::array<double, 3>>{{0, 0, 0}, {0, 0, 1}, {0, 0, -1}}) {
    Assignment lab = consts;
    lab.set("x0", start[0]).set("y0", start[1]).set("z0", start[2]);
    Trajectory tr = integrate(viso, start, 0.0, 3.0, opts.h, lab);
    double e = max_component_error(tr, fiso, lab);
    iso_err = std::max(iso_err, e);
    runs.push_back({{"kind", "isochoric-reduced"}, {"start", start}, {"max_component_error", e}});
  }
  if (!(iso_err < 1e-6)) note("isochoric RK4 error " + std::to_string(iso_err));

  double non_err = 0.0;
  for (double u0 : {0.0, 1.0, 2.0, 3.0}) {
    Assignment lab = consts;
    lab.set("u0", u0).set("y0", 1.0).set("z0", 1.0);
    Assignment at = lab;
    at.set("t", 0.1);
    std::array<double, 3> start{eval(fnon.position[0], at), eval(fnon.position[1], at), eval(fnon.position[2], at)};
    Trajectory tr = integrate(vnon, start, 0.1, 3.0, opts.h, lab);
    double e = max_component_error(tr, fnon, lab);
    non_err = std::max(non_err, e);
    runs.push_back({{"kind", "nonisochoric-reduced"}, {"u0", u0}, {"max_component_error", e}});
  }
  if (!(non_err < 1e-6)) note("nonisochoric RK4 error " + std::to_string(non_err));

  Assignment lab = consts;
  lab.set("u0", 1.0).set("y0", 1.0).set("z0", 1.0);
  auto conv = convergence_order(vnon, fnon, lab, 0.1, 3.0, opts.convergence_steps);
  if (!(conv.order >= 3.7 && conv.order <= 4.3)) note("observed RK4 order " + std::to_string(conv.order));

  Json spheres = Json::array();
  for (double t : opts.sphere_times) {
    auto st = sphere_transport(fiso, consts, opts.sphere_points, t, derive_seed(opts.seed, "sphere"));
    const double vol = 4.0 / 3.0 * std::numbers::pi;
    bool pass = st.max_residual < 1e-10 && std::abs(st.volume - vol) < 1e-12 &&
                std::abs(st.volume_from_quadric - vol) < 1e-9;
    if (!pass) note("sphere transport at t = " + std::to_string(t));
    Json a = Json::array();
    for (const auto& row : st.quadric.a) a.push_back(row);
    spheres.push_back({{"t", t},
                       {"points", st.points},
                       {"quadric", {{"A", a}, {"b", st.quadric.b}, {"c", st.quadric.c}}},
                       {"quadric_expr", to_infix(st.quadric_expr)},
                       {"max_residual", st.max_residual},
                       {"max_label_error", st.max_label_error},
                       {"jacobian", st.jacobian},
                       {"volume", st.volume},
                       {"volume_from_quadric", st.volume_from_quadric},
                       {"passed", pass}});
  }

  // Four particles from (-2, 1, 1) with u0 = 0..3, observed at t = 3, from
  // the closed form and from RK4.
  Json common = Json::array();
  for (bool numeric : {false, true}) {
    std::vector<std::array<double, 3>> ends;
    for (double u0 : {0.0, 1.0, 2.0, 3.0}) {
      Assignment l = consts;
      l.set("u0", u0).set("y0", 1.0).set("z0", 1.0);
      if (!numeric) {
        l.set("t", 3.0);
        ends.push_back({eval(fnon.position[0], l), eval(fnon.position[1], l), eval(fnon.position[2], l)});
      } else {
        Assignment at = l;
        at.set("t", 0.1);
        std::array<double, 3> st{eval(fnon.position[0], at), eval(fnon.position[1], at), eval(fnon.position[2], at)};
        auto p = integrate(vnon, st, 0.1, 3.0, opts.h, l).samples.back();
        ends.push_back({p[1], p[2], p[3]});
      }
    }
    auto cc = common_start_check({0.0, 1.0, 2.0, 3.0}, ends);
    if (!cc.passed) note(std::string("common-start collinearity (") + (numeric ? "RK4" : "closed form") + ")");
    Json pts = Json::array();
    for (const auto& e : ends) pts.push_back(e);
    common.push_back({{"source", numeric ? "rk4" : "closed-form"},
                    {"points", pts},
                    {"max_yz_spread", cc.yz_spread},
                    {"affine_fit_residual", cc.affine_residual},
                    {"passed", cc.passed}});
  }

  s.passed = ok;
  s.body = {{"step", opts.h},
            {"seed", opts.seed},
            {"runs", runs},
            {"isochoric_max_error", iso_err},
            {"nonisochoric_max_error", non_err},
            {"convergence", {{"steps", conv.steps}, {"errors", conv.errors}, {"order", conv.order}}},
            {"sphere", spheres},
            {"common_start", common},
            {"passed", ok}};
  return s;
}

}  // namespace gaslie
