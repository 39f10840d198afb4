#include "gaslie/classify.hpp"

#include <algorithm>
#include <regex>

#include "json.hpp"

namespace gaslie {

namespace data {
extern const char* const classes_json;
}

std::vector<std::string> ClassAssignment::abs_parameters() const {
  static const std::regex re(R"(abs\((\w+)\))");
  std::set<std::string> found;
  auto scan = [&](const std::string& s) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), re); it != std::sregex_iterator(); ++it)
      found.insert((*it)[1].str());
  };
  for (const auto& b : basis) scan(b);
  for (const auto& r : relations) scan(r.rhs);
  if (correction) {
    for (const auto& b : correction->basis) scan(b);
    for (const auto& r : correction->relations) scan(r.rhs);
  }
  return {found.begin(), found.end()};
}

namespace {

std::vector<ClassAssignment::Relation> read_relations(const std::string& id, const nlohmann::json& list) {
  std::vector<ClassAssignment::Relation> out;
  for (const auto& r : list) {
    ClassAssignment::Relation rel{r.at(0).get<int>(), r.at(1).get<int>(), r.at(2).get<std::string>()};
    if (rel.i < 1 || rel.i > 4 || rel.j < 1 || rel.j > 4 || rel.i == rel.j)
      throw std::invalid_argument("class row " + id + ": bad relation indices");
    out.push_back(rel);
  }
  return out;
}

}  // namespace

std::vector<ClassAssignment> classes_from_json(const std::string& text) {
  auto doc = nlohmann::json::parse(text);
  std::vector<ClassAssignment> out;
  for (const auto& j : doc.at("rows")) {
    ClassAssignment a;
    a.id = j.at("id").get<std::string>();
    a.label = j.at("class").get<std::string>();
    a.parametric = j.value("parametric", false);
    a.basis = j.at("basis").get<std::vector<std::string>>();
    if (a.basis.size() != 4) throw std::invalid_argument("class row " + a.id + ": need four basis elements");
    a.relations = read_relations(a.id, j.at("relations"));
    if (j.contains("correction")) {
      const auto& c = j.at("correction");
      a.correction = ClassAssignment::Correction{c.at("basis").get<std::vector<std::string>>(),
                                                 read_relations(a.id, c.at("relations")),
                                                 c.value("note", std::string())};
      if (a.correction->basis.size() != 4)
        throw std::invalid_argument("class row " + a.id + ": need four corrected basis elements");
    }
    out.push_back(std::move(a));
  }
  return out;
}

const std::string& builtin_classes_text() {
  static const std::string text = data::classes_json;
  return text;
}

const std::vector<ClassAssignment>& builtin_classes() {
  static const std::vector<ClassAssignment> rows = classes_from_json(data::classes_json);
  return rows;
}

const ClassAssignment& find_class(const std::vector<ClassAssignment>& rows, const std::string& id) {
  for (const auto& r : rows) {
    if (r.id == id) return r;
  }
  throw UnknownEntry("no class assignment for '" + id + "'");
}

bool ClassReport::passed() const {
  if (sample_count() == 0) return false;
  for (const auto& c : cases) {
    for (const auto& s : c.samples) {
      if (!s.invertible || !s.matches) return false;
    }
  }
  return true;
}

int ClassReport::sample_count() const {
  int n = 0;
  for (const auto& c : cases) n += static_cast<int>(c.samples.size());
  return n;
}

namespace {

std::string resolve_abs(const std::string& text, const std::map<std::string, int>& signs) {
  std::string out = text;
  for (const auto& [p, s] : signs) {
    const std::string pat = "abs(" + p + ")";
    const std::string rep = s > 0 ? "(" + p + ")" : "(-" + p + ")";
    for (auto pos = out.find(pat); pos != std::string::npos; pos = out.find(pat, pos + rep.size()))
      out.replace(pos, pat.size(), rep);
  }
  return out;
}

// Coefficients of a linear form in `vars`, with `values` substituted.
ExprVector linear_coefficients(const std::string& text, const std::vector<std::string>& vars,
                               const std::set<std::string>& params, const std::map<std::string, Expr>& values) {
  SymbolTable syms;
  syms.parameters = params;
  syms.variables.insert(vars.begin(), vars.end());
  Expr e = parse(text, syms);
  ExprVector out;
  std::vector<Expr> rebuilt;
  for (const auto& v : vars) {
    Expr c = substitute(differentiate(e, v), values);
    if (!free_variables(c).empty()) throw std::invalid_argument("'" + text + "' is not linear");
    out.push_back(c);
    rebuilt.push_back(c * Expr::variable(v));
  }
  if (!equivalent(substitute(e, values), sum(rebuilt))) throw std::invalid_argument("'" + text + "' is not linear");
  return out;
}

const std::vector<std::string>& big_e() {
  static const std::vector<std::string> v{"E1", "E2", "E3", "E4"};
  return v;
}
const std::vector<std::string>& small_e() {
  static const std::vector<std::string> v{"e1", "e2", "e3", "e4"};
  return v;
}

struct Parsed {
  std::vector<ExprVector> m;                     // e_i in E coordinates
  std::vector<std::vector<ExprVector>> target;   // [i][j] in e coordinates
};

Parsed parse_assignment(const ClassAssignment& asg, const std::map<std::string, int>& signs,
                        const std::set<std::string>& params, const std::map<std::string, Expr>& values) {
  Parsed p;
  for (const auto& b : asg.basis)
    p.m.push_back(linear_coefficients(resolve_abs(b, signs), big_e(), params, values));
  p.target.assign(4, std::vector<ExprVector>(4, ExprVector(4, Expr(0))));
  std::vector<std::vector<bool>> set(4, std::vector<bool>(4, false));
  for (const auto& r : asg.relations) {
    ExprVector v = linear_coefficients(resolve_abs(r.rhs, signs), small_e(), params, values);
    const int i = r.i - 1, j = r.j - 1;
    if (set[i][j]) throw std::invalid_argument("class row " + asg.id + ": relation given twice");
    set[i][j] = set[j][i] = true;
    p.target[i][j] = v;
    for (auto& c : v) c = canonicalize(-c);
    p.target[j][i] = v;
  }
  return p;
}

ExprVector combine(const ExprVector& coeffs, const std::vector<ExprVector>& rows) {
  ExprVector out(rows.front().size(), Expr(0));
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = out[c] + coeffs[k] * rows[k][c];
  }
  for (auto& c : out) c = canonicalize(c);
  return out;
}

std::set<std::string> parameter_names(const CatalogEntry& ce) {
  std::set<std::string> out;
  for (const auto& p : ce.parameters) out.insert(p.name);
  return out;
}

std::string pair_name(int i, int j) { return "[e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + "]"; }

}  // namespace

ClassReport verify_class(const Catalog& catalog, const ClassAssignment& asg) {
  const CatalogEntry& ce = catalog.find(asg.id);
  const auto params = parameter_names(ce);
  const auto abs_params = asg.abs_parameters();
  for (const auto& p : abs_params) {
    if (!params.count(p)) throw std::invalid_argument("class row " + asg.id + ": abs of unknown parameter " + p);
  }
  ClassReport rep;
  rep.id = asg.id;
  rep.label = asg.label;
  const auto grid = catalog.parameter_grid(ce);
  const LieAlgebra& l12 = []() -> const LieAlgebra& {
    static const LieAlgebra a = l12_table();
    return a;
  }();

  const int ncases = 1 << abs_params.size();
  for (int mask = 0; mask < ncases; ++mask) {
    SignCase sc;
    for (std::size_t k = 0; k < abs_params.size(); ++k) sc.signs[abs_params[k]] = (mask >> k) & 1 ? -1 : 1;

    // Symbolic check: [e_i, e_j] - sum_k T_ijk e_k vanishes in L12 coordinates.
    {
      SubalgebraEntry sym = get_entry_symbolic(catalog, asg.id);
      std::map<std::string, Expr> values;
      for (const auto& [k, v] : sym.params) values[k] = Expr(v);
      for (const auto& s : sym.symbolic) values[s] = Expr::parameter(s);
      Parsed p = parse_assignment(asg, sc.signs, params, values);
      std::vector<ExprVector> e;
      for (const auto& row : p.m) e.push_back(combine(row, sym.basis));
      sc.symbolic_checked = true;
      sc.symbolic_matches = true;
      for (int i = 0; i < 4 && sc.symbolic_matches; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          ExprVector lhs = l12.bracket(e[i], e[j]);
          ExprVector rhs = combine(p.target[i][j], e);
          bool ok = true;
          for (std::size_t c = 0; c < lhs.size(); ++c) ok = ok && equivalent(lhs[c], rhs[c]);
          if (!ok) {
            sc.symbolic_matches = false;
            sc.symbolic_mismatch = pair_name(i, j);
            break;
          }
        }
      }
    }

    for (const auto& sample : grid) {
      bool in_case = true;
      for (const auto& [name, s] : sc.signs) {
        const Rational& v = sample.at(name);
        in_case = in_case && (s > 0 ? v > 0 : v < 0);
      }
      if (!in_case) continue;
      ClassSample cs;
      cs.params = sample;
      std::map<std::string, Expr> values;
      for (const auto& [k, v] : sample) values[k] = Expr(v);
      Parsed p = parse_assignment(asg, sc.signs, params, values);
      RationalMatrix m;
      for (const auto& row : p.m) {
        RationalVector r;
        for (const auto& c : row) {
          Rational v;
          if (!as_rational(c, &v)) throw std::logic_error("non-numeric change of basis");
          r.push_back(v);
        }
        m.push_back(std::move(r));
      }
      auto big = get_entry(catalog, asg.id, sample).rational_basis();
      RationalMatrix rows;
      for (const auto& mr : m) {
        RationalVector r(kL12Dim, Rational(0));
        for (int k = 0; k < 4; ++k) {
          for (int c = 0; c < kL12Dim; ++c) r[c] += mr[k] * (*big)[k][c];
        }
        rows.push_back(std::move(r));
      }
      auto cl = is_closed(l12, rows);
      cs.invertible = determinant(m) != 0 && cl.independent;
      if (!cs.invertible) {
        cs.mismatch = "change of basis is singular";
      } else if (!cl.closed) {
        cs.mismatch = "not closed at " + pair_name(cl.failing_i, cl.failing_j);
      } else {
        cs.induced = cl.induced;
        cs.matches = true;
        for (int i = 0; i < 4 && cs.matches; ++i) {
          for (int j = 0; j < 4 && cs.matches; ++j) {
            for (int k = 0; k < 4; ++k) {
              Rational want;
              if (!as_rational(p.target[i][j][k], &want)) throw std::logic_error("non-numeric target");
              if (cl.induced.constant(i, j, k) != want) {
                cs.matches = false;
                cs.mismatch = pair_name(i, j) + " component e" + std::to_string(k + 1) + ": got " +
                              cl.induced.constant(i, j, k).get_str() + ", stated " + want.get_str();
                break;
              }
            }
          }
        }
      }
      sc.samples.push_back(std::move(cs));
    }
    rep.cases.push_back(std::move(sc));
  }
  if (asg.correction) {
    ClassAssignment alt = asg;
    alt.basis = asg.correction->basis;
    alt.relations = asg.correction->relations;
    alt.correction.reset();
    rep.has_correction = true;
    rep.correction_passed = verify_class(catalog, alt).passed();
    rep.correction_note = asg.correction->note;
  }
  return rep;
}

Fingerprint entry_fingerprint(const Catalog& catalog, const std::string& id, const ParameterValues& params) {
  auto rows = get_entry(catalog, id, params).rational_basis();
  auto cl = is_closed(l12_table(), *rows);
  if (!cl.closed) throw std::invalid_argument("entry " + id + " is not closed at " + to_string(params));
  return fingerprint(cl.induced);
}

bool FingerprintConsistency::passed() const {
  return std::all_of(groups.begin(), groups.end(), [](const Group& g) { return g.consistent; });
}

FingerprintConsistency fingerprint_consistency(const Catalog& catalog, const std::vector<ClassAssignment>& rows) {
  FingerprintConsistency out;
  std::map<std::string, std::size_t> by_label;
  for (const auto& r : rows) {
    if (r.parametric) continue;
    auto it = by_label.find(r.label);
    if (it == by_label.end()) {
      it = by_label.emplace(r.label, out.groups.size()).first;
      out.groups.push_back({r.label, {}, "", true});
    }
    auto& g = out.groups[it->second];
    g.ids.push_back(r.id);
    for (const auto& sample : catalog.parameter_grid(catalog.find(r.id))) {
      std::string fp = to_string(entry_fingerprint(catalog, r.id, sample));
      if (g.fingerprint.empty() && g.consistent) {
        g.fingerprint = fp;
      } else if (fp != g.fingerprint) {
        g.consistent = false;
      }
    }
    if (!g.consistent) g.fingerprint.clear();
  }
  for (std::size_t a = 0; a < out.groups.size(); ++a) {
    for (std::size_t b = a + 1; b < out.groups.size(); ++b) {
      const auto& ga = out.groups[a];
      const auto& gb = out.groups[b];
      if (ga.consistent && gb.consistent && ga.fingerprint == gb.fingerprint)
        out.info.push_back(ga.label + " ~ " + gb.label + ": " + ga.fingerprint);
    }
  }
  return out;
}

}  // namespace gaslie
