#include "gaslie/catalog.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "gaslie/numerics.hpp"
#include "json.hpp"

namespace gaslie {

namespace data {
extern const char* const catalog_json;
}

using nlohmann::json;

std::string to_string(const ParameterValues& p) {
  std::string out;
  for (const auto& [k, v] : p) {
    if (!out.empty()) out += ",";
    out += k + "=" + v.get_str();
  }
  return out;
}

std::string CatalogEntry::item() const {
  auto second_dot = id.find('.', id.find('.') + 1);
  return second_dot == std::string::npos ? id : id.substr(0, second_dot);
}

std::vector<std::string> CatalogEntry::free_parameters() const {
  std::vector<std::string> out;
  for (const auto& p : parameters) {
    if (p.role != ParameterSpec::Role::Fixed) out.push_back(p.name);
  }
  return out;
}

namespace {

Rational parse_rational(const std::string& s) {
  Rational r(s);
  r.canonicalize();
  return r;
}

}  // namespace

Catalog Catalog::from_json(const std::string& text) {
  json doc = json::parse(text);
  Catalog c;
  for (const auto& g : doc.at("grid")) c.grid_.push_back(parse_rational(g.get<std::string>()));
  for (const auto& p : doc.at("unit_pairs"))
    c.unit_pairs_.emplace_back(parse_rational(p.at(0).get<std::string>()), parse_rational(p.at(1).get<std::string>()));
  for (const auto& b : doc.at("binary")) c.binary_.push_back(parse_rational(b.get<std::string>()));
  for (const auto& j : doc.at("entries")) {
    CatalogEntry e;
    e.id = j.at("id").get<std::string>();
    if (j.contains("parameters")) {
      for (const auto& [name, role] : j.at("parameters").items()) {
        ParameterSpec spec;
        spec.name = name;
        const auto r = role.get<std::string>();
        if (r == "grid") {
          spec.role = ParameterSpec::Role::Grid;
        } else if (r == "unit") {
          spec.role = ParameterSpec::Role::Unit;
        } else if (r == "binary") {
          spec.role = ParameterSpec::Role::Binary;
        } else {
          spec.role = ParameterSpec::Role::Fixed;
          spec.fixed = parse_rational(r);
        }
        e.parameters.push_back(spec);
      }
    }
    if (j.contains("constraints")) e.constraints = j.at("constraints").get<std::vector<std::string>>();
    e.basis = j.at("basis").get<std::vector<std::string>>();
    if (e.basis.size() != 4) throw std::invalid_argument("entry " + e.id + ": basis must have four elements");
    e.chart = j.at("chart").get<std::string>();
    if (j.contains("shift")) e.shift = j.at("shift").get<std::string>();
    e.invariants = j.at("invariants").get<std::vector<std::string>>();
    if (e.invariants.size() != 4) throw std::invalid_argument("entry " + e.id + ": need four invariants");
    if (j.contains("flags")) e.flags = j.at("flags").get<std::vector<std::string>>();
    c.entries_.push_back(std::move(e));
  }
  return c;
}

const std::string& Catalog::builtin_text() {
  static const std::string text = data::catalog_json;
  return text;
}

const Catalog& Catalog::builtin() {
  static const Catalog c = from_json(builtin_text());
  return c;
}

const CatalogEntry& Catalog::find(const std::string& id) const {
  for (const auto& e : entries_) {
    if (e.id == id) return e;
  }
  throw UnknownEntry("unknown catalog entry '" + id + "'");
}

std::vector<std::string> Catalog::resolve(const std::string& id_or_item) const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (id_or_item == "all" || e.id == id_or_item || e.item() == id_or_item) out.push_back(e.id);
  }
  if (out.empty()) throw UnknownEntry("unknown catalog entry '" + id_or_item + "'");
  return out;
}

bool satisfies(const CatalogEntry& e, const ParameterValues& params, std::string* violated) {
  SymbolTable syms;
  std::map<std::string, Expr> values;
  for (const auto& [k, v] : params) {
    syms.variables.insert(k);
    values[k] = Expr(v);
  }
  for (const auto& c : e.constraints) {
    bool negate = false;
    auto pos = c.find("!=");
    std::size_t width = 2;
    if (pos == std::string::npos) {
      pos = c.find('=');
      width = 1;
    } else {
      negate = true;
    }
    if (pos == std::string::npos) throw std::invalid_argument("malformed constraint '" + c + "'");
    Expr diff = parse(c.substr(0, pos), syms) - parse(c.substr(pos + width), syms);
    Rational v;
    if (!as_rational(substitute(diff, values), &v))
      throw std::invalid_argument("constraint '" + c + "' does not reduce to a number");
    bool ok = negate ? v != 0 : v == 0;
    if (!ok) {
      if (violated) *violated = c;
      return false;
    }
  }
  return true;
}

std::vector<ParameterValues> Catalog::parameter_grid(const CatalogEntry& e) const {
  std::vector<ParameterValues> out{ParameterValues{}};
  std::vector<std::string> unit_names;
  for (const auto& p : e.parameters) {
    if (p.role == ParameterSpec::Role::Unit) unit_names.push_back(p.name);
  }
  if (unit_names.size() != 0 && unit_names.size() != 2)
    throw std::invalid_argument("entry " + e.id + ": unit parameters come in pairs");
  bool unit_done = false;
  for (const auto& p : e.parameters) {
    std::vector<ParameterValues> next;
    for (const auto& base : out) {
      switch (p.role) {
        case ParameterSpec::Role::Fixed: {
          auto b = base;
          b[p.name] = p.fixed;
          next.push_back(std::move(b));
          break;
        }
        case ParameterSpec::Role::Grid:
        case ParameterSpec::Role::Binary:
          for (const auto& v : p.role == ParameterSpec::Role::Grid ? grid_ : binary_) {
            auto b = base;
            b[p.name] = v;
            next.push_back(std::move(b));
          }
          break;
        case ParameterSpec::Role::Unit:
          if (unit_done) {
            next.push_back(base);
            break;
          }
          for (const auto& [first, second] : unit_pairs_) {
            auto b = base;
            b[unit_names[0]] = first;
            b[unit_names[1]] = second;
            next.push_back(std::move(b));
          }
          break;
      }
    }
    if (p.role == ParameterSpec::Role::Unit) unit_done = true;
    out = std::move(next);
  }
  std::erase_if(out, [&](const ParameterValues& pv) { return !satisfies(e, pv); });
  return out;
}

std::optional<RationalMatrix> SubalgebraEntry::rational_basis() const {
  RationalMatrix m;
  for (const auto& row : basis) {
    RationalVector r;
    for (const auto& c : row) {
      Rational v;
      if (!as_rational(c, &v)) return std::nullopt;
      r.push_back(v);
    }
    m.push_back(std::move(r));
  }
  return m;
}

namespace {

// Parses "Y + a*X1 + b*X10" into a coefficient vector on (Y, X1, ..., X11).
ExprVector parse_basis_element(const std::string& text, const std::set<std::string>& params,
                               const std::map<std::string, Expr>& values) {
  SymbolTable syms;
  syms.parameters = params;
  for (const auto& l : l12_labels()) syms.variables.insert(l);
  Expr e = parse(text, syms);
  ExprVector coeffs;
  std::vector<Expr> rebuilt;
  for (const auto& l : l12_labels()) {
    Expr c = substitute(differentiate(e, l), values);
    if (!free_variables(c).empty()) throw std::invalid_argument("basis element '" + text + "' is not linear");
    coeffs.push_back(c);
    rebuilt.push_back(c * Expr::variable(l));
  }
  if (!equivalent(substitute(e, values), sum(rebuilt)))
    throw std::invalid_argument("basis element '" + text + "' has a constant term");
  return coeffs;
}

SubalgebraEntry instantiate(const CatalogEntry& ce, const ParameterValues& numeric,
                            const std::vector<std::string>& symbolic) {
  SubalgebraEntry out;
  out.id = ce.id;
  out.params = numeric;
  out.symbolic = symbolic;
  out.flags = ce.flags;
  std::set<std::string> param_names;
  std::map<std::string, Expr> values;
  for (const auto& p : ce.parameters) param_names.insert(p.name);
  for (const auto& [k, v] : numeric) values[k] = Expr(v);
  for (const auto& s : symbolic) values[s] = Expr::parameter(s);
  for (const auto& b : ce.basis) out.basis.push_back(parse_basis_element(b, param_names, values));
  Expr shift(0);
  if (ce.chart == "Dshift") {
    SymbolTable ps;
    ps.parameters = param_names;
    shift = ce.shift.empty() ? Expr(0) : substitute(parse(ce.shift, ps), values);
  }
  out.chart = chart_by_name(ce.chart, shift);
  SymbolTable syms = out.chart.symbols(param_names);
  for (const auto& inv : ce.invariants) out.invariants.push_back(substitute(parse(inv, syms), values));
  return out;
}

}  // namespace

SubalgebraEntry get_entry(const Catalog& catalog, const std::string& id, const ParameterValues& params) {
  const CatalogEntry& ce = catalog.find(id);
  ParameterValues full;
  for (const auto& p : ce.parameters) {
    if (p.role == ParameterSpec::Role::Fixed) {
      auto it = params.find(p.name);
      if (it != params.end() && it->second != p.fixed)
        throw ConstraintViolation("entry " + id + " requires " + p.name + " = " + p.fixed.get_str());
      full[p.name] = p.fixed;
      continue;
    }
    auto it = params.find(p.name);
    if (it == params.end()) throw ConstraintViolation("entry " + id + " needs a value for parameter " + p.name);
    full[p.name] = it->second;
  }
  for (const auto& [k, v] : params) {
    if (!full.count(k)) throw ConstraintViolation("entry " + id + " has no parameter " + k);
  }
  std::string violated;
  if (!satisfies(ce, full, &violated))
    throw ConstraintViolation("entry " + id + " with " + to_string(full) + " violates " + violated);
  return instantiate(ce, full, {});
}

SubalgebraEntry get_entry_symbolic(const Catalog& catalog, const std::string& id) {
  const CatalogEntry& ce = catalog.find(id);
  ParameterValues fixed;
  for (const auto& p : ce.parameters) {
    if (p.role == ParameterSpec::Role::Fixed) fixed[p.name] = p.fixed;
  }
  return instantiate(ce, fixed, ce.free_parameters());
}

bool VerificationReport::annihilated() const {
  return verdicts.size() == 16 && std::all_of(verdicts.begin(), verdicts.end(), [](const PairVerdict& v) {
           return v.test.verdict != ZeroVerdict::NonZero;
         });
}

bool VerificationReport::passed() const { return closed && independent && annihilated() && rank == 5; }

std::uint64_t derive_seed(std::uint64_t base, const std::string& label) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::uint64_t z = base ^ h;
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

int independence_rank(const std::vector<Expr>& functions, const Chart& chart, const Assignment& bindings,
                      int points, double tolerance, std::uint64_t seed) {
  std::vector<std::vector<Expr>> jac;
  for (const auto& f : functions) {
    std::vector<Expr> row;
    for (const auto& c : chart.coordinates) row.push_back(differentiate(f, c));
    jac.push_back(std::move(row));
  }
  Rng rng(seed);
  int best = 0;
  for (int p = 0; p < points; ++p) {
    Assignment a = bindings;
    for (const auto& [name, range] : chart.domain.intervals) a.values[name] = rng.uniform(range.first, range.second);
    Matrix m;
    for (const auto& row : jac) {
      std::vector<double> r;
      for (const auto& d : row) r.push_back(eval(d, a));
      m.push_back(std::move(r));
    }
    best = std::max(best, numeric_rank(m, tolerance));
  }
  return best;
}

namespace {

Assignment parameter_assignment(const ParameterValues& p) {
  Assignment a;
  for (const auto& [k, v] : p) a.values[k] = v.get_d();
  return a;
}

}  // namespace

int independence_rank(const SubalgebraEntry& entry, const VerifyOptions& opts) {
  if (!entry.symbolic.empty()) throw std::invalid_argument("independence_rank needs numeric parameters");
  std::vector<Expr> fs = entry.invariants;
  fs.push_back(Expr::variable("rho"));
  return independence_rank(fs, entry.chart, parameter_assignment(entry.params), opts.rank_points,
                           opts.rank_tolerance, derive_seed(opts.seed, entry.id + "/" + to_string(entry.params)));
}

namespace {

VerificationReport verify_with(const SubalgebraEntry& entry, const Assignment& numeric_params,
                               const VerifyOptions& opts) {
  VerificationReport rep;
  rep.id = entry.id;
  rep.params = entry.params;
  rep.symbolic = entry.symbolic;
  rep.flags = entry.flags;
  if (auto rows = entry.rational_basis()) {
    auto cl = is_closed(l12_table(), *rows);
    rep.closed = cl.closed;
    rep.independent = cl.independent;
  }
  std::set<std::string> coords(entry.chart.coordinates.begin(), entry.chart.coordinates.end());
  for (const auto& inv : entry.invariants) {
    for (const auto& v : free_variables(inv)) {
      if (!coords.count(v)) throw std::invalid_argument("entry " + entry.id + ": invariant uses " + v);
    }
  }
  ZeroTestOptions zo = opts.zero;
  zo.seed = derive_seed(opts.seed, entry.id + "/" + to_string(entry.params));
  for (int g = 0; g < 4; ++g) {
    VectorField f = realize(entry.basis[g], entry.chart);
    for (int i = 0; i < 4; ++i) {
      PairVerdict pv;
      pv.generator = g;
      pv.invariant = i;
      Expr r = apply(f, entry.invariants[i], entry.chart);
      pv.test = is_zero(r, entry.chart.domain, numeric_params, zo);
      if (pv.test.verdict != ZeroVerdict::SymbolicZero) pv.residual = to_infix(r);
      rep.verdicts.push_back(std::move(pv));
    }
  }
  if (entry.symbolic.empty()) rep.rank = independence_rank(entry, opts);
  return rep;
}

}  // namespace

VerificationReport verify_invariants(const SubalgebraEntry& entry, const VerifyOptions& opts) {
  Assignment a = parameter_assignment(entry.params);
  if (!entry.symbolic.empty()) {
    // Numeric fallback for symbolic parameters: bind them to the first
    // admissible grid sample.
    const auto& cat = Catalog::builtin();
    auto grid = cat.parameter_grid(cat.find(entry.id));
    if (!grid.empty()) a = parameter_assignment(grid.front());
  }
  return verify_with(entry, a, opts);
}

bool EntryReport::passed() const {
  if (instances.empty()) return false;
  return std::all_of(instances.begin(), instances.end(), [](const VerificationReport& r) { return r.passed(); });
}

EntryReport verify_entry(const Catalog& catalog, const std::string& id, const VerifyOptions& opts) {
  EntryReport out;
  out.id = id;
  const CatalogEntry& ce = catalog.find(id);
  auto grid = catalog.parameter_grid(ce);
  {
    SubalgebraEntry sym = get_entry_symbolic(catalog, id);
    Assignment a = parameter_assignment(grid.empty() ? ParameterValues{} : grid.front());
    out.symbolic = verify_with(sym, a, opts);
  }
  for (const auto& p : grid) out.instances.push_back(verify_invariants(get_entry(catalog, id, p), opts));
  // Closure in symbolic mode is the conjunction over the grid.
  out.symbolic.closed = !out.instances.empty();
  out.symbolic.independent = !out.instances.empty();
  for (const auto& inst : out.instances) {
    out.symbolic.closed = out.symbolic.closed && inst.closed;
    out.symbolic.independent = out.symbolic.independent && inst.independent;
  }
  for (const auto& v : out.symbolic.verdicts) {
    if (v.test.verdict == ZeroVerdict::SymbolicZero) continue;
    bool sampled_zero = std::all_of(out.instances.begin(), out.instances.end(), [&](const VerificationReport& r) {
      return r.verdicts[v.generator * 4 + v.invariant].test.verdict != ZeroVerdict::NonZero;
    });
    if (sampled_zero) out.simplifier_gaps.push_back(std::to_string(v.generator) + "," + std::to_string(v.invariant));
  }
  return out;
}

}  // namespace gaslie
