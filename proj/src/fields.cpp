#include "gaslie/fields.hpp"

#include <algorithm>
#include <mutex>
#include <random>
#include <sstream>

namespace gaslie {
namespace {

const SymbolTable& cartesian_symbols() {
  static const SymbolTable s{{"t", "x", "y", "z", "u", "v", "w", "rho", "P"}, {}, {}};
  return s;
}

Chart make_chart(std::string name, std::vector<std::string> coords,
                 const std::vector<std::pair<std::string, std::string>>& forward,
                 const std::vector<std::pair<std::string, std::string>>& backward,
                 std::vector<Chart::Block> blocks, const std::set<std::string>& params = {}) {
  Chart c;
  c.name = std::move(name);
  c.coordinates = std::move(coords);
  c.blocks = std::move(blocks);
  SymbolTable chart_syms = c.symbols(params);
  SymbolTable cart_syms = cartesian_symbols();
  cart_syms.parameters = params;
  for (const auto& [k, text] : forward) c.forward[k] = canonicalize(parse(text, chart_syms));
  for (const auto& [k, text] : backward) c.backward[k] = parse(text, cart_syms);
  for (const auto& coord : c.coordinates) c.domain.set(coord, 0.5, 2.0);
  return c;
}

void set_angles(Chart& c, std::initializer_list<const char*> names) {
  for (const char* n : names) c.domain.set(n, 0.1, 1.47);
}

}  // namespace

const std::vector<std::string>& cartesian_coordinates() {
  static const std::vector<std::string> c = {"t", "x", "y", "z", "u", "v", "w", "rho", "P"};
  return c;
}

std::string Chart::key() const {
  if (name != "Dshift") return name;
  return "Dshift(b=" + to_infix(shift) + ")";
}

bool Chart::has_coordinate(const std::string& c) const {
  return std::find(coordinates.begin(), coordinates.end(), c) != coordinates.end();
}

SymbolTable Chart::symbols(const std::set<std::string>& parameters) const {
  SymbolTable s;
  s.variables.insert(coordinates.begin(), coordinates.end());
  s.parameters = parameters;
  s.functions = {"f"};
  return s;
}

const Chart& chart_cartesian() {
  static const Chart c = make_chart("D", cartesian_coordinates(), {}, {}, {});
  return c;
}

const Chart& chart_cylindrical() {
  static const Chart c = [] {
    Chart ch = make_chart(
        "C", {"t", "x", "r", "theta", "u", "q", "vartheta", "rho", "P"},
        {{"y", "r*cos(theta)"},
         {"z", "r*sin(theta)"},
         {"v", "q*cos(vartheta)*cos(theta) - q*sin(vartheta)*sin(theta)"},
         {"w", "q*cos(vartheta)*sin(theta) + q*sin(vartheta)*cos(theta)"}},
        {{"r", "sqrt(y^2 + z^2)"},
         {"theta", "atan2(z, y)"},
         {"q", "sqrt(v^2 + w^2)"},
         {"vartheta", "atan2(w*y - v*z, v*y + w*z)"}},
        {{{"y", "z"}, {"r", "theta"}}, {{"v", "w"}, {"q", "vartheta"}}});
    set_angles(ch, {"theta", "vartheta"});
    return ch;
  }();
  return c;
}

const Chart& chart_spherical() {
  static const Chart c = [] {
    const std::string us = "q_S*cos(vartheta_S)";
    const std::string vs = "q_S*sin(vartheta_S)*cos(varphi)";
    const std::string ws = "q_S*sin(vartheta_S)*sin(varphi)";
    const std::string radial = "(" + us + "*sin(theta_S) + " + vs + "*cos(theta_S))";
    Chart ch = make_chart(
        "S", {"t", "r_S", "theta_S", "phi", "q_S", "vartheta_S", "varphi", "rho", "P"},
        {{"x", "r_S*sin(theta_S)*cos(phi)"},
         {"y", "r_S*sin(theta_S)*sin(phi)"},
         {"z", "r_S*cos(theta_S)"},
         {"u", radial + "*cos(phi) - " + ws + "*sin(phi)"},
         {"v", radial + "*sin(phi) + " + ws + "*cos(phi)"},
         {"w", us + "*cos(theta_S) - " + vs + "*sin(theta_S)"}},
        {{"r_S", "sqrt(x^2 + y^2 + z^2)"},
         {"theta_S", "atan2(sqrt(x^2 + y^2), z)"},
         {"phi", "atan2(y, x)"},
         {"q_S", "sqrt(u^2 + v^2 + w^2)"},
         {"vartheta_S", "atan2(sqrt((y*w - z*v)^2 + (z*u - x*w)^2 + (x*v - y*u)^2), x*u + y*v + z*w)"},
         {"varphi", "atan2((x*v - y*u)*sqrt(x^2 + y^2 + z^2), z*(x*u + y*v) - (x^2 + y^2)*w)"}},
        {{{"x", "y", "z"}, {"r_S", "theta_S", "phi"}}, {{"u", "v", "w"}, {"q_S", "vartheta_S", "varphi"}}});
    set_angles(ch, {"theta_S", "phi", "vartheta_S", "varphi"});
    return ch;
  }();
  return c;
}

Chart chart_shifted(const Expr& b) {
  std::set<std::string> params = free_parameters(b);
  for (const auto& v : free_variables(b)) params.insert(v);
  Chart ch = make_chart("Dshift", {"t", "x", "y", "z", "u", "qbar", "varthetabar", "rho", "P"}, {}, {},
                        {{{"v", "w"}, {"qbar", "varthetabar"}}}, params);
  ch.shift = canonicalize(b);
  SymbolTable syms = ch.symbols(params);
  auto bind = [&](const std::string& text, const SymbolTable& s) {
    return canonicalize(replace(parse(text, s), {{"__b", ch.shift}}));
  };
  syms.variables.insert("__b");
  ch.forward["v"] = bind("(t*y + __b*z)/(t^2 + __b^2) + qbar*cos(varthetabar)", syms);
  ch.forward["w"] = bind("(t*z - __b*y)/(t^2 + __b^2) + qbar*sin(varthetabar)", syms);
  SymbolTable cart = cartesian_symbols();
  cart.variables.insert("__b");
  cart.parameters = params;
  const std::string dv = "(v - (t*y + __b*z)/(t^2 + __b^2))";
  const std::string dw = "(w - (t*z - __b*y)/(t^2 + __b^2))";
  auto raw = [&](const std::string& text) { return replace(parse(text, cart), {{"__b", ch.shift}}); };
  ch.backward["qbar"] = raw("sqrt(" + dv + "^2 + " + dw + "^2)");
  ch.backward["varthetabar"] = raw("atan2(" + dw + ", " + dv + ")");
  set_angles(ch, {"varthetabar"});
  return ch;
}

Chart chart_by_name(const std::string& name, const Expr& shift) {
  if (name == "D") return chart_cartesian();
  if (name == "C") return chart_cylindrical();
  if (name == "S") return chart_spherical();
  if (name == "Dshift") return chart_shifted(shift);
  throw std::invalid_argument("unknown chart " + name);
}

// --- vector fields ---------------------------------------------------------------

Expr VectorField::component(const std::string& coord) const {
  auto it = components.find(coord);
  return it == components.end() ? Expr(0) : it->second;
}

std::string to_string(const VectorField& f) {
  if (f.components.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : f.components) {
    if (!first) os << " + ";
    first = false;
    os << "(" << to_infix(c) << ")*d_" << k;
  }
  return os.str();
}

namespace {

VectorField cartesian_generator(int i) {
  static const std::vector<std::vector<std::pair<std::string, std::string>>> table = {
      {{"P", "1"}},
      {{"x", "1"}},
      {{"y", "1"}},
      {{"z", "1"}},
      {{"x", "t"}, {"u", "1"}},
      {{"y", "t"}, {"v", "1"}},
      {{"z", "t"}, {"w", "1"}},
      {{"z", "y"}, {"y", "-z"}, {"w", "v"}, {"v", "-w"}},
      {{"x", "z"}, {"z", "-x"}, {"u", "w"}, {"w", "-u"}},
      {{"y", "x"}, {"x", "-y"}, {"v", "u"}, {"u", "-v"}},
      {{"t", "1"}},
      {{"t", "t"}, {"x", "x"}, {"y", "y"}, {"z", "z"}},
  };
  VectorField f;
  f.chart = "D";
  for (const auto& [k, text] : table.at(i)) f.components[k] = canonicalize(parse(text, cartesian_symbols()));
  return f;
}

struct BlockInverse {
  std::vector<std::vector<Expr>> jacobian;  // d forward[cartesian a] / d chart b
  std::vector<std::vector<Expr>> adjugate;
  Expr inv_det;
};

Expr det_expr(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  if (n == 1) return m[0][0];
  if (n == 2) return canonicalize(m[0][0] * m[1][1] - m[0][1] * m[1][0]);
  std::vector<Expr> terms;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Expr> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j) row.push_back(m[i][k]);
      }
      minor.push_back(std::move(row));
    }
    Expr t = m[0][j] * det_expr(minor);
    terms.push_back(j % 2 ? -t : t);
  }
  return canonicalize(sum(terms));
}

BlockInverse invert_block(const Chart& chart, const Chart::Block& b) {
  const std::size_t n = b.cartesian.size();
  BlockInverse out;
  out.jacobian.assign(n, std::vector<Expr>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < n; ++k)
      out.jacobian[a][k] = differentiate(chart.forward.at(b.cartesian[a]), b.chart[k]);
  }
  Expr det = det_expr(out.jacobian);
  if (det.is_zero()) throw std::domain_error("chart " + chart.key() + " has a singular Jacobian");
  out.inv_det = canonicalize(pow(det, -1));
  out.adjugate.assign(n, std::vector<Expr>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // adj[i][j] = (-1)^(i+j) * minor(j, i)
      std::vector<std::vector<Expr>> minor;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        for (std::size_t c = 0; c < n; ++c) {
          if (c != i) row.push_back(out.jacobian[r][c]);
        }
        minor.push_back(std::move(row));
      }
      Expr m = n == 1 ? Expr(1) : det_expr(minor);
      out.adjugate[i][j] = (i + j) % 2 ? canonicalize(-m) : m;
    }
  }
  return out;
}

const std::vector<BlockInverse>& block_inverses(const Chart& chart) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<std::vector<BlockInverse>>> cache;
  std::shared_ptr<std::vector<BlockInverse>> slot;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(chart.key());
    if (it != cache.end()) return *it->second;
  }
  auto computed = std::make_shared<std::vector<BlockInverse>>();
  for (const auto& b : chart.blocks) computed->push_back(invert_block(chart, b));
  std::lock_guard<std::mutex> lock(mu);
  return *cache.emplace(chart.key(), std::move(computed)).first->second;
}

void prune(VectorField& f) {
  for (auto it = f.components.begin(); it != f.components.end();) {
    if (it->second.is_zero()) {
      it = f.components.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

VectorField pushforward(const VectorField& f, const Chart& target) {
  if (f.chart != "D") throw std::invalid_argument("pushforward expects a Cartesian field");
  if (target.name == "D") return f;
  const auto& inverses = block_inverses(target);
  VectorField out;
  out.chart = target.key();
  std::map<std::string, Expr> subs(target.forward.begin(), target.forward.end());
  std::vector<std::string> known;  // chart coordinates already solved
  for (const auto& c : target.coordinates) {
    if (!target.forward.count(c) && std::find(cartesian_coordinates().begin(), cartesian_coordinates().end(), c) !=
                                        cartesian_coordinates().end()) {
      out.components[c] = substitute(f.component(c), subs);
      known.push_back(c);
    }
  }
  for (std::size_t bi = 0; bi < target.blocks.size(); ++bi) {
    const auto& block = target.blocks[bi];
    const auto& inv = inverses[bi];
    const std::size_t n = block.cartesian.size();
    std::vector<Expr> rhs(n);
    for (std::size_t a = 0; a < n; ++a) {
      const Expr& phi = target.forward.at(block.cartesian[a]);
      std::vector<Expr> terms{substitute(f.component(block.cartesian[a]), subs)};
      for (const auto& c : known) {
        Expr fc = out.component(c);
        if (fc.is_zero()) continue;
        Expr d = differentiate(phi, c);
        if (!d.is_zero()) terms.push_back(-(d * fc));
      }
      rhs[a] = canonicalize(sum(terms));
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Expr> terms;
      for (std::size_t j = 0; j < n; ++j) {
        if (!rhs[j].is_zero() && !inv.adjugate[i][j].is_zero()) terms.push_back(inv.adjugate[i][j] * rhs[j]);
      }
      out.components[block.chart[i]] = canonicalize(sum(terms) * inv.inv_det);
    }
    known.insert(known.end(), block.chart.begin(), block.chart.end());
  }
  prune(out);
  return out;
}

VectorField realize(int i, const Chart& chart) {
  if (i < 0 || i >= kL12Dim) throw std::out_of_range("generator index out of range");
  static std::mutex mu;
  static std::map<std::string, std::vector<VectorField>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(chart.key());
    if (it != cache.end()) return it->second[i];
  }
  std::vector<VectorField> all;
  for (int k = 0; k < kL12Dim; ++k) all.push_back(pushforward(cartesian_generator(k), chart));
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(chart.key(), std::move(all)).first->second[i];
}

VectorField realize(const ExprVector& coefficients, const Chart& chart) {
  if (coefficients.size() != static_cast<std::size_t>(kL12Dim))
    throw std::invalid_argument("realize: need 12 coefficients");
  VectorField out;
  out.chart = chart.key();
  std::map<std::string, std::vector<Expr>> terms;
  for (int i = 0; i < kL12Dim; ++i) {
    if (coefficients[i].is_zero()) continue;
    for (const auto& [k, c] : realize(i, chart).components) terms[k].push_back(coefficients[i] * c);
  }
  for (auto& [k, ts] : terms) out.components[k] = canonicalize(sum(ts));
  prune(out);
  return out;
}

Expr apply(const VectorField& f, const Expr& e, const Chart& chart) {
  for (const auto& v : free_variables(e)) {
    if (!chart.has_coordinate(v))
      throw std::invalid_argument("variable " + v + " is not a coordinate of chart " + chart.key());
  }
  std::vector<Expr> terms;
  for (const auto& [k, c] : f.components) {
    Expr d = differentiate(e, k);
    if (!d.is_zero()) terms.push_back(c * d);
  }
  return canonicalize(sum(terms));
}

VectorField vf_commutator(const VectorField& f, const VectorField& g, const Chart& chart) {
  if (f.chart != g.chart) throw std::invalid_argument("vf_commutator: chart mismatch");
  VectorField out;
  out.chart = f.chart;
  std::set<std::string> keys;
  for (const auto& [k, c] : f.components) keys.insert(k);
  for (const auto& [k, c] : g.components) keys.insert(k);
  for (const auto& k : keys) {
    out.components[k] = canonicalize(apply(f, g.component(k), chart) - apply(g, f.component(k), chart));
  }
  prune(out);
  return out;
}

VectorField scale(const VectorField& f, const Expr& c) {
  VectorField out;
  out.chart = f.chart;
  for (const auto& [k, v] : f.components) out.components[k] = canonicalize(c * v);
  prune(out);
  return out;
}

VectorField add(const VectorField& f, const VectorField& g) {
  if (f.chart != g.chart) throw std::invalid_argument("add: chart mismatch");
  VectorField out = f;
  for (const auto& [k, v] : g.components) out.components[k] = canonicalize(out.component(k) + v);
  prune(out);
  return out;
}

bool is_zero(const VectorField& f) { return f.components.empty(); }

std::optional<RationalVector> decompose(const VectorField& f) {
  // Exact evaluation of the coefficients at rational points; each generator
  // coefficient is linear in the coordinates, so a handful of points suffices
  // to pin down a candidate, which is then verified symbolically.
  static const std::vector<std::map<std::string, Expr>> points = [] {
    std::vector<std::map<std::string, Expr>> pts;
    const int vals[][9] = {{0, 0, 0, 0, 0, 0, 0, 1, 1}, {1, 2, 3, 5, 7, 11, 13, 1, 1},
                           {2, -1, 4, -3, 5, 2, -7, 1, 1}, {-3, 5, -2, 7, 1, -4, 3, 1, 1}};
    for (const auto& row : vals) {
      std::map<std::string, Expr> p;
      for (int k = 0; k < 9; ++k) p[cartesian_coordinates()[k]] = Expr(row[k]);
      pts.push_back(std::move(p));
    }
    return pts;
  }();
  std::vector<VectorField> gens;
  for (int i = 0; i < kL12Dim; ++i) gens.push_back(cartesian_generator(i));
  RationalMatrix a;
  RationalVector rhs;
  for (const auto& pt : points) {
    for (const auto& coord : cartesian_coordinates()) {
      RationalVector row(kL12Dim);
      for (int i = 0; i < kL12Dim; ++i) {
        if (!as_rational(substitute(gens[i].component(coord), pt), &row[i])) return std::nullopt;
      }
      Rational r;
      if (!as_rational(substitute(f.component(coord), pt), &r)) return std::nullopt;
      a.push_back(std::move(row));
      rhs.push_back(std::move(r));
    }
  }
  // Least-squares is unnecessary: solve the (consistent) system exactly.
  RationalMatrix cols(kL12Dim, RationalVector(a.size()));
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (int i = 0; i < kL12Dim; ++i) cols[i][r] = a[r][i];
  }
  auto c = solve_in_span(cols, rhs);
  if (!c) return std::nullopt;
  VectorField check;
  check.chart = "D";
  for (int i = 0; i < kL12Dim; ++i) {
    if (sgn((*c)[i]) != 0) check = add(check, scale(gens[i], Expr((*c)[i])));
  }
  if (!(check == f)) return std::nullopt;
  return c;
}

LieAlgebra realized_algebra() {
  LieAlgebra alg(l12_labels());
  std::vector<VectorField> gens;
  for (int i = 0; i < kL12Dim; ++i) gens.push_back(cartesian_generator(i));
  for (int i = 0; i < kL12Dim; ++i) {
    for (int j = i + 1; j < kL12Dim; ++j) {
      VectorField c = vf_commutator(gens[i], gens[j], chart_cartesian());
      auto coeffs = decompose(c);
      if (!coeffs) throw std::logic_error("commutator of generators " + l12_labels()[i] + ", " + l12_labels()[j] +
                                          " is outside the algebra");
      alg.set_bracket(i, j, *coeffs);
    }
  }
  return alg;
}

std::vector<CoherenceFailure> chart_coherence(const Chart& chart) {
  std::vector<CoherenceFailure> failures;
  std::map<std::string, Expr> subs(chart.forward.begin(), chart.forward.end());
  for (int i = 0; i < kL12Dim; ++i) {
    VectorField pushed = realize(i, chart);
    VectorField cart = cartesian_generator(i);
    for (const auto& coord : cartesian_coordinates()) {
      auto it = chart.forward.find(coord);
      Expr phi = it == chart.forward.end() ? Expr::variable(coord) : it->second;
      Expr lhs = apply(pushed, phi, chart);
      Expr rhs = substitute(cart.component(coord), subs);
      Expr residual = canonicalize(lhs - rhs);
      if (!residual.is_zero()) failures.push_back({i, coord, residual});
    }
  }
  return failures;
}

RoundTrip round_trip(const Chart& chart, int points, std::uint64_t seed, const Assignment& parameters) {
  RoundTrip out;
  out.points = points;
  std::mt19937_64 rng(seed);
  auto draw = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  for (int n = 0; n < points; ++n) {
    Assignment chart_pt = parameters;
    for (const auto& [name, range] : chart.domain.intervals) chart_pt.values[name] = draw(range.first, range.second);
    Assignment cart_pt = parameters;
    for (const auto& c : cartesian_coordinates()) {
      auto it = chart.forward.find(c);
      cart_pt.values[c] = it == chart.forward.end() ? chart_pt.values.at(c) : eval(it->second, chart_pt);
    }
    for (const auto& c : chart.coordinates) {
      auto it = chart.backward.find(c);
      double back = it == chart.backward.end() ? cart_pt.values.at(c) : eval(it->second, cart_pt);
      out.max_error_chart = std::max(out.max_error_chart, std::abs(back - chart_pt.values.at(c)));
    }

    Assignment d_pt = parameters;
    for (const auto& c : cartesian_coordinates()) d_pt.values[c] = draw(0.5, 2.0);
    Assignment via = parameters;
    for (const auto& c : chart.coordinates) {
      auto it = chart.backward.find(c);
      via.values[c] = it == chart.backward.end() ? d_pt.values.at(c) : eval(it->second, d_pt);
    }
    for (const auto& c : cartesian_coordinates()) {
      auto it = chart.forward.find(c);
      double back = it == chart.forward.end() ? via.values.at(c) : eval(it->second, via);
      out.max_error_cartesian = std::max(out.max_error_cartesian, std::abs(back - d_pt.values.at(c)));
    }
  }
  return out;
}

}  // namespace gaslie
