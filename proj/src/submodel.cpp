#include "gaslie/submodel.hpp"

#include <cmath>
#include <stdexcept>

namespace gaslie {

Expr sym(const std::string& name) { return Expr::variable(name); }
Expr param(const std::string& name) { return Expr::parameter(name); }

const SymbolTable& solution_symbols() {
  static const SymbolTable s{{"t", "x", "y", "z", "x0", "y0", "z0", "u0"},
                             {"rho0", "k0", "m0", "v0", "w0", "n0", "P0"},
                             {"f"}};
  return s;
}

namespace {

Expr d(const Expr& e, const char* v) { return differentiate(e, v); }

Expr material(const Expr& F, const Expr& u, const Expr& v, const Expr& w) {
  return d(F, "t") + u * d(F, "x") + v * d(F, "y") + w * d(F, "z");
}

Expr fprime(const Expr& rho) { return Expr::function("f", 1, rho); }

Expr p(const std::string& text) { return parse(text, solution_symbols()); }

}  // namespace

Residuals GasSystem::residuals(const Expr& u, const Expr& v, const Expr& w, const Expr& rho, const Expr& P) {
  Expr div = d(u, "x") + d(v, "y") + d(w, "z");
  Expr inv = pow(rho, -1);
  return {canonicalize(material(u, u, v, w) + inv * d(P, "x")),
          canonicalize(material(v, u, v, w) + inv * d(P, "y")),
          canonicalize(material(w, u, v, w) + inv * d(P, "z")),
          canonicalize(material(rho, u, v, w) + rho * div),
          canonicalize(material(P, u, v, w) + rho * fprime(rho) * div)};
}

Residuals reduced_residuals(const SubmodelCandidate& c) {
  for (const Expr* e : {&c.v, &c.w, &c.rho, &c.P1}) {
    for (const char* s : {"x", "y", "z"}) {
      if (!d(*e, s).is_zero()) throw std::invalid_argument("submodel unknowns other than u depend on t only");
    }
  }
  Expr Du = material(c.u, c.u, c.v, c.w);
  Expr ux = d(c.u, "x");
  Expr inv = pow(c.rho, -1);
  return {canonicalize(Du + inv * ux),
          canonicalize(d(c.v, "t") + inv * d(c.u, "y")),
          canonicalize(d(c.w, "t") + inv * d(c.u, "z")),
          canonicalize(d(c.rho, "t") + c.rho * ux),
          canonicalize(d(c.P1, "t") + Du + c.rho * fprime(c.rho) * ux)};
}

const char* to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::IsochoricGeneral:
      return "isochoric-general";
    case SolutionKind::IsochoricReduced:
      return "isochoric-reduced";
    case SolutionKind::NonisochoricGeneral:
      return "nonisochoric-general";
    case SolutionKind::NonisochoricReduced:
      return "nonisochoric-reduced";
  }
  return "?";
}

SolutionKind solution_kind_from_string(const std::string& s) {
  for (auto k : {SolutionKind::IsochoricGeneral, SolutionKind::IsochoricReduced, SolutionKind::NonisochoricGeneral,
                 SolutionKind::NonisochoricReduced}) {
    if (s == to_string(k)) return k;
  }
  if (s == "isochoric") return SolutionKind::IsochoricReduced;
  if (s == "nonisochoric") return SolutionKind::NonisochoricReduced;
  throw std::invalid_argument("unknown solution kind '" + s + "'");
}

bool is_isochoric(SolutionKind k) {
  return k == SolutionKind::IsochoricGeneral || k == SolutionKind::IsochoricReduced;
}

bool is_reduced(SolutionKind k) {
  return k == SolutionKind::IsochoricReduced || k == SolutionKind::NonisochoricReduced;
}

Solution solution(SolutionKind kind) {
  Solution s;
  s.kind = kind;
  switch (kind) {
    case SolutionKind::IsochoricGeneral:
      s.u = p("k0*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2 - (k0*v0 + m0*w0)*t + n0");
      s.v = p("-k0/rho0*t + v0");
      s.w = p("-m0/rho0*t + w0");
      s.rho = p("rho0");
      s.P1 = p("P0");
      s.constants = {"rho0", "k0", "m0", "v0", "w0", "n0", "P0"};
      break;
    case SolutionKind::IsochoricReduced:
      s.u = p("k0*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2");
      s.v = p("-k0/rho0*t");
      s.w = p("-m0/rho0*t");
      s.rho = p("rho0");
      s.P1 = Expr(0);
      s.P = p("k0*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2");
      s.S = p("k0*y + m0*z + (k0^2 + m0^2)/(2*rho0)*t^2 - f(rho0)");
      s.constants = {"rho0", "k0", "m0"};
      break;
    case SolutionKind::NonisochoricGeneral:
      s.u = p("x/t + k0*y/t + m0*z/t + n0/t + (k0^2 + m0^2 - 1)/(2*rho0)*t - k0*v0 - m0*w0");
      s.v = p("-k0/rho0*t + v0");
      s.w = p("-m0/rho0*t + w0");
      s.rho = p("rho0/t");
      s.P1 = p("f(rho0/t) + t/rho0 + P0");
      s.constants = {"rho0", "k0", "m0", "v0", "w0", "n0", "P0"};
      break;
    case SolutionKind::NonisochoricReduced:
      s.u = p("x/t + k0*y/t + m0*z/t + (k0^2 + m0^2 - 1)/(2*rho0)*t");
      s.v = p("-k0/rho0*t");
      s.w = p("-m0/rho0*t");
      s.rho = p("rho0/t");
      s.P1 = p("f(rho0/t) + t/rho0");
      s.P = p("x/t + k0*y/t + m0*z/t + (k0^2 + m0^2 - 1)/(2*rho0)*t + f(rho0/t) + t/rho0");
      s.S = p("x/t + k0*y/t + m0*z/t + (k0^2 + m0^2 - 1)/(2*rho0)*t + t/rho0");
      s.constants = {"rho0", "k0", "m0"};
      break;
  }
  if (!is_reduced(kind)) {
    s.P = canonicalize(s.P1 + s.u);
    s.S = canonicalize(s.P - Expr::function("f", 0, s.rho));
  }
  return s;
}

Residuals full_residuals(const Solution& s) { return GasSystem::residuals(s.u, s.v, s.w, s.rho, s.P); }

std::array<Expr, 3> vorticity(const Solution& s) {
  return {canonicalize(d(s.w, "y") - d(s.v, "z")), canonicalize(d(s.u, "z") - d(s.w, "x")),
          canonicalize(d(s.v, "x") - d(s.u, "y"))};
}

namespace {

Solution map_fields(const Solution& s, const std::map<std::string, Expr>& shift, const std::array<Expr, 3>& dv,
                    const Expr& dp) {
  Solution out = s;
  out.u = substitute(s.u, shift) + dv[0];
  out.v = substitute(s.v, shift) + dv[1];
  out.w = substitute(s.w, shift) + dv[2];
  out.rho = substitute(s.rho, shift);
  out.P = substitute(s.P, shift) + dp;
  out.u = canonicalize(out.u);
  out.v = canonicalize(out.v);
  out.w = canonicalize(out.w);
  out.P = canonicalize(out.P);
  out.P1 = canonicalize(out.P - out.u);
  out.S = canonicalize(out.P - Expr::function("f", 0, out.rho));
  return out;
}

}  // namespace

Solution space_translation(const Solution& s, const std::array<Expr, 3>& c) {
  return map_fields(s, {{"x", sym("x") - c[0]}, {"y", sym("y") - c[1]}, {"z", sym("z") - c[2]}},
                    {Expr(0), Expr(0), Expr(0)}, Expr(0));
}

Solution galilean_boost(const Solution& s, const std::array<Expr, 3>& b) {
  Expr t = sym("t");
  return map_fields(s, {{"x", sym("x") - b[0] * t}, {"y", sym("y") - b[1] * t}, {"z", sym("z") - b[2] * t}}, b,
                    Expr(0));
}

Solution pressure_translation(const Solution& s, const Expr& dp) {
  return map_fields(s, {}, {Expr(0), Expr(0), Expr(0)}, dp);
}

Solution reduce_constants(const Solution& general) {
  Expr v0 = param("v0"), w0 = param("w0"), n0 = param("n0"), P0 = param("P0");
  Solution out;
  if (general.kind == SolutionKind::IsochoricGeneral) {
    out = galilean_boost(general, {-n0, -v0, -w0});
    out = pressure_translation(out, -(P0 + n0));
    out.kind = SolutionKind::IsochoricReduced;
  } else if (general.kind == SolutionKind::NonisochoricGeneral) {
    out = galilean_boost(general, {Expr(0), -v0, -w0});
    out = space_translation(out, {n0, Expr(0), Expr(0)});
    out = pressure_translation(out, -P0);
    out.kind = SolutionKind::NonisochoricReduced;
  } else {
    throw std::invalid_argument("reduce_constants expects a general family");
  }
  return out;
}

FlowMap flow_map(const Solution& s) {
  FlowMap fm;
  fm.kind = s.kind;
  if (s.kind == SolutionKind::IsochoricReduced) {
    fm.position = {p("(k0*y0 + m0*z0)*t + x0"), p("-k0/(2*rho0)*t^2 + y0"), p("-m0/(2*rho0)*t^2 + z0")};
    fm.labels = {"x0", "y0", "z0"};
  } else if (s.kind == SolutionKind::NonisochoricReduced) {
    fm.position = {p("-(k0*y0 + m0*z0) - t^2/(2*rho0) + u0*t"), p("-k0/(2*rho0)*t^2 + y0"),
                   p("-m0/(2*rho0)*t^2 + z0")};
    fm.labels = {"u0", "y0", "z0"};
  } else {
    throw std::invalid_argument("flow maps are given for the reduced families");
  }
  for (auto& e : fm.position) e = canonicalize(e);
  fm.jacobian = jacobian_det(fm);
  return fm;
}

Expr jacobian_det(const FlowMap& fm) {
  Expr m[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = differentiate(fm.position[i], fm.labels[j]);
  }
  return canonicalize(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]));
}

std::map<std::string, Expr> compose_with_flow(const FlowMap& fm, const Solution& s) {
  std::map<std::string, Expr> b{{"x", fm.position[0]}, {"y", fm.position[1]}, {"z", fm.position[2]}};
  return {{"u", substitute(s.u, b)},     {"v", substitute(s.v, b)}, {"w", substitute(s.w, b)},
          {"rho", substitute(s.rho, b)}, {"P", substitute(s.P, b)}, {"S", substitute(s.S, b)}};
}

std::array<Expr, 3> flow_residuals(const FlowMap& fm, const Solution& s) {
  auto c = compose_with_flow(fm, s);
  return {canonicalize(d(fm.position[0], "t") - c["u"]), canonicalize(d(fm.position[1], "t") - c["v"]),
          canonicalize(d(fm.position[2], "t") - c["w"])};
}

LagrangianFields lagrangian_fields(const Solution& s) {
  FlowMap fm = flow_map(s);
  auto c = compose_with_flow(fm, s);
  LagrangianFields out;
  for (int i = 0; i < 3; ++i) {
    out.velocity[i] = d(fm.position[i], "t");
    out.acceleration[i] = d(out.velocity[i], "t");
  }
  out.rho = c["rho"];
  out.P = c["P"];
  out.S = c["S"];
  return out;
}

namespace {

double value(const Expr& e, Assignment a, std::initializer_list<std::pair<const char*, double>> extra) {
  for (const auto& [k, v] : extra) a.values[k] = v;
  return eval(e, a);
}

}  // namespace

std::vector<GeometryCheck> geometry_checks(const Solution& s, const Assignment& constants) {
  FlowMap fm = flow_map(s);
  std::vector<GeometryCheck> out;
  const double k0 = constants.values.at("k0");
  const double m0 = constants.values.at("m0");
  const double rho0 = constants.values.at("rho0");
  const bool iso = is_isochoric(s.kind);
  const double t_lo = iso ? 0.0 : 0.1;
  std::vector<double> times;
  for (int i = 0; i <= 30; ++i) times.push_back(t_lo + (3.0 - t_lo) * i / 30.0);
  auto add = [&](std::string name, double err, double tol = 1e-10) {
    out.push_back({std::move(name), std::isfinite(err) && err < tol, err});
  };
  auto pos = [&](const Assignment& a, double t) {
    std::array<double, 3> r;
    for (int i = 0; i < 3; ++i) r[i] = value(fm.position[i], a, {{"t", t}});
    return r;
  };

  if (iso) {
    {
      // Labels with k0*y0 + m0*z0 = 0: straight line in the plane x = x0.
      Assignment a = constants;
      a.set("x0", 0.0).set("y0", m0).set("z0", -k0);
      if (k0 == 0.0 && m0 == 0.0) a.set("y0", 1.0).set("z0", -1.0);
      double err = 0.0;
      for (double t : times) {
        auto r = pos(a, t);
        err = std::max({err, std::abs(r[0] - a.values["x0"]),
                        std::abs(m0 * (r[1] - a.values["y0"]) - k0 * (r[2] - a.values["z0"]))});
        Assignment b = a;
        b.set("t", t).set("x", r[0]).set("y", r[1]).set("z", r[2]).bind_sample_state_function();
        err = std::max(err, std::abs(eval(s.P, b)));
      }
      add("isochoric straight line in plane x = x0 with zero pressure", err);
    }
    Assignment a = constants;
    a.set("x0", 0.3).set("y0", 0.7).set("z0", -0.2);
    const double x0 = 0.3, y0 = 0.7, z0 = -0.2;
    const double g = k0 * y0 + m0 * z0;
    if (k0 != 0.0 && g != 0.0) {
      double line = 0.0, xy = 0.0, xz = 0.0;
      for (double t : times) {
        auto r = pos(a, t);
        line = std::max(line, std::abs(r[2] - (m0 / k0 * (r[1] - y0) + z0)));
        xy = std::max(xy, std::abs(r[1] - (y0 - k0 * (r[0] - x0) * (r[0] - x0) / (2 * rho0 * g * g))));
        xz = std::max(xz, std::abs(r[2] - (z0 - m0 * (r[0] - x0) * (r[0] - x0) / (2 * rho0 * g * g))));
      }
      add("isochoric (y,z) projection is a line of slope m0/k0", line);
      add("isochoric (x,y) projection is the stated parabola", xy);
      add("isochoric (x,z) projection is the stated parabola", xz);
      auto r0 = pos(a, 0.0);
      add("isochoric (x,y) parabola vertex at (x0, y0)", std::max(std::abs(r0[0] - x0), std::abs(r0[1] - y0)));
    }
    if (m0 != 0.0) {
      Assignment b = constants;
      b.set("k0", 0.0).set("x0", 0.3).set("y0", 0.7).set("z0", -0.2);
      double err = 0.0;
      for (double t : times) {
        auto r = pos(b, t);
        err = std::max({err, std::abs(r[1] - y0),
                        std::abs(r[2] - (z0 - (r[0] - x0) * (r[0] - x0) / (2 * rho0 * m0 * z0 * z0)))});
      }
      add("isochoric k0 = 0: parabola in the plane y = y0", err);
    }
    return out;
  }

  {
    double err = 0.0;
    for (double y0 : {-1.0, 0.5, 2.0}) {
      for (double z0 : {-0.5, 1.0}) {
        Assignment a = constants;
        a.set("u0", 1.3).set("y0", y0).set("z0", z0);
        auto r = pos(a, 0.0);
        err = std::max(err, std::abs(r[0] + k0 * r[1] + m0 * r[2]));
      }
    }
    add("nonisochoric initial positions on the plane x + k0 y + m0 z = 0", err);
  }
  {
    // Particles from a common start with u0 = 0, 1, 2, 3, observed at t = 3.
    std::vector<std::array<double, 3>> ends;
    for (double u0 : {0.0, 1.0, 2.0, 3.0}) {
      Assignment a = constants;
      a.set("u0", u0).set("y0", 1.0).set("z0", 1.0);
      ends.push_back(pos(a, 3.0));
    }
    double yz = 0.0;
    for (const auto& e : ends) yz = std::max({yz, std::abs(e[1] - ends[0][1]), std::abs(e[2] - ends[0][2])});
    add("nonisochoric common start: equal (y, z) at t = 3", yz);
    // x against u0: least-squares line, max residual.
    double su = 0, sx = 0, suu = 0, sux = 0;
    for (int i = 0; i < 4; ++i) {
      su += i;
      sx += ends[i][0];
      suu += i * i;
      sux += i * ends[i][0];
    }
    double slope = (4 * sux - su * sx) / (4 * suu - su * su);
    double icpt = (sx - slope * su) / 4;
    double res = 0.0;
    for (int i = 0; i < 4; ++i) res = std::max(res, std::abs(ends[i][0] - (icpt + slope * i)));
    add("nonisochoric common start: x affine in u0 at t = 3", res);
  }
  {
    Assignment a = constants;
    a.set("u0", 0.8).set("y0", 0.4).set("z0", -1.1);
    double err = 0.0;
    for (double t : times) {
      auto r = pos(a, t);
      err = std::max(err, std::abs(m0 * (r[1] - 0.4) - k0 * (r[2] + 1.1)));
    }
    add("nonisochoric (y,z) projection is the line m0(y - y0) = k0(z - z0)", err);
  }
  {
    std::map<std::string, Expr> flip{{"t", -sym("t")}, {"u0", -sym("u0")}};
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      if (!equivalent(substitute(fm.position[i], flip), fm.position[i])) err = 1.0;
    }
    add("nonisochoric world lines invariant under t -> -t, u0 -> -u0", err);
  }
  return out;
}

}  // namespace gaslie
