#pragma once

// The rank-1, defect-1 submodel of the gas dynamics system built on the
// subalgebra {X1, X2, X3, Y + X4}, its two exact solution families, and the
// particle flow they generate.
//
// Fields are Exprs in the variables t, x, y, z. Free constants (rho0, k0, m0,
// v0, w0, n0, P0) are parameters; particle labels (x0, y0, z0, u0) are
// variables so that Jacobians can be taken with respect to them. The state
// function f stays opaque.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "gaslie/expr.hpp"

namespace gaslie {

using Residuals = std::array<Expr, 5>;

/// Gas dynamics with state equation P = f(rho) + S:
///   D u + grad P / rho = 0, D rho + rho div u = 0, D P + rho f'(rho) div u = 0.
struct GasSystem {
  static Residuals residuals(const Expr& u, const Expr& v, const Expr& w, const Expr& rho, const Expr& P);
};

/// Unknowns of the submodel: v, w, rho, P1 = P - u depend on t only; u on
/// (t, x, y, z).
struct SubmodelCandidate {
  Expr u, v, w, rho, P1;
};

/// Residuals of the submodel, canonicalized. Throws std::invalid_argument when
/// v, w, rho or P1 depends on x, y or z.
Residuals reduced_residuals(const SubmodelCandidate& c);

enum class SolutionKind { IsochoricGeneral, IsochoricReduced, NonisochoricGeneral, NonisochoricReduced };

const char* to_string(SolutionKind k);
/// Accepts the names printed by to_string. Throws std::invalid_argument.
SolutionKind solution_kind_from_string(const std::string& s);
bool is_isochoric(SolutionKind k);
bool is_reduced(SolutionKind k);

struct Solution {
  SolutionKind kind = SolutionKind::IsochoricReduced;
  Expr u, v, w, rho, P;
  Expr P1;  // stated P - u
  Expr S;   // stated entropy P - f(rho)
  std::vector<std::string> constants;

  SubmodelCandidate candidate() const { return {u, v, w, rho, P1}; }
};

Solution solution(SolutionKind kind);

Residuals full_residuals(const Solution& s);

/// (w_y - v_z, u_z - w_x, v_x - u_y), canonicalized.
std::array<Expr, 3> vorticity(const Solution& s);

/// Solution-level actions: x -> x + c, Galilean boost by b, P -> P + p.
Solution space_translation(const Solution& s, const std::array<Expr, 3>& c);
Solution galilean_boost(const Solution& s, const std::array<Expr, 3>& b);
Solution pressure_translation(const Solution& s, const Expr& p);

/// Maps the general family of `kind` to its reduced family by translations.
Solution reduce_constants(const Solution& general);

struct FlowMap {
  SolutionKind kind = SolutionKind::IsochoricReduced;
  std::array<Expr, 3> position;     // x(t), y(t), z(t)
  std::vector<std::string> labels;  // (x0, y0, z0) or (u0, y0, z0)
  Expr jacobian;                    // det d(position)/d(labels)
};

/// Closed-form particle paths of a reduced family.
FlowMap flow_map(const Solution& s);
Expr jacobian_det(const FlowMap& fm);
/// d/dt position - velocity o position, per component.
std::array<Expr, 3> flow_residuals(const FlowMap& fm, const Solution& s);
/// Fields with (x, y, z) replaced by the flow map.
std::map<std::string, Expr> compose_with_flow(const FlowMap& fm, const Solution& s);

struct LagrangianFields {
  std::array<Expr, 3> velocity;
  std::array<Expr, 3> acceleration;
  Expr rho, P, S;
};

LagrangianFields lagrangian_fields(const Solution& s);

struct GeometryCheck {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
};

/// Trajectory-geometry statements of a reduced family, checked at numeric
/// constants (rho0, k0, m0 bound in `constants`) over sampled times.
std::vector<GeometryCheck> geometry_checks(const Solution& s, const Assignment& constants);

/// Symbol helpers.
Expr sym(const std::string& name);    // variable
Expr param(const std::string& name);  // parameter
const SymbolTable& solution_symbols();

}  // namespace gaslie
