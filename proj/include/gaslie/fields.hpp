#pragma once

// The L12 generators as vector fields on the space (t, x, y, z, u, v, w, rho, P)
// and in cylindrical, spherical, and shifted-velocity charts.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gaslie/expr.hpp"
#include "gaslie/liealg.hpp"

namespace gaslie {

/// A coordinate chart on the nine-dimensional space, given by its forward map
/// into Cartesian coordinates. Cartesian coordinates that the chart keeps are
/// mapped to themselves.
struct Chart {
  // A group of Cartesian coordinates replaced by the same number of chart
  // coordinates. The forward map of a block may depend on chart coordinates of
  // earlier blocks and on the kept Cartesian coordinates.
  struct Block {
    std::vector<std::string> cartesian;
    std::vector<std::string> chart;
  };

  std::string name;                          // "D", "C", "S", "Dshift"
  std::vector<std::string> coordinates;      // nine names
  std::map<std::string, Expr> forward;       // Cartesian name -> Expr in chart coordinates
  std::map<std::string, Expr> backward;      // chart name -> Expr in Cartesian coordinates
  std::vector<Block> blocks;
  Expr shift;                                // b of the shifted-velocity chart
  DomainBox domain;                          // sampling box in chart coordinates

  /// Stable identifier including the shift, e.g. "Dshift(b=1)".
  std::string key() const;
  bool has_coordinate(const std::string& c) const;
  SymbolTable symbols(const std::set<std::string>& parameters = {}) const;
};

const std::vector<std::string>& cartesian_coordinates();

const Chart& chart_cartesian();
const Chart& chart_cylindrical();
const Chart& chart_spherical();
Chart chart_shifted(const Expr& b);
/// "D", "C", "S", or "Dshift"; `shift` is used only for the last.
Chart chart_by_name(const std::string& name, const Expr& shift = Expr(0));

struct VectorField {
  std::string chart;                          // Chart::key()
  std::map<std::string, Expr> components;     // nonzero canonical coefficients

  Expr component(const std::string& coord) const;
  friend bool operator==(const VectorField&, const VectorField&) = default;
};

std::string to_string(const VectorField& f);

/// Generator i of L12 (0 = Y, i = X_i) in the given chart.
VectorField realize(int i, const Chart& chart);
/// sum_i c_i realize(i, chart).
VectorField realize(const ExprVector& coefficients, const Chart& chart);

/// F(e) = sum_k F^k de/dx_k. Throws std::invalid_argument when e uses a
/// variable outside the chart.
Expr apply(const VectorField& f, const Expr& e, const Chart& chart);
VectorField vf_commutator(const VectorField& f, const VectorField& g, const Chart& chart);
VectorField scale(const VectorField& f, const Expr& c);
VectorField add(const VectorField& f, const VectorField& g);
bool is_zero(const VectorField& f);

/// Pushforward of a Cartesian field into `target`.
VectorField pushforward(const VectorField& f, const Chart& target);

/// Structure constants of L12 computed from the Cartesian realization.
LieAlgebra realized_algebra();

/// Decomposes a Cartesian field with rational coefficients on the generators.
std::optional<RationalVector> decompose(const VectorField& f);

struct CoherenceFailure {
  int generator;
  std::string cartesian;  // coordinate function that failed
  Expr residual;
};

/// Checks J * F^chart = F^D o Phi by applying the pushed field to every
/// forward-map component.
std::vector<CoherenceFailure> chart_coherence(const Chart& chart);

struct RoundTrip {
  double max_error_chart = 0.0;      // chart -> D -> chart
  double max_error_cartesian = 0.0;  // D -> chart -> D
  int points = 0;
};

RoundTrip round_trip(const Chart& chart, int points, std::uint64_t seed,
                     const Assignment& parameters = {});

}  // namespace gaslie
