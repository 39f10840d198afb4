#pragma once

// Floating-point side: RK4 particle paths, comparison against closed forms,
// SVD rank, and transport of the unit sphere.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "gaslie/expr.hpp"
#include "gaslie/submodel.hpp"

namespace gaslie {

using Matrix = std::vector<std::vector<double>>;

std::vector<double> singular_values(const Matrix& m);
/// Number of singular values above tol * sigma_max.
int numeric_rank(const Matrix& m, double tol = 1e-8);

struct Trajectory {
  std::vector<std::array<double, 4>> samples;  // t, x, y, z
  std::string kind;
  std::map<std::string, double> constants;
  std::array<double, 3> start{};
};

/// Classical fixed-step RK4 for dx/dt = velocity(t, x). The last step is
/// shortened to land on t1. Throws EvalError (with t in the message) when the
/// velocity cannot be evaluated.
Trajectory integrate(const std::array<Expr, 3>& velocity, const std::array<double, 3>& x0, double t0, double t1,
                     double h, const Assignment& constants);

/// Max over samples of the Euclidean distance to the closed-form map.
double compare_to_closed_form(const Trajectory& tr, const FlowMap& fm, const Assignment& labels);
/// Max over samples of the componentwise absolute error.
double max_component_error(const Trajectory& tr, const FlowMap& fm, const Assignment& labels);

void write_csv(std::ostream& os, const Trajectory& tr);

struct ConvergenceStudy {
  std::vector<double> steps;
  std::vector<double> errors;  // endpoint error per step
  double order = 0.0;          // least-squares slope of log error vs log h
};

ConvergenceStudy convergence_order(const std::array<Expr, 3>& velocity, const FlowMap& fm,
                                   const Assignment& labels, double t0, double t1,
                                   const std::vector<double>& steps);

/// x^T A x + b^T x + c = 0 in (x, y, z).
struct Quadric {
  std::array<std::array<double, 3>, 3> a{};
  std::array<double, 3> b{};
  double c = 0.0;
  double value(const std::array<double, 3>& p) const;
};

struct SphereTransport {
  double t = 0.0;
  int points = 0;
  std::uint64_t seed = 0;
  Quadric quadric;
  Expr quadric_expr;                 // symbolic, in x, y, z
  double max_residual = 0.0;         // |quadric(image)| over all points
  double max_label_error = 0.0;      // |inverse(image) - starting point|
  double jacobian = 0.0;
  double volume = 0.0;               // (4/3) pi |J|
  double volume_from_quadric = 0.0;  // (4/3) pi / sqrt(det A) after normalization
  std::vector<std::array<double, 3>> images;
};

/// Maps `points` seeded points of the unit sphere through the isochoric flow
/// map at time t and checks them against the pulled-back quadric.
SphereTransport sphere_transport(const FlowMap& fm, const Assignment& constants, int points, double t,
                                 std::uint64_t seed);

/// Seeded xoshiro256** generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform(double lo, double hi);
  double normal();

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace gaslie
