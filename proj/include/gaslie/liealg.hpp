#pragma once

// Lie algebras over Q given by structure constants, and the twelve-dimensional
// symmetry algebra L12 = L11 + {Y} with basis order (Y, X1, ..., X11).

#include <array>
#include <string>
#include <vector>

#include "gaslie/expr.hpp"
#include "gaslie/linalg.hpp"

namespace gaslie {

using ExprVector = std::vector<Expr>;

class LieAlgebra {
 public:
  explicit LieAlgebra(std::vector<std::string> labels);

  int dim() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;

  /// C[i][j][k], with [e_i, e_j] = sum_k C[i][j][k] e_k.
  const Rational& constant(int i, int j, int k) const { return c_[(i * dim() + j) * dim() + k]; }
  /// Sets a single entry, without touching [e_j, e_i]. Used for mutation tests.
  void set_constant(int i, int j, int k, const Rational& v) { c_[(i * dim() + j) * dim() + k] = v; }
  /// Sets [e_i, e_j] = v and [e_j, e_i] = -v.
  void set_bracket(int i, int j, const RationalVector& v);

  RationalVector bracket(const RationalVector& a, const RationalVector& b) const;
  ExprVector bracket(const ExprVector& a, const ExprVector& b) const;
  RationalVector basis_bracket(int i, int j) const;

  bool is_abelian() const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.labels_ == b.labels_ && a.c_ == b.c_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<Rational> c_;
};

RationalVector unit_vector(int dim, int i);
ExprVector to_expr(const RationalVector& v);

struct Triple {
  int i, j, k;
  RationalVector value;  // the nonzero Jacobiator (or antisymmetry defect)
};

/// Basis triples i < j < k whose Jacobiator is nonzero.
std::vector<Triple> jacobi_report(const LieAlgebra& alg);
/// Pairs (i, j) with [e_i, e_j] != -[e_j, e_i]; k is unused.
std::vector<Triple> antisymmetry_report(const LieAlgebra& alg);

// --- L12 ---------------------------------------------------------------------

constexpr int kL12Dim = 12;
const std::vector<std::string>& l12_labels();
/// The commutator table of L11 (plus the central Y), keyed in by hand.
LieAlgebra l12_table();

// --- subalgebras -------------------------------------------------------------

struct ClosureResult {
  bool independent = false;
  bool closed = false;
  LieAlgebra induced{std::vector<std::string>{}};
  int failing_i = -1, failing_j = -1;  // first pair whose bracket leaves the span
  RationalVector failing_bracket;
};

/// Closure of the span of `rows` (coefficient vectors in alg's basis) and the
/// structure constants induced in the row basis. Labels are E1, E2, ...
ClosureResult is_closed(const LieAlgebra& alg, const RationalMatrix& rows);

// --- automorphisms of L12 -------------------------------------------------------

using Vec3 = std::array<Rational, 3>;
using Mat3 = std::array<Vec3, 3>;

struct Automorphism {
  enum class Kind { SpaceTranslation, Galilean, Rotation, TimeTranslation, Dilation, I1, I2, OuterScale };
  Kind kind = Kind::SpaceTranslation;
  Vec3 vec{};       // a (ST) or b (GT)
  Mat3 rot{};       // R
  Rational scalar;  // tau, lambda, or mu

  static Automorphism space_translation(const Vec3& a);
  static Automorphism galilean(const Vec3& b);
  static Automorphism rotation(const Mat3& r);
  static Automorphism time_translation(const Rational& tau);
  static Automorphism dilation(const Rational& lambda);
  static Automorphism inversion1();
  static Automorphism inversion2();
  static Automorphism outer_scale(const Rational& mu);

  Automorphism inverse() const;
  std::string name() const;
};

/// Throws std::invalid_argument for lambda = 0, mu = 0, or R not in SO(3).
void validate(const Automorphism& a);

/// Image of the coefficient vector (c0 for Y, then c1..c11).
RationalVector apply_automorphism(const Automorphism& a, const RationalVector& c);

/// Rotation matrix of the unit quaternion (w, x, y, z) / |q|; exact for integer q.
Mat3 rotation_from_quaternion(long w, long x, long y, long z);

struct HomomorphismFailure {
  RationalVector v, w;
  RationalVector lhs, rhs;  // A[v,w] and [Av,Aw]
};

/// Checks A[v,w] = [Av,Aw] on the given vector pairs; returns the first failure.
std::optional<HomomorphismFailure> check_homomorphism(const LieAlgebra& alg, const Automorphism& a,
                                                      const std::vector<std::pair<RationalVector, RationalVector>>& pairs);

// --- fingerprints --------------------------------------------------------------

struct Fingerprint {
  std::vector<int> derived_series;
  std::vector<int> lower_central_series;
  int center_dim = 0;
  int killing_rank = 0;
  Signature killing_signature;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const LieAlgebra& alg);
RationalMatrix killing_form(const LieAlgebra& alg);

std::string to_string(const Fingerprint& f);

}  // namespace gaslie
