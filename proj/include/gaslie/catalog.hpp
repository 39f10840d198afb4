#pragma once

// The four-dimensional subalgebra entries with their invariant sets, and the
// checks that every listed invariant is annihilated by every basis field.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gaslie/expr.hpp"
#include "gaslie/fields.hpp"
#include "gaslie/liealg.hpp"

namespace gaslie {

using ParameterValues = std::map<std::string, Rational>;

std::string to_string(const ParameterValues& p);

class UnknownEntry : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
class ConstraintViolation : public std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// How a parameter of an entry is sampled.
struct ParameterSpec {
  enum class Role { Grid, Unit, Binary, Fixed };
  std::string name;
  Role role = Role::Grid;
  Rational fixed;  // Role::Fixed only
};

/// One entry as written in the catalog file (strings, not yet parsed).
struct CatalogEntry {
  std::string id;  // e.g. "4.23.i"
  std::vector<ParameterSpec> parameters;
  std::vector<std::string> constraints;  // "a != 0", "a^2 + b^2 = 1"
  std::vector<std::string> basis;        // "Y + a*X1 + b*X10"
  std::string chart;                     // D, C, S, Dshift
  std::string shift;                     // Dshift only
  std::vector<std::string> invariants;
  std::vector<std::string> flags;

  /// The list item the entry belongs to ("4.23" for "4.23.i").
  std::string item() const;
  std::vector<std::string> free_parameters() const;
};

class Catalog {
 public:
  static const Catalog& builtin();
  /// The JSON text the built-in catalog is read from.
  static const std::string& builtin_text();
  static Catalog from_json(const std::string& text);

  const std::vector<CatalogEntry>& entries() const { return entries_; }
  /// Throws UnknownEntry.
  const CatalogEntry& find(const std::string& id) const;
  /// Expands an id or a list item ("4.23" -> 4.23.i, 4.23.ii; "all").
  std::vector<std::string> resolve(const std::string& id_or_item) const;

  /// Admissible parameter samples of an entry, in a fixed order.
  std::vector<ParameterValues> parameter_grid(const CatalogEntry& e) const;

  const std::vector<Rational>& grid() const { return grid_; }

 private:
  std::vector<CatalogEntry> entries_;
  std::vector<Rational> grid_;
  std::vector<std::pair<Rational, Rational>> unit_pairs_;
  std::vector<Rational> binary_;
};

/// A fully instantiated entry. Parameters not given numerically stay symbolic.
struct SubalgebraEntry {
  std::string id;
  ParameterValues params;             // numeric bindings, including fixed ones
  std::vector<std::string> symbolic;  // parameters left as symbols
  std::vector<ExprVector> basis;      // four coefficient vectors in L12
  Chart chart;
  std::vector<Expr> invariants;
  std::vector<std::string> flags;

  /// Basis as rational rows; nullopt while parameters are symbolic.
  std::optional<RationalMatrix> rational_basis() const;
};

/// Throws UnknownEntry, or ConstraintViolation when `params` break the entry's
/// side conditions or miss a free parameter.
SubalgebraEntry get_entry(const Catalog& catalog, const std::string& id, const ParameterValues& params);
/// Free parameters kept as symbols; fixed parameters substituted.
SubalgebraEntry get_entry_symbolic(const Catalog& catalog, const std::string& id);

bool satisfies(const CatalogEntry& e, const ParameterValues& params, std::string* violated = nullptr);

struct PairVerdict {
  int generator = 0;  // index in the entry basis
  int invariant = 0;
  ZeroTest test;
  std::string residual;  // canonical residual, infix; empty when zero
};

struct VerifyOptions {
  ZeroTestOptions zero;
  int rank_points = 10;
  double rank_tolerance = 1e-8;
  std::uint64_t seed = 20240917;
};

struct VerificationReport {
  std::string id;
  ParameterValues params;
  std::vector<std::string> symbolic;
  bool closed = false;
  bool independent = false;
  std::vector<PairVerdict> verdicts;  // 16, generator-major
  int rank = -1;                      // -1 when not computed (symbolic mode)
  std::vector<std::string> flags;

  bool annihilated() const;
  bool passed() const;
};

VerificationReport verify_invariants(const SubalgebraEntry& entry, const VerifyOptions& opts = {});

/// Rank of the Jacobian of `functions` w.r.t. the chart coordinates, maximized
/// over seeded points of the chart domain.
int independence_rank(const std::vector<Expr>& functions, const Chart& chart, const Assignment& bindings,
                      int points, double tolerance, std::uint64_t seed);
int independence_rank(const SubalgebraEntry& entry, const VerifyOptions& opts = {});

/// Everything checked for one entry id across its parameter grid.
struct EntryReport {
  std::string id;
  VerificationReport symbolic;                // parameters as symbols
  std::vector<VerificationReport> instances;  // one per grid sample
  std::vector<std::string> simplifier_gaps;   // "g,i" pairs nonzero symbolically, zero when sampled
  bool passed() const;
};

EntryReport verify_entry(const Catalog& catalog, const std::string& id, const VerifyOptions& opts = {});

/// Deterministic per-label seed derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, const std::string& label);

}  // namespace gaslie
