#pragma once

// Isomorphism-class assignments of the catalog entries: a change of basis
// e_i = sum_j M_ij E_j and the nonzero commutators it should produce.

#include <optional>
#include <string>
#include <vector>

#include "gaslie/catalog.hpp"
#include "gaslie/liealg.hpp"

namespace gaslie {

struct ClassAssignment {
  struct Relation {
    int i, j;          // 1-based, [e_i, e_j]
    std::string rhs;   // e.g. "(1/abs(b))*e1 - e2"
  };
  std::string id;
  std::string label;
  bool parametric = false;        // label depends on the entry's parameters
  std::vector<std::string> basis; // e_i in terms of E1..E4; abs(p) allowed
  std::vector<Relation> relations;
  // Replacement basis when the listed one does not reproduce the listed
  // commutators. Reported alongside, never substituted for the listed row.
  struct Correction {
    std::vector<std::string> basis;
    std::vector<Relation> relations;
    std::string note;
  };
  std::optional<Correction> correction;

  /// Parameters appearing inside abs(...).
  std::vector<std::string> abs_parameters() const;
};

const std::vector<ClassAssignment>& builtin_classes();
const std::string& builtin_classes_text();
std::vector<ClassAssignment> classes_from_json(const std::string& text);
/// Throws UnknownEntry.
const ClassAssignment& find_class(const std::vector<ClassAssignment>& rows, const std::string& id);

struct ClassSample {
  ParameterValues params;
  bool invertible = false;
  bool matches = false;
  LieAlgebra induced{std::vector<std::string>{}};
  std::string mismatch;  // first differing bracket, empty on success
};

struct SignCase {
  std::map<std::string, int> signs;  // parameter -> +1 / -1
  bool symbolic_checked = false;
  bool symbolic_matches = false;
  std::string symbolic_mismatch;
  std::vector<ClassSample> samples;
};

struct ClassReport {
  std::string id;
  std::string label;
  std::vector<SignCase> cases;
  bool has_correction = false;
  bool correction_passed = false;
  std::string correction_note;
  bool passed() const;
  int sample_count() const;
};

/// Checks the assignment symbolically (parameters as symbols, one sign case
/// for each combination of abs arguments) and exactly at every admissible grid
/// sample.
ClassReport verify_class(const Catalog& catalog, const ClassAssignment& asg);

/// Same-label entries must share fingerprints; different labels sharing one
/// are listed as informational.
struct FingerprintConsistency {
  struct Group {
    std::string label;
    std::vector<std::string> ids;
    std::string fingerprint;  // empty when members disagree
    bool consistent = true;
  };
  std::vector<Group> groups;
  std::vector<std::string> info;  // "label1 ~ label2: fingerprint"
  bool passed() const;
};

FingerprintConsistency fingerprint_consistency(const Catalog& catalog,
                                               const std::vector<ClassAssignment>& rows);

/// Fingerprint of the entry's algebra at one parameter sample.
Fingerprint entry_fingerprint(const Catalog& catalog, const std::string& id, const ParameterValues& params);

}  // namespace gaslie
