#pragma once

// Verification campaigns and their JSON report sections.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gaslie/catalog.hpp"
#include "gaslie/classify.hpp"
#include "gaslie/liealg.hpp"
#include "gaslie/numerics.hpp"
#include "gaslie/submodel.hpp"
#include "json.hpp"

namespace gaslie {

using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr std::uint64_t kDefaultSeed = 20240917;

struct Section {
  Json body;
  bool passed = false;
  std::string first_failure;  // human-readable witness, empty on success
};

/// Jacobi identity, antisymmetry, and the table against the realization.
Section algebra_section(const LieAlgebra& table, bool include_brackets = false);

/// Every automorphism kind checked as a homomorphism on `vectors` random
/// rational pairs, plus exact inversion.
Section automorphism_section(std::uint64_t seed, int vectors = 50);

Section catalog_section(const Catalog& catalog, const std::vector<std::string>& ids, const VerifyOptions& opts,
                        int jobs = 1);
Json to_json(const EntryReport& r);
Json to_json(const VerificationReport& r);

Section classes_section(const Catalog& catalog, const std::vector<ClassAssignment>& rows,
                        const std::vector<std::string>& ids, int jobs = 1);

struct SolutionCheck {
  std::string name;
  bool passed = false;
  std::string detail;  // residual or value
};

/// All symbolic statements about one solution family.
std::vector<SolutionCheck> solution_checks(const Solution& s);
Section solutions_section(const std::vector<SolutionKind>& kinds);

struct TraceOptions {
  double h = 1e-3;
  std::uint64_t seed = kDefaultSeed;
  int sphere_points = 1000;
  std::vector<double> sphere_times{0.0, 1.6, 2.0};
  std::vector<double> convergence_steps{1e-2, 5e-3, 2.5e-3};
};

/// Particles released together with velocities u0 must share (y, z) and have
/// x affine in u0 at a common later time.
struct CommonStartCheck {
  double yz_spread = 0.0;
  double affine_residual = 0.0;  // max deviation from the least-squares line
  bool passed = false;
};
CommonStartCheck common_start_check(const std::vector<double>& u0, const std::vector<std::array<double, 3>>& ends);

/// RK4 against the closed forms, convergence order, sphere transport, and the common start.
Section traces_section(const TraceOptions& opts);

/// rho0 = k0 = m0 = 1.
Assignment unit_constants();

}  // namespace gaslie
