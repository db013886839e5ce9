#pragma once

// Check records for single cases (identity documents, soliton examples and
// specs, the Berger root), shared by the command line and the tests.

#include <cstdint>
#include <string>
#include <vector>

#include "bachlab/identity.hpp"
#include "bachlab/report.hpp"
#include "bachlab/soliton.hpp"

namespace bachlab {

/// Violated hypotheses become a failing "<id>.hypotheses" record.
std::vector<CheckRecord> identity_checks(const IdentityCase& c, const Tolerances& tol);

/// The Bach-soliton residual for constant-lambda Bach-flow data in
/// dimension 4, the extended residual otherwise.
std::vector<CheckRecord> soliton_checks(const std::string& id, const std::string& anchor, const Manifold& m,
                                        const SolitonData& sd, double tolerance, std::size_t points,
                                        std::uint64_t seed);

std::vector<CheckRecord> berger_checks(Interval search, const Tolerances& tol, std::uint64_t seed);

}  // namespace bachlab
