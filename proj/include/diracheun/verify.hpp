#pragma once

// Acceptance checks A1-A7 and the module invariants, as data.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "diracheun/model.hpp"
#include "diracheun/oracle.hpp"

namespace diracheun {

struct CheckResult {
    std::string id;
    std::string description;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string detail;
    // Audit checks report but never fail the suite.
    bool audit_only = false;
};

struct VerifyConfig {
    double mass = 1.0;
    // Replaces every threshold when set.
    std::optional<double> tol_override;
    // Routes to exercise; empty means all.
    std::set<Route> routes;
    std::size_t grid_points = 2000;
    ShootConfig shoot;
    bool include_invariants = true;
};

bool route_selected(const VerifyConfig& config, Route route);

CheckResult check_a1_spectrum_unification(const VerifyConfig& config);
CheckResult check_a2_oracle(const VerifyConfig& config);
CheckResult check_a3_fine_structure(const VerifyConfig& config);
CheckResult check_a4_wavefunctions(const VerifyConfig& config);
CheckResult check_a5_operator_closure(const VerifyConfig& config);
CheckResult check_a6_truncation_audit(const VerifyConfig& config);
CheckResult check_a7_specfun_properties(const VerifyConfig& config);

/// A1-A7 in order.
std::vector<CheckResult> acceptance_checks(const VerifyConfig& config);

/// Model, routes and oracle invariants beyond A1-A7.
std::vector<CheckResult> invariant_checks(const VerifyConfig& config);

/// Acceptance checks followed by the invariants (if enabled), restricted to
/// checks that involve a selected route.
std::vector<CheckResult> run_verification(const VerifyConfig& config);

/// True unless a non-audit check failed.
bool all_passed(const std::vector<CheckResult>& results);

} // namespace diracheun
