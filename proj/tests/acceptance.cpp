// Acceptance criteria A1-A7: one PASS/FAIL/AUDIT line each, exit status 1 if
// any non-audit criterion fails. Tolerances are the defaults of the checks:
//   A1 1e-12, A2 1e-8, A3 1e-12, A4 1e-6, A5 1e-6 (round trip) and 1e-12
//   (coefficient ratio, algebraic identity), A6 audit at 1e-12,
//   A7 1e-8 (ODE residuals) and 1e-10 (derivative / contiguous relations).

#include <iostream>

#include "diracheun/report.hpp"
#include "diracheun/verify.hpp"

int main() {
    using namespace diracheun;
    const VerifyConfig config;
    const auto results = acceptance_checks(config);
    std::cout << verification_text(results);
    const bool ok = all_passed(results);
    std::cout << (ok ? "acceptance: all criteria passed\n" : "acceptance: FAILED\n");
    return ok ? 0 : 1;
}
