#pragma once

// Physical parameter layer for the Dirac-Coulomb radial system
//
//   (d/dr + nu/r) f + (E + e/r + m) g = 0,
//   (d/dr - nu/r) g - (E + e/r - m) f = 0,
//
// written for parity +1; parity -1 is the same system with m -> -m.
// Natural units, hbar = c = 1.

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "diracheun/specfun.hpp"

namespace diracheun {

enum class Route { Standard, Mixed1, Mixed2, Heun, Oracle, ClosedForm };

std::string_view to_string(Route route);
std::optional<Route> route_from_string(std::string_view name);

struct SystemParams {
    double m = 1.0;  // particle mass
    double e = 0.0;  // Coulomb coupling (Z alpha)
    int nu = 1;      // j + 1/2
    int parity = +1;

    /// nu carrying the parity sign; the parity -1 system is the parity +1
    /// system with nu -> -nu and (f, g) -> (g, -f).
    [[nodiscard]] double signed_nu() const { return parity * static_cast<double>(nu); }
    /// Regular exponent sqrt(nu^2 - e^2) at the origin.
    [[nodiscard]] double frobenius_exponent() const;
};

/// m > 0, nu >= 1, 0 <= e < nu, parity = +-1. The message names critical
/// (e == nu) and supercritical (e > nu) coupling explicitly.
void validate(const SystemParams& params);

enum class MixingCaseId { One, OnePrime, Two, TwoPrime };

std::string_view to_string(MixingCaseId id);

struct MixingCase {
    MixingCaseId id = MixingCaseId::One;
    double sinA = 0.0;
    double cosA = 1.0;
    double cos_half = 1.0;
    double sin_half = 0.0;
    // R for case 1, D for case 2; primed cases leave it empty.
    std::optional<double> singular_point;
};

MixingCase mixing_case(MixingCaseId id, const SystemParams& params, double E);

/// D from its two printed forms, -(e + nu sinA)/(2 m cosA) and -(e + nu sinA)/(2E).
std::pair<double, double> singular_point_D_consistency(const SystemParams& params, double E);

/// Exponent branch of the prefactor y^a e^{b y}. The defaults give the
/// solution regular at the origin and decaying at infinity; the others are
/// exposed for experimentation only.
struct ExponentBranch {
    bool regular_at_origin = true;
    bool decaying = true;
};

specfun::HeunCParams heun_params_case1(const SystemParams& params, double E,
                                       ExponentBranch branch = {});
specfun::HeunCParams heun_params_case2(const SystemParams& params, double E,
                                       ExponentBranch branch = {});
/// Map for the route where f itself is a confluent Heun function. Uses the
/// parity-signed nu, so parity +1 reproduces the printed parameters exactly.
specfun::HeunCParams heun_params_full(const SystemParams& params, double E,
                                      ExponentBranch branch = {});

struct EnergyLevel {
    int n = 0;
    int nu = 1;
    int parity = +1;
    double E = 0.0;
    double E_over_m = 0.0;
    Route route = Route::ClosedForm;
};

/// E = m / sqrt(1 + e^2/N^2) for a principal value N.
double energy_for_principal(double N, const SystemParams& params);

/// E_n with N = n + sqrt(nu^2 - e^2). Parity independent.
EnergyLevel energy_closed_form(int n, const SystemParams& params);

/// (m - E_n)/m without the cancellation of 1 - E/m at weak coupling.
double binding_fraction(int n, const SystemParams& params);

/// Whether level n is normalizable in the parity sector of `params`: the
/// parity +1 sector starts at n = 1.
bool has_bound_state(const SystemParams& params, int n);

struct StandardVars {
    double lambda = 0.0; // sqrt(m^2 - E^2)
    double mu = 0.0;     // e m / lambda
    double eps = 0.0;    // e E / lambda
    double A_frob = 0.0; // sqrt(eps^2 - mu^2 + nu^2)
};

/// Rejects E <= 0 and E within 1e-12 m of m.
StandardVars standard_vars(const SystemParams& params, double E);

/// The same variables at level n, built from N = n + A without passing through
/// E: lambda = m e / sqrt(N^2 + e^2), mu = sqrt(N^2 + e^2), eps = N, A_frob = A.
/// Avoids the loss of digits in m - E when E is close to m. Requires e > 0.
StandardVars level_vars(int n, const SystemParams& params);

/// Signed quantization residuals at (E, n) for the four analytic routes.
std::map<Route, double> quantization_residuals(const SystemParams& params, double E, int n);

/// Root of one route's quantization condition, by bisection on
/// E in (0.01 m, m (1 - 1e-9)) down to 1e-14 in E/m.
EnergyLevel quantization_root(const SystemParams& params, int n, Route route);

} // namespace diracheun
