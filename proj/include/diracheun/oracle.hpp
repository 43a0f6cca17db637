#pragma once

// Formula-free numerical check: direct integration of the radial system and
// bound-state energies by shooting. Nothing here uses the closed-form spectrum
// or any special function.

#include <vector>

#include "diracheun/model.hpp"
#include "diracheun/routes.hpp"

namespace diracheun {

/// Radii are multiples of 1/lambda, lambda = sqrt(m^2 - E^2) at the trial energy.
struct ShootConfig {
    double r_start = 1e-4;
    double r_match = 0.0; // 0: outer classical turning point
    double r_far = 40.0;
    double initial_step = 1e-3; // in ln r
    double max_step = 0.05;     // in ln r
    double tol = 1e-12;         // local error, absolute and relative
    int max_iterations = 200;
    double energy_tol = 1e-13; // on |dE|/m
};

/// Throws InvalidParams unless 0 < r_start < r_match < r_far (r_match may be 0)
/// and the tolerances and step bounds are positive.
void validate(const ShootConfig& config);

struct FrobeniusData {
    double f = 0.0;
    double g = 0.0;
    double df = 0.0;
    double dg = 0.0;
};

/// Leading order: f = r^s, g = kappa r^s, kappa = -(s + nu)/e.
FrobeniusData frobenius_start(const SystemParams& params, double E, double r);

/// Frobenius series of the regular solution through `terms` orders, same
/// normalization as frobenius_start.
FrobeniusData frobenius_series(const SystemParams& params, double E, double r, int terms = 12);

/// Outward integration from r_start, recorded at the radii of `grid` (which
/// must lie above r_start). Throws StepFailure or Overflow.
RadialSolution integrate_radial(const SystemParams& params, double E, const RadialGrid& grid,
                                const ShootConfig& config = {});

/// Outward on [r_start, r_match] joined to an inward integration started on
/// the decaying direction at the last grid radius; continuous in f at r_match.
RadialSolution integrate_matched(const SystemParams& params, double E, const RadialGrid& grid,
                                 const ShootConfig& config = {});

/// Signed f(r_far) over max |f| on the outward solution.
double shooting_functional(const SystemParams& params, double E, const ShootConfig& config = {});

/// Number of levels of the parity sector strictly below E, from the Pruefer
/// phase at r_far.
int level_count(const SystemParams& params, double E, const ShootConfig& config = {});

struct EnergyBracket {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sign changes of the functional on 200 uniform energies in (0.2 m, m(1 - 1e-9)).
std::vector<EnergyBracket> scan_brackets(const SystemParams& params,
                                         const ShootConfig& config = {}, int points = 200);

/// Bracket of the level with the given ordinal (0 = lowest in the sector),
/// by bisection on level_count.
EnergyBracket bracket_level(const SystemParams& params, int ordinal,
                            const ShootConfig& config = {});

/// Bisection on the shooting functional inside [E_lo, E_hi]. Throws NoBracket,
/// MaxIterations, or NoConvergence when energy_tol is below double resolution. The level's n follows from the sector: ordinal + 1 for
/// parity +1, ordinal for parity -1.
EnergyLevel shoot_energy(const SystemParams& params, double E_lo, double E_hi,
                         const ShootConfig& config = {});

/// bracket_level + shoot_energy for radial quantum number n.
EnergyLevel find_level(const SystemParams& params, int n, const ShootConfig& config = {});

/// Normalized matched wavefunction of level n on `grid`.
RadialSolution oracle_wavefunction(const SystemParams& params, int n, const RadialGrid& grid,
                                   const ShootConfig& config = {});

} // namespace diracheun
