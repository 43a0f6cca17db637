#pragma once

// Bound-state wavefunctions (f, g) on a radial grid, one builder per
// analytic route, plus the differential relations that tie the mixed-route
// functions F and G together.

#include <vector>

#include "diracheun/model.hpp"

namespace diracheun {

struct RadialGrid {
    std::vector<double> r;

    [[nodiscard]] std::size_t size() const { return r.size(); }

    /// Geometric spacing, count >= 2, 0 < r_min < r_max.
    static RadialGrid geometric(double r_min, double r_max, std::size_t count);
    /// Single-radius-unit factory: [r_min/lambda, r_max/lambda], lambda = sqrt(m^2 - E^2).
    static RadialGrid scaled(double lambda, std::size_t count = 2000, double r_min = 0.01,
                             double r_max = 40.0);
};

/// Throws InvalidParams unless the radii are positive, finite and strictly increasing.
void validate(const RadialGrid& grid);

struct RadialSolution {
    RadialGrid grid;
    std::vector<double> f;
    std::vector<double> g;
    EnergyLevel level;
    SystemParams system;
};

/// Default grid for level n: 2000 geometric points on [0.01/lambda, 40/lambda].
RadialGrid default_grid(const SystemParams& params, int n, std::size_t count = 2000);

// All builders use the closed-form energy of level n, require e > 0 and
// throw NoBoundState when the parity sector has no level n.
RadialSolution solve_standard(const SystemParams& params, int n, const RadialGrid& grid);
/// Mixed routes implement the parity +1 sector only.
RadialSolution solve_mixed_case1(const SystemParams& params, int n, const RadialGrid& grid);
RadialSolution solve_mixed_case2(const SystemParams& params, int n, const RadialGrid& grid);
RadialSolution solve_heun_full(const SystemParams& params, int n, const RadialGrid& grid);

RadialSolution solve(Route route, const SystemParams& params, int n, const RadialGrid& grid);

/// Mixed-route functions with analytic first and second radial derivatives.
struct MixedFunctions {
    std::vector<double> F, dF, d2F;
    std::vector<double> G, dG;
    double E = 0.0;
    MixingCase mixing;
};

/// Case 1 with F scaled so the forward relation reproduces G at the calibration radius.
MixedFunctions mixed_case1_functions(const SystemParams& params, int n, const RadialGrid& grid);
/// Case 2 with F scaled so the first-order G relation holds at the calibration radius.
MixedFunctions mixed_case2_functions(const SystemParams& params, int n, const RadialGrid& grid);

/// Case 1 forward relation, G = (1/2e) (y/(y-1)) (d/dy + nu cosA / y - m R sinA) F.
std::vector<double> case1_forward(const SystemParams& params, const MixedFunctions& mf,
                                  const RadialGrid& grid);
/// Case 1 back relation, F = (d/dr - nu cosA / r + m sinA) G / (E - m cosA), applied
/// to the G produced by case1_forward (its derivative is taken analytically).
std::vector<double> case1_round_trip(const SystemParams& params, const MixedFunctions& mf,
                                     const RadialGrid& grid);
/// The same operator with the r-dependent prefactor r / (2(E r + e)) in place of
/// 1/(E - m cosA); kept to document that the two forms are not proportional.
std::vector<double> case1_round_trip_r_prefactor(const SystemParams& params,
                                                 const MixedFunctions& mf,
                                                 const RadialGrid& grid);
/// Case 2: r (d/dr - nu cosA / r + m sinA) G / (e - nu sinA), which must equal F.
std::vector<double> case2_back(const SystemParams& params, const MixedFunctions& mf,
                               const RadialGrid& grid);

struct CoefficientRatio {
    double from_eq32 = 0.0; // (nu - mu) / n
    double from_eq33 = 0.0; // -(A + eps) / (nu + mu)
};

/// C1/C2 of the standard route in both forms, nu carrying the parity sign.
/// Throws DegenerateGroundState for n = 0.
CoefficientRatio coefficient_ratio(const SystemParams& params, int n);

/// Largest scaled residual of the radial system over grid points with a full
/// 9-point stencil. Each equation is divided by the sum of the magnitudes of
/// its own terms. NaN when the grid has fewer than 9 points.
double residual(const RadialSolution& solution);

/// Scales (f, g) to unit trapezoid norm with f > 0 at the innermost nonzero
/// grid point. Throws ZeroNorm.
RadialSolution normalize(const RadialSolution& solution);

/// Interior sign changes, ignoring values below rel_floor * max |v|.
int count_sign_changes(const std::vector<double>& v, double rel_floor = 1e-10);

/// max |a - b| / max |a| over grid points with r in [r_lo, r_hi], maximized
/// over the f and g components. Inputs must share the grid.
double relative_deviation(const RadialSolution& a, const RadialSolution& b, double r_lo,
                          double r_hi);

/// Nine-point finite-difference weights (Fornberg) for d/dr at grid point i.
std::vector<double> derivative_weights(const std::vector<double>& x, std::size_t centre,
                                       std::size_t first, std::size_t count);

} // namespace diracheun
