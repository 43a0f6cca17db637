#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diracheun/errors.hpp"
#include "diracheun/model.hpp"
#include "diracheun/routes.hpp"

using namespace diracheun;

namespace {

constexpr Route kRoutes[] = {Route::Standard, Route::Mixed1, Route::Mixed2, Route::Heun};

bool mixed(Route r) { return r == Route::Mixed1 || r == Route::Mixed2; }

double lambda_of(const SystemParams& p, int n) {
    return standard_vars(p, energy_closed_form(n, p).E).lambda;
}

// Parity -1 ground state worked out by hand: f = r^A e^{-lambda r},
// g = lambda/(E - m) f, from the r^{-1} and r^0 orders of the system.
RadialSolution ground_state_reference(const SystemParams& p, const RadialGrid& grid) {
    const double s = p.frobenius_exponent();
    const double E = p.m * std::sqrt(1.0 - p.e * p.e / (p.nu * p.nu));
    const double lambda = std::sqrt(p.m * p.m - E * E);
    RadialSolution out;
    out.grid = grid;
    out.system = p;
    out.level = energy_closed_form(0, p);
    for (double r : grid.r) {
        const double f = std::pow(r, s) * std::exp(-lambda * r);
        out.f.push_back(f);
        out.g.push_back(lambda / (E - p.m) * f);
    }
    return normalize(out);
}

} // namespace

TEST_CASE("radial grids") {
    const auto g = RadialGrid::geometric(0.01, 40.0, 2000);
    CHECK(g.size() == 2000);
    CHECK(g.r.front() == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(g.r.back() == doctest::Approx(40.0).epsilon(1e-15));
    CHECK_NOTHROW(validate(g));
    CHECK_THROWS_AS(RadialGrid::geometric(0.01, 40.0, 1), InvalidParams);
    CHECK_THROWS_AS(RadialGrid::geometric(0.0, 40.0, 10), InvalidParams);
    CHECK_THROWS_AS(RadialGrid::geometric(5.0, 4.0, 10), InvalidParams);
    CHECK_THROWS_AS(validate(RadialGrid{{1.0, 1.0, 2.0}}), InvalidParams);
    const auto s = RadialGrid::scaled(0.5, 100);
    CHECK(s.r.front() == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(s.r.back() == doctest::Approx(80.0).epsilon(1e-15));
    const SystemParams p{1.0, 0.5, 1, 1};
    const auto d = default_grid(p, 1);
    CHECK(d.size() == 2000);
    CHECK(d.r.back() * lambda_of(p, 1) == doctest::Approx(40.0).epsilon(1e-12));
}

TEST_CASE("standard route") {
    const SystemParams p{1.0, 0.5, 1, 1};
    SUBCASE("n = 1 satisfies the radial system on [0.1, 40]") {
        const auto sol = solve_standard(p, 1, RadialGrid::geometric(0.1, 40.0, 6000));
        CHECK(residual(sol) < 1e-8);
        CHECK(sol.level.route == Route::Standard);
    }
    SUBCASE("n = 0 (parity -1): one Kummer term, f/g constant") {
        const SystemParams q{1.0, 0.5, 1, -1};
        const auto grid = default_grid(q, 0);
        const auto sol = solve_standard(q, 0, grid);
        const double E = sol.level.E;
        CHECK(residual(sol) < 1e-8);
        for (std::size_t i = 0; i < grid.size(); i += 97) {
            CHECK(sol.f[i] / sol.g[i] == doctest::Approx(-std::sqrt((1.0 - E) / (1.0 + E))).epsilon(1e-12));
        }
        CHECK(relative_deviation(normalize(sol), ground_state_reference(q, grid), grid.r.front(),
                                 grid.r.back()) < 1e-10);
    }
    CHECK_THROWS_AS(solve_standard({1.0, 0.0, 1, 1}, 1, RadialGrid::geometric(0.1, 1.0, 10)),
                    InvalidParams);
}

TEST_CASE("no n = 0 level in the parity +1 sector") {
    const SystemParams p{1.0, 0.5, 1, 1};
    const auto grid = RadialGrid::geometric(0.01, 40.0, 200);
    for (Route r : kRoutes) CHECK_THROWS_AS(solve(r, p, 0, grid), NoBoundState);
}

TEST_CASE("mixed case 1") {
    const SystemParams p{1.0, 0.5, 1, 1};
    const auto grid = default_grid(p, 1);
    const auto sol = solve_mixed_case1(p, 1, grid);
    CHECK(residual(sol) < 1e-7);
    const auto mf = mixed_case1_functions(p, 1, grid);
    const auto G = case1_forward(p, mf, grid);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        diff = std::max(diff, std::abs(G[i] - mf.G[i]));
        scale = std::max(scale, std::abs(mf.G[i]));
    }
    CHECK(diff / scale < 1e-7);
    const double lambda = lambda_of(p, 1);
    CHECK(relative_deviation(normalize(sol), normalize(solve_standard(p, 1, grid)), 0.05 / lambda,
                             30.0 / lambda) < 1e-6);
    CHECK_THROWS_AS(solve_mixed_case1({1.0, 0.5, 1, -1}, 1, grid), InvalidParams);
}

TEST_CASE("mixed case 2") {
    const SystemParams p{1.0, 0.5, 1, 1};
    const auto grid = default_grid(p, 1);
    CHECK(residual(solve_mixed_case2(p, 1, grid)) < 1e-7);
    const auto mf = mixed_case2_functions(p, 1, grid);
    const auto F = case2_back(p, mf, grid);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        diff = std::max(diff, std::abs(F[i] - mf.F[i]));
        scale = std::max(scale, std::abs(mf.F[i]));
    }
    CHECK(diff / scale < 1e-7);
    for (int n = 1; n <= 4; ++n) {
        const double E = quantization_root(p, n, Route::Mixed2).E;
        CHECK(std::abs(E - energy_closed_form(n, p).E) < 1e-12 * E);
        CHECK(specfun::heunc_poly_degree(heun_params_case2(p, E), 1e-8) == n);
    }
    CHECK_THROWS_AS(solve_mixed_case2({1.0, 0.5, 1, -1}, 1, grid), InvalidParams);
}

TEST_CASE("full Heun route") {
    SUBCASE("ground state, parity -1") {
        const SystemParams q{1.0, 0.5, 1, -1};
        const auto grid = default_grid(q, 0);
        const auto sol = solve_heun_full(q, 0, grid);
        CHECK(sol.level.E == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
        CHECK(residual(sol) < 1e-8);
        CHECK(relative_deviation(normalize(sol), ground_state_reference(q, grid), grid.r.front(),
                                 grid.r.back()) < 1e-10);
    }
    SUBCASE("n = 2, e = 0.3, nu = 2 matches the standard route") {
        const SystemParams p{1.0, 0.3, 2, 1};
        const auto grid = default_grid(p, 2);
        const double lambda = lambda_of(p, 2);
        CHECK(relative_deviation(normalize(solve_heun_full(p, 2, grid)),
                                 normalize(solve_standard(p, 2, grid)), 0.05 / lambda,
                                 30.0 / lambda) < 1e-6);
    }
}

TEST_CASE("property: node counts") {
    // g has n sign changes in both sectors; f has n in parity -1 but n - 1 in
    // parity +1, where the lowest level is n = 1.
    for (int parity : {1, -1}) {
        for (int nu = 1; nu <= 3; ++nu) {
            for (double e : {0.2, 0.5}) {
                const SystemParams p{1.0, e, nu, parity};
                for (int n = 0; n <= 5; ++n) {
                    if (!has_bound_state(p, n)) continue;
                    const auto grid = default_grid(p, n, 4000);
                    for (Route r : kRoutes) {
                        if (mixed(r) && parity == -1) continue;
                        const auto sol = solve(r, p, n, grid);
                        CHECK(count_sign_changes(sol.g) == n);
                        CHECK(count_sign_changes(sol.f) == (parity == 1 ? n - 1 : n));
                    }
                }
            }
        }
    }
}

TEST_CASE("property: residual and cross-route proportionality") {
    for (int parity : {1, -1}) {
        for (int nu = 1; nu <= 3; ++nu) {
            for (double e : {0.2, 0.5}) {
                const SystemParams p{1.0, e, nu, parity};
                for (int n = 0; n <= 4; ++n) {
                    if (!has_bound_state(p, n)) continue;
                    const auto grid = default_grid(p, n);
                    const double lambda = lambda_of(p, n);
                    const auto ref = normalize(solve_standard(p, n, grid));
                    for (Route r : kRoutes) {
                        if (mixed(r) && parity == -1) continue;
                        const auto sol = normalize(solve(r, p, n, grid));
                        CHECK(residual(sol) < 1e-6);
                        CHECK(relative_deviation(ref, sol, 0.05 / lambda, 30.0 / lambda) < 1e-6);
                    }
                }
            }
        }
    }
}

TEST_CASE("property: case-1 operator round trip") {
    for (int nu = 1; nu <= 3; ++nu) {
        for (double e : {0.2, 0.5}) {
            const SystemParams p{1.0, e, nu, 1};
            for (int n = 1; n <= 4; ++n) {
                const auto grid = default_grid(p, n);
                const auto mf = mixed_case1_functions(p, n, grid);
                const auto back = case1_round_trip(p, mf, grid);
                double ab = 0.0, bb = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    ab += back[i] * mf.F[i];
                    bb += mf.F[i] * mf.F[i];
                }
                const double c = ab / bb;
                double diff = 0.0, scale = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    diff = std::max(diff, std::abs(back[i] - c * mf.F[i]));
                    scale = std::max(scale, std::abs(c * mf.F[i]));
                }
                CHECK(diff / scale < 1e-6);
                // The r-dependent prefactor variant is not proportional.
                const auto bad = case1_round_trip_r_prefactor(p, mf, grid);
                double ab2 = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i) ab2 += bad[i] * mf.F[i];
                const double c2 = ab2 / bb;
                double diff2 = 0.0;
                for (std::size_t i = 0; i < grid.size(); ++i) {
                    diff2 = std::max(diff2, std::abs(bad[i] - c2 * mf.F[i]));
                }
                CHECK(diff2 / (std::abs(c2) * scale / std::abs(c)) > 1e-3);
            }
        }
    }
}

TEST_CASE("property: boundary behaviour") {
    for (int parity : {1, -1}) {
        for (double e : {0.2, 0.5}) {
            const SystemParams p{1.0, e, 1, parity};
            const double s = p.frobenius_exponent();
            for (int n = 0; n <= 2; ++n) {
                if (!has_bound_state(p, n)) continue;
                const double lambda = lambda_of(p, n);
                const auto near = solve_standard(p, n, RadialGrid::geometric(1e-7 / lambda, 1e-6 / lambda, 2));
                const double q0 = near.f[0] / std::pow(near.grid.r[0], s);
                const double q1 = near.f[1] / std::pow(near.grid.r[1], s);
                CHECK(q0 != 0.0);
                CHECK(std::abs(q1 / q0 - 1.0) < 1e-4);
                const auto far = solve_heun_full(p, n, RadialGrid::geometric(600.0 / lambda, 600.01 / lambda, 2));
                const double slope = (std::log(std::abs(far.f[1])) - std::log(std::abs(far.f[0]))) /
                                     (far.grid.r[1] - far.grid.r[0]);
                CHECK(std::abs(slope / -lambda - 1.0) < 1e-2);
            }
        }
    }
}

TEST_CASE("coefficient ratio") {
    const auto c = coefficient_ratio({1.0, 0.5, 1, 1}, 1);
    CHECK(std::abs(c.from_eq32 - c.from_eq33) < 1e-12 * std::abs(c.from_eq33));
    CHECK_THROWS_AS(coefficient_ratio({1.0, 0.5, 1, 1}, 0), DegenerateGroundState);
    for (int parity : {1, -1}) {
        for (int nu = 1; nu <= 4; ++nu) {
            for (double e : {0.1, 0.5, 0.9 * nu}) {
                for (int n = 1; n <= 6; ++n) {
                    const auto r = coefficient_ratio({1.0, e, nu, parity}, n);
                    CHECK(r.from_eq32 < 0.0);
                    CHECK(r.from_eq33 < 0.0);
                    CHECK(std::abs(r.from_eq32 - r.from_eq33) < 1e-12 * std::abs(r.from_eq33));
                }
            }
        }
    }
}

TEST_CASE("residual diagnostics") {
    const SystemParams p{1.0, 0.5, 1, 1};
    const auto grid = default_grid(p, 2);
    auto sol = solve_standard(p, 2, grid);
    CHECK(residual(sol) < 1e-8);
    sol.level.E -= 1e-2;
    CHECK(residual(sol) > 1e-3);
    RadialSolution zero = sol;
    std::fill(zero.f.begin(), zero.f.end(), 0.0);
    std::fill(zero.g.begin(), zero.g.end(), 0.0);
    CHECK(residual(zero) == 0.0);
    CHECK_THROWS_AS(normalize(zero), ZeroNorm);
    const auto tiny = solve_standard(p, 2, RadialGrid::geometric(0.1, 1.0, 5));
    CHECK(std::isnan(residual(tiny)));
}

TEST_CASE("normalization") {
    const SystemParams p{1.0, 0.3, 2, -1};
    const auto grid = default_grid(p, 3);
    const auto a = normalize(solve_heun_full(p, 3, grid));
    double norm = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        norm += 0.5 * (grid.r[i] - grid.r[i - 1]) *
                (a.f[i] * a.f[i] + a.g[i] * a.g[i] + a.f[i - 1] * a.f[i - 1] + a.g[i - 1] * a.g[i - 1]);
    }
    CHECK(std::abs(norm - 1.0) < 1e-6);
    CHECK(a.f.front() > 0.0);
    const auto b = normalize(a);
    RadialSolution scaled = a;
    for (auto& v : scaled.f) v *= -2.0;
    for (auto& v : scaled.g) v *= -2.0;
    const auto c = normalize(scaled);
    for (std::size_t i = 0; i < grid.size(); i += 50) {
        CHECK(b.f[i] == doctest::Approx(a.f[i]).epsilon(1e-14));
        CHECK(c.g[i] == doctest::Approx(a.g[i]).epsilon(1e-14));
    }
}

TEST_CASE("derivative weights reproduce polynomials") {
    const auto g = RadialGrid::geometric(0.5, 3.0, 20);
    const auto w = derivative_weights(g.r, 10, 6, 9);
    double d = 0.0;
    for (std::size_t k = 0; k < 9; ++k) d += w[k] * std::pow(g.r[6 + k], 5);
    CHECK(d == doctest::Approx(5.0 * std::pow(g.r[10], 4)).epsilon(1e-11));
}
