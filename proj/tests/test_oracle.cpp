#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diracheun/errors.hpp"
#include "diracheun/model.hpp"
#include "diracheun/oracle.hpp"
#include "diracheun/routes.hpp"

using namespace diracheun;

namespace {

double closed(int n, int nu, double e) {
    const double N = n + std::sqrt(nu * nu - e * e);
    return 1.0 / std::sqrt(1.0 + e * e / (N * N));
}

double gap(double E) { return std::sqrt(1.0 - E * E); }

double peak(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

} // namespace

TEST_CASE("shoot configuration") {
    CHECK_NOTHROW(validate(ShootConfig{}));
    ShootConfig c;
    c.r_start = 0.0;
    CHECK_THROWS_AS(validate(c), InvalidParams);
    c = {};
    c.r_match = 50.0;
    CHECK_THROWS_AS(validate(c), InvalidParams);
    c = {};
    c.tol = 0.0;
    CHECK_THROWS_AS(validate(c), InvalidParams);
    c = {};
    c.max_step = -1.0;
    CHECK_THROWS_AS(validate(c), InvalidParams);
}

TEST_CASE("Frobenius start") {
    const SystemParams p{1.0, 0.5, 1, 1};
    const double E = closed(1, 1, 0.5);
    const double s = std::sqrt(0.75);
    CHECK(p.frobenius_exponent() == doctest::Approx(s).epsilon(1e-15));
    const auto d = frobenius_start(p, E, 1e-4);
    CHECK(d.f == doctest::Approx(std::pow(1e-4, s)).epsilon(1e-14));
    CHECK(d.g / d.f == doctest::Approx(-(s + 1.0) / 0.5).epsilon(1e-14));

    SUBCASE("leading-order residual is one order below the individual terms") {
        double prev = 0.0;
        for (double r : {1e-3, 1e-4, 1e-5, 1e-6}) {
            const auto x = frobenius_start(p, E, r);
            const double res1 = x.df + x.f / r + (E + 0.5 / r + 1.0) * x.g;
            const double res2 = x.dg - x.g / r - (E + 0.5 / r - 1.0) * x.f;
            const double term = std::abs(x.df);
            // Terms scale as r^(s-1), the residual as r^s.
            CHECK(term / std::pow(r, s - 1.0) == doctest::Approx(s).epsilon(1e-12));
            const double scaled = std::abs(res1) / std::pow(r, s) + std::abs(res2) / std::pow(r, s);
            if (prev > 0.0) CHECK(scaled == doctest::Approx(prev).epsilon(1e-9));
            prev = scaled;
        }
    }

    SUBCASE("series start satisfies the system to high order") {
        const double r = 1e-2;
        const auto x = frobenius_series(p, E, r);
        const double res1 = x.df + x.f / r + (E + 0.5 / r + 1.0) * x.g;
        const double res2 = x.dg - x.g / r - (E + 0.5 / r - 1.0) * x.f;
        CHECK(std::abs(res1) < 1e-12 * std::abs(x.df));
        CHECK(std::abs(res2) < 1e-12 * std::abs(x.dg));
    }

    SUBCASE("weak coupling: s -> nu, kappa ~ -2 nu / e, f/g -> 0") {
        for (double e : {1e-2, 1e-4, 1e-6}) {
            const SystemParams q{1.0, e, 1, 1};
            const auto y = frobenius_start(q, 0.9, 1e-4);
            CHECK(q.frobenius_exponent() == doctest::Approx(1.0).epsilon(e));
            CHECK(e * y.g / y.f == doctest::Approx(-2.0).epsilon(e));
        }
    }
}

TEST_CASE("shooting energies") {
    const SystemParams minus{1.0, 0.5, 1, -1}, plus{1.0, 0.5, 1, 1};
    const auto ground = shoot_energy(minus, 0.85, 0.88);
    CHECK(ground.n == 0);
    CHECK(ground.route == Route::Oracle);
    CHECK(std::abs(ground.E - std::sqrt(3.0) / 2.0) < 1e-8);
    const auto first = shoot_energy(plus, 0.95, 0.975);
    CHECK(first.n == 1);
    CHECK(std::abs(first.E - 0.9659258262890683) < 1e-8);
    CHECK_THROWS_AS(shoot_energy(plus, 0.90, 0.95), NoBracket);
    ShootConfig few;
    few.max_iterations = 3;
    CHECK_THROWS_AS(shoot_energy(plus, 0.95, 0.975, few), MaxIterations);
}

TEST_CASE("property: oracle reproduces the closed-form spectrum") {
    for (int parity : {1, -1}) {
        for (int nu = 1; nu <= 3; ++nu) {
            for (double e : {0.1, 0.3, 0.5}) {
                const SystemParams p{1.0, e, nu, parity};
                for (int n = 0; n <= 5; ++n) {
                    if (!has_bound_state(p, n)) continue;
                    const auto level = find_level(p, n);
                    CHECK(level.n == n);
                    CHECK(std::abs(level.E - closed(n, nu, e)) < 1e-8 * closed(n, nu, e));
                }
            }
        }
    }
}

TEST_CASE("property: parity sectors share the level set above n = 0") {
    for (double e : {0.2, 0.5}) {
        for (int n = 1; n <= 3; ++n) {
            const double a = find_level({1.0, e, 2, 1}, n).E;
            const double b = find_level({1.0, e, 2, -1}, n).E;
            CHECK(std::abs(a - b) < 1e-10);
        }
    }
    CHECK_THROWS_AS(find_level({1.0, 0.5, 1, 1}, 0), NoBoundState);
}

TEST_CASE("level counting and brackets") {
    const SystemParams p{1.0, 0.5, 1, -1};
    CHECK(level_count(p, 0.5) == 0);
    CHECK(level_count(p, 0.5 * (closed(0, 1, 0.5) + closed(1, 1, 0.5))) == 1);
    CHECK(level_count(p, 0.5 * (closed(2, 1, 0.5) + closed(3, 1, 0.5))) == 3);
    for (int k = 0; k <= 4; ++k) {
        const auto b = bracket_level(p, k);
        CHECK(b.lo < closed(k, 1, 0.5));
        CHECK(b.hi > closed(k, 1, 0.5));
    }
    // The uniform scan resolves the low levels; the crowded top end merges.
    const auto scan = scan_brackets(p);
    REQUIRE(scan.size() >= 3);
    CHECK(scan[0].lo < closed(0, 1, 0.5));
    CHECK(scan[0].hi > closed(0, 1, 0.5));
    CHECK(scan[1].lo < closed(1, 1, 0.5));
    CHECK(scan[1].hi > closed(1, 1, 0.5));
}

TEST_CASE("outward integration") {
    const SystemParams p{1.0, 0.5, 1, 1};
    SUBCASE("at a level the solution decays well below its peak") {
        const double E = closed(1, 1, 0.5);
        const auto grid = RadialGrid::scaled(gap(E), 400, 0.01, 40.0);
        const auto out = integrate_radial(p, E, grid);
        CHECK(out.level.n == -1);
        // Outward alone reaches < 1e-6 around 24/lambda before the growing
        // mode, seeded by rounding, takes over; the matched solution stays small.
        double lowest = 1.0;
        for (double v : out.f) lowest = std::min(lowest, std::abs(v) / peak(out.f));
        CHECK(lowest < 1e-6);
        const auto matched = integrate_matched(p, E, grid);
        CHECK(std::abs(matched.f.back()) / peak(matched.f) < 1e-6);
        CHECK(std::abs(matched.g.back()) / peak(matched.g) < 1e-6);
    }
    SUBCASE("between levels the growing mode dominates") {
        const double E = 0.5 * (closed(1, 1, 0.5) + closed(2, 1, 0.5));
        const auto grid = RadialGrid::scaled(gap(E), 400, 0.01, 40.0);
        const auto out = integrate_radial(p, E, grid);
        double interior = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (grid.r[i] * gap(E) < 20.0) interior = std::max(interior, std::abs(out.f[i]));
        }
        CHECK(std::abs(out.f.back()) / interior >= 1e3);
    }
    SUBCASE("halving the tolerance moves f by less than ten tolerances") {
        const double E = closed(1, 1, 0.5);
        const auto grid = RadialGrid::scaled(gap(E), 400, 0.01, 10.0);
        for (double tol : {1e-6, 1e-8, 1e-10}) {
            ShootConfig a;
            a.tol = tol;
            a.max_step = 2.0; // let the error control, not the step cap, set the steps
            ShootConfig b = a;
            b.tol = tol / 2.0;
            const auto x = integrate_radial(p, E, grid, a);
            const auto y = integrate_radial(p, E, grid, b);
            double diff = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) diff = std::max(diff, std::abs(x.f[i] - y.f[i]));
            CHECK(diff / peak(x.f) < 10.0 * tol);
        }
    }
    SUBCASE("deterministic") {
        const auto grid = RadialGrid::scaled(0.3, 100);
        const auto a = integrate_radial(p, 0.95, grid);
        const auto b = integrate_radial(p, 0.95, grid);
        CHECK(a.f == b.f);
        CHECK(a.g == b.g);
    }
    CHECK_THROWS_AS(integrate_radial(p, 0.95, RadialGrid{{1e-9, 1.0}}), InvalidParams);
}

TEST_CASE("property: oracle wavefunctions match the full Heun route") {
    for (int parity : {1, -1}) {
        for (int nu = 1; nu <= 2; ++nu) {
            for (double e : {0.2, 0.5}) {
                const SystemParams p{1.0, e, nu, parity};
                for (int n = 0; n <= 3; ++n) {
                    if (!has_bound_state(p, n)) continue;
                    const auto grid = default_grid(p, n);
                    const double lambda = gap(closed(n, nu, e));
                    const auto a = normalize(solve_heun_full(p, n, grid));
                    const auto b = oracle_wavefunction(p, n, grid);
                    CHECK(relative_deviation(a, b, 0.05 / lambda, 30.0 / lambda) < 1e-5);
                    CHECK(count_sign_changes(b.g) == n);
                }
            }
        }
    }
}
