#include "diracheun/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "diracheun/errors.hpp"

namespace diracheun {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

constexpr double kOverflow = 1e300;

double lambda_of(const SystemParams& params, double E) {
    return std::sqrt((params.m - E) * (params.m + E));
}

void require_energy(const SystemParams& params, double E, const char* who) {
    validate(params);
    if (!(params.e > 0.0)) throw InvalidParams(std::string(who) + ": coupling must be positive");
    if (!(E > 0.0 && E < params.m) || params.m - E < 1e-12 * params.m) {
        throw InvalidParams(std::string(who) + ": energy must lie in (0, m)");
    }
}

// The radial system in t = ln r, parity folded into the sign of m:
//   df/dt = -nu f - (E r + e + m r) g,   dg/dt = nu g + (E r + e - m r) f.
struct RadialSystem {
    double nu, e, E, m;
    void operator()(const State& x, State& dxdt, double t) const {
        const double r = std::exp(t);
        dxdt[0] = -nu * x[0] - (E * r + e + m * r) * x[1];
        dxdt[1] = nu * x[1] + (E * r + e - m * r) * x[0];
    }
};

// Pruefer phase tan(theta) = g / f in the same variable.
struct PhaseSystem {
    double nu, e, E, m;
    void operator()(const std::array<double, 1>& x, std::array<double, 1>& dxdt,
                    double t) const {
        const double r = std::exp(t);
        dxdt[0] = nu * std::sin(2.0 * x[0]) + E * r + e - m * r * std::cos(2.0 * x[0]);
    }
};

// The same system in tau = -ln r, for inward integration with increasing time.
struct ReversedSystem {
    RadialSystem forward;
    void operator()(const State& x, State& dxdt, double tau) const {
        forward(x, dxdt, -tau);
        dxdt[0] = -dxdt[0];
        dxdt[1] = -dxdt[1];
    }
};

RadialSystem radial_system(const SystemParams& params, double E) {
    return {static_cast<double>(params.nu), params.e, E, params.parity * params.m};
}

template <class Sys, class X, class Obs>
void run(const Sys& sys, X& x, const std::vector<double>& times, const ShootConfig& config,
         Obs&& obs) {
    const double dt_max = config.max_step;
    auto stepper =
        odeint::make_controlled(config.tol, config.tol, dt_max, odeint::runge_kutta_fehlberg78<X>());
    try {
        odeint::integrate_times(stepper, sys, x, times.begin(), times.end(), config.initial_step, obs,
                                odeint::max_step_checker(100000));
    } catch (const Error&) {
        throw;
    } catch (const std::exception& ex) {
        throw StepFailure(std::string("radial integration failed: ") + ex.what());
    }
}

State start_state(const SystemParams& params, double E, double r) {
    const auto fr = frobenius_series(params, E, r);
    // Rescale by r^s so the start is O(1).
    const double scale = std::exp(-params.frobenius_exponent() * std::log(r));
    return {fr.f * scale, fr.g * scale};
}

// Outward values of (f, g) at the given radii (all above r_start).
void outward(const SystemParams& params, double E, double r_start,
             const std::vector<double>& radii, const ShootConfig& config,
             std::vector<double>& f, std::vector<double>& g) {
    std::vector<double> times{std::log(r_start)};
    for (double r : radii) times.push_back(std::log(r));
    State x = start_state(params, E, r_start);
    f.assign(radii.size(), 0.0);
    g.assign(radii.size(), 0.0);
    std::size_t k = 0;
    bool first = true;
    run(radial_system(params, E), x, times, config, [&](const State& s, double) {
        if (first) {
            first = false;
            return;
        }
        if (!(std::abs(s[0]) < kOverflow && std::abs(s[1]) < kOverflow)) {
            throw Overflow("radial integration exceeded 1e300");
        }
        f[k] = s[0];
        g[k] = s[1];
        ++k;
    });
}

std::vector<double> log_samples(double r_lo, double r_hi, double step) {
    const double a = std::log(r_lo);
    const double b = std::log(r_hi);
    const auto count = static_cast<std::size_t>(std::ceil((b - a) / step)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    }
    return out;
}

// Phase index k with theta(r_far) ~ theta_stable + k pi.
double phase_index(const SystemParams& params, double E, const ShootConfig& config) {
    const double lambda = lambda_of(params, E);
    const double r0 = config.r_start / lambda;
    const double r1 = config.r_far / lambda;
    const auto st = start_state(params, E, r0);
    std::array<double, 1> theta{std::atan2(st[1], st[0])};
    const auto sys = radial_system(params, E);
    PhaseSystem phase{sys.nu, sys.e, sys.E, sys.m};
    run(phase, theta, {std::log(r0), std::log(r1)}, config, [](const auto&, double) {});
    // Attracting direction of the phase far out: E = m cos(2 theta) with
    // m sin(2 theta) < 0 (m carrying the parity sign).
    const double c = E / sys.m;
    const double half = 0.5 * std::acos(std::clamp(c, -1.0, 1.0));
    const double stable = sys.m > 0.0 ? -half : half;
    return (theta[0] - stable) / std::numbers::pi;
}

int sector_offset(const SystemParams& params) { return params.parity == 1 ? 1 : 0; }

} // namespace

void validate(const ShootConfig& c) {
    if (!(c.r_start > 0.0) || !(c.r_far > c.r_start)) {
        throw InvalidParams("ShootConfig: need 0 < r_start < r_far");
    }
    if (c.r_match != 0.0 && !(c.r_match > c.r_start && c.r_match < c.r_far)) {
        throw InvalidParams("ShootConfig: r_match must lie strictly between r_start and r_far");
    }
    if (!(c.tol > 0.0) || !(c.energy_tol > 0.0)) {
        throw InvalidParams("ShootConfig: tolerances must be positive");
    }
    if (!(c.initial_step > 0.0) || !(c.max_step >= c.initial_step)) {
        throw InvalidParams("ShootConfig: need 0 < initial_step <= max_step");
    }
    if (c.max_iterations < 1) throw InvalidParams("ShootConfig: max_iterations must be >= 1");
}

FrobeniusData frobenius_start(const SystemParams& params, double E, double r) {
    require_energy(params, E, "frobenius_start");
    if (!(r > 0.0)) throw InvalidParams("frobenius_start: r must be positive");
    const double s = params.frobenius_exponent();
    const double kappa = -(s + params.nu) / params.e;
    const double rs = std::pow(r, s);
    return {rs, kappa * rs, s * rs / r, kappa * s * rs / r};
}

FrobeniusData frobenius_series(const SystemParams& params, double E, double r, int terms) {
    require_energy(params, E, "frobenius_series");
    if (!(r > 0.0)) throw InvalidParams("frobenius_series: r must be positive");
    const double s = params.frobenius_exponent();
    const double nu = params.nu;
    const double e = params.e;
    const double m = params.parity * params.m;
    // f = sum p_k r^{s+k}, g = sum q_k r^{s+k}:
    //   (s+k+nu) p_k + e q_k = -(E+m) q_{k-1},  -e p_k + (s+k-nu) q_k = (E-m) p_{k-1};
    // the determinant is k (2s + k).
    double p = 1.0;
    double q = -(s + nu) / e;
    FrobeniusData out{};
    double rk = 1.0;
    for (int k = 0; k <= terms; ++k) {
        if (k > 0) {
            const double b1 = -(E + m) * q;
            const double b2 = (E - m) * p;
            const double a11 = s + k + nu, a22 = s + k - nu;
            const double det = k * (2.0 * s + k);
            p = (a22 * b1 - e * b2) / det;
            q = (a11 * b2 + e * b1) / det;
            rk *= r;
        }
        out.f += p * rk;
        out.g += q * rk;
        out.df += (s + k) * p * rk / r;
        out.dg += (s + k) * q * rk / r;
    }
    const double rs = std::pow(r, s);
    out.f *= rs;
    out.g *= rs;
    out.df *= rs;
    out.dg *= rs;
    return out;
}

RadialSolution integrate_radial(const SystemParams& params, double E, const RadialGrid& grid,
                                const ShootConfig& config) {
    require_energy(params, E, "integrate_radial");
    validate(config);
    validate(grid);
    const double r0 = config.r_start / lambda_of(params, E);
    if (!(grid.r.front() > r0)) throw InvalidParams("integrate_radial: grid starts below r_start");
    RadialSolution sol;
    sol.grid = grid;
    sol.system = params;
    sol.level = {-1, params.nu, params.parity, E, E / params.m, Route::Oracle};
    outward(params, E, r0, grid.r, config, sol.f, sol.g);
    return sol;
}

RadialSolution integrate_matched(const SystemParams& params, double E, const RadialGrid& grid,
                                 const ShootConfig& config) {
    require_energy(params, E, "integrate_matched");
    validate(config);
    validate(grid);
    const double lambda = lambda_of(params, E);
    const double r0 = config.r_start / lambda;
    if (!(grid.r.front() > r0)) {
        throw InvalidParams("integrate_matched: grid starts below r_start");
    }
    const std::size_t N = grid.size();
    if (N < 3) throw InvalidParams("integrate_matched: grid needs at least 3 points");

    double r_match = config.r_match / lambda;
    if (config.r_match == 0.0) {
        // Outer classical turning point, -lambda^2 r^2 + 2 E e r - s^2 = 0.
        const double s = params.frobenius_exponent();
        const double eps = params.e * E / lambda;
        r_match = (eps + std::sqrt(std::max(0.0, eps * eps - s * s))) / lambda;
    }
    const auto it = std::lower_bound(grid.r.begin(), grid.r.end(), r_match);
    auto j = static_cast<std::size_t>(std::distance(grid.r.begin(), it));
    j = std::clamp<std::size_t>(j, 1, N - 2);

    RadialSolution sol;
    sol.grid = grid;
    sol.system = params;
    sol.level = {-1, params.nu, params.parity, E, E / params.m, Route::Oracle};

    std::vector<double> inner(grid.r.begin(), grid.r.begin() + static_cast<long>(j) + 1);
    std::vector<double> fo, go;
    outward(params, E, r0, inner, config, fo, go);

    // Inward from the last radius on the decaying direction g/f = lambda/(E + m).
    const auto sys = radial_system(params, E);
    State x{1.0, lambda / (E + sys.m)};
    std::vector<double> times;
    for (std::size_t i = N; i-- > j;) times.push_back(-std::log(grid.r[i]));
    std::vector<double> fi(N, 0.0), gi(N, 0.0);
    std::size_t k = N;
    run(ReversedSystem{sys}, x, times, config, [&](const State& s, double) {
        --k;
        fi[k] = s[0];
        gi[k] = s[1];
    });

    const double fo_j = fo[j], go_j = go[j];
    const bool use_f = std::abs(fo_j) * std::abs(gi[j]) >= std::abs(go_j) * std::abs(fi[j]);
    const double scale = use_f ? fo_j / fi[j] : go_j / gi[j];
    if (!std::isfinite(scale)) throw NoConvergence("integrate_matched: matching failed");
    sol.f.resize(N);
    sol.g.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        sol.f[i] = i <= j ? fo[i] : scale * fi[i];
        sol.g[i] = i <= j ? go[i] : scale * gi[i];
    }
    return sol;
}

double shooting_functional(const SystemParams& params, double E, const ShootConfig& config) {
    require_energy(params, E, "shooting_functional");
    validate(config);
    const double lambda = lambda_of(params, E);
    const double r0 = config.r_start / lambda;
    const auto radii = log_samples(r0 * 1.01, config.r_far / lambda, config.max_step);
    std::vector<double> f, g;
    outward(params, E, r0, radii, config, f, g);
    double peak = 0.0;
    for (double v : f) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw NoConvergence("shooting_functional: vanishing solution");
    return f.back() / peak;
}

int level_count(const SystemParams& params, double E, const ShootConfig& config) {
    require_energy(params, E, "level_count");
    validate(config);
    // No level of either sector lies below E = 0 for attractive coupling.
    const double base = phase_index(params, 1e-9 * params.m, config);
    return static_cast<int>(std::lround(phase_index(params, E, config) - base));
}

std::vector<EnergyBracket> scan_brackets(const SystemParams& params, const ShootConfig& config,
                                         int points) {
    validate(params);
    if (points < 2) throw InvalidParams("scan_brackets: need at least 2 points");
    const double lo = 0.2 * params.m;
    const double hi = params.m * (1.0 - 1e-9);
    std::vector<EnergyBracket> out;
    double E_prev = lo;
    double phi_prev = shooting_functional(params, lo, config);
    for (int i = 1; i < points; ++i) {
        const double E = lo + (hi - lo) * i / (points - 1);
        const double phi = shooting_functional(params, E, config);
        if (std::signbit(phi) != std::signbit(phi_prev)) out.push_back({E_prev, E});
        E_prev = E;
        phi_prev = phi;
    }
    return out;
}

EnergyBracket bracket_level(const SystemParams& params, int ordinal, const ShootConfig& config) {
    validate(params);
    validate(config);
    if (ordinal < 0) throw InvalidParams("bracket_level: ordinal must be non-negative");
    const double m = params.m;
    const double base = phase_index(params, 1e-9 * m, config);
    auto count = [&](double E) {
        return static_cast<int>(std::lround(phase_index(params, E, config) - base));
    };
    double lo = 1e-9 * m;
    double hi = 0.5 * m;
    int c_hi = count(hi);
    // Levels accumulate at m; approach it geometrically.
    for (int it = 0; c_hi <= ordinal; ++it) {
        if (it > 60) throw NoBracket("bracket_level: level not found below m");
        lo = hi;
        hi = m - 0.25 * (m - hi);
        c_hi = count(hi);
    }
    for (int it = 0; it < config.max_iterations; ++it) {
        const double mid = 0.5 * (lo + hi);
        const int c = count(mid);
        if (c <= ordinal) {
            lo = mid;
        } else {
            hi = mid;
            c_hi = c;
        }
        if (c_hi == ordinal + 1 && count(lo) == ordinal && (hi - lo) < 1e-3 * (m - lo)) break;
    }
    return {lo, hi};
}

EnergyLevel shoot_energy(const SystemParams& params, double E_lo, double E_hi,
                         const ShootConfig& config) {
    validate(params);
    validate(config);
    if (!(E_lo < E_hi)) throw InvalidParams("shoot_energy: need E_lo < E_hi");
    double lo = E_lo, hi = E_hi;
    double phi_lo = shooting_functional(params, lo, config);
    const double phi_hi = shooting_functional(params, hi, config);
    if (std::signbit(phi_lo) == std::signbit(phi_hi)) {
        throw NoBracket("shoot_energy: the functional has the same sign at both ends");
    }
    const double m = params.m;
    int it = 0;
    for (; (hi - lo) > config.energy_tol * m; ++it) {
        if (it >= config.max_iterations) {
            throw MaxIterations("shoot_energy: bisection did not reach the energy tolerance");
        }
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            throw NoConvergence("shoot_energy: energy tolerance is below the floating-point "
                                "resolution at E");
        }
        const double phi = shooting_functional(params, mid, config);
        if (std::signbit(phi) == std::signbit(phi_lo)) {
            lo = mid;
            phi_lo = phi;
        } else {
            hi = mid;
        }
    }
    EnergyLevel level;
    level.nu = params.nu;
    level.parity = params.parity;
    level.E = 0.5 * (lo + hi);
    level.E_over_m = level.E / m;
    level.route = Route::Oracle;
    level.n = level_count(params, E_lo, config) + sector_offset(params);
    return level;
}

EnergyLevel find_level(const SystemParams& params, int n, const ShootConfig& config) {
    validate(params);
    if (!(params.e > 0.0)) throw InvalidParams("find_level: zero coupling has no bound states");
    if (!has_bound_state(params, n)) {
        throw NoBoundState("find_level: the parity +1 sector has no n = 0 level");
    }
    const auto b = bracket_level(params, n - sector_offset(params), config);
    auto level = shoot_energy(params, b.lo, b.hi, config);
    level.n = n;
    return level;
}

RadialSolution oracle_wavefunction(const SystemParams& params, int n, const RadialGrid& grid,
                                   const ShootConfig& config) {
    const auto level = find_level(params, n, config);
    auto sol = normalize(integrate_matched(params, level.E, grid, config));
    sol.level = level;
    return sol;
}

} // namespace diracheun
