#include "diracheun/routes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "diracheun/errors.hpp"

namespace diracheun {

namespace {

using specfun::heunc_eval;
using specfun::kummer;
using specfun::kummer_derivative;

void require_level(const SystemParams& params, int n, const char* who) {
    validate(params);
    if (n < 0) throw InvalidParams(std::string(who) + ": n must be non-negative");
    if (!(params.e > 0.0)) {
        throw InvalidParams(std::string(who) + ": zero coupling has no bound states");
    }
    if (!has_bound_state(params, n)) {
        throw NoBoundState(std::string(who) + ": the parity +1 sector has no n = 0 level");
    }
}

void require_parity_plus(const SystemParams& params, const char* who) {
    if (params.parity != 1) {
        throw InvalidParams(std::string(who) + ": mixed routes cover the parity +1 sector only");
    }
}

RadialSolution make_solution(const SystemParams& params, int n, const RadialGrid& grid,
                             Route route) {
    RadialSolution sol;
    sol.grid = grid;
    sol.system = params;
    sol.level = energy_closed_form(n, params);
    sol.level.route = route;
    sol.f.resize(grid.size());
    sol.g.resize(grid.size());
    return sol;
}

// x^s e^{-x/2} for x > 0, formed in log space.
double kummer_envelope(double s, double x) { return std::exp(s * std::log(x) - 0.5 * x); }

// Kummer-side function G = x^s e^{-x/2} M(-n; c; x), x = 2 lambda r, and dG/dr.
void kummer_function(double s, int n, double c, double lambda, double r, double& G,
                     double& dG) {
    const double x = 2.0 * lambda * r;
    const specfun::KummerParams kp{-static_cast<double>(n), c};
    const double M = kummer(kp, x);
    const double dM = kummer_derivative(kp, x);
    const double env = kummer_envelope(s, x);
    G = env * M;
    dG = 2.0 * lambda * env * ((s / x - 0.5) * M + dM);
}

// Phi(y) = (-y)^s e^{b y} H(y) on y < 0 with r-derivatives, y = r / S.
void heun_function(const specfun::HeunCParams& hp, double s, double b, double S, double r,
                   double& F, double& dF, double& d2F) {
    const double y = r / S;
    const auto h = heunc_eval(hp, y);
    const double p = std::exp(s * std::log(-y) + b * y);
    const double u = s / y + b;
    const double py = p * u;
    const double pyy = p * (u * u - s / (y * y));
    F = p * h.value;
    dF = (py * h.value + p * h.first) / S;
    d2F = (pyy * h.value + 2.0 * py * h.first + p * h.second) / (S * S);
}

// Index used to fix a relative scale: the median radius, then its neighbours,
// skipping points where either side is negligible.
template <class Lhs, class Rhs>
std::size_t calibration_index(std::size_t count, Lhs&& lhs, Rhs&& rhs, double lhs_max,
                              double rhs_max) {
    const std::size_t mid = count / 2;
    for (std::size_t off = 0; off < count; ++off) {
        for (int sign : {+1, -1}) {
            if (off == 0 && sign < 0) continue;
            const auto i = static_cast<long>(mid) + sign * static_cast<long>(off);
            if (i < 0 || i >= static_cast<long>(count)) continue;
            const auto k = static_cast<std::size_t>(i);
            if (std::abs(lhs(k)) > 1e-12 * lhs_max && std::abs(rhs(k)) > 1e-12 * rhs_max) {
                return k;
            }
        }
    }
    throw CalibrationFailure("no radius where both sides of the relation are non-negligible");
}

double max_abs(const std::vector<double>& v) {
    double out = 0.0;
    for (double x : v) out = std::max(out, std::abs(x));
    return out;
}

void reconstruct(const MixedFunctions& mf, RadialSolution& sol) {
    const double c = mf.mixing.cos_half;
    const double s = mf.mixing.sin_half;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        sol.f[i] = c * mf.F[i] + s * mf.G[i];
        sol.g[i] = -s * mf.F[i] + c * mf.G[i];
    }
}

// (P, Q) = (g, -f) of the nu -> -nu solution gives the parity -1 pair.
void apply_parity(int parity, std::vector<double>& f, std::vector<double>& g) {
    if (parity == 1) return;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double p = g[i];
        g[i] = -f[i];
        f[i] = p;
    }
}

} // namespace

RadialGrid RadialGrid::geometric(double r_min, double r_max, std::size_t count) {
    if (!(r_min > 0.0) || !(r_max > r_min) || !std::isfinite(r_max)) {
        throw InvalidParams("radial grid needs 0 < r_min < r_max");
    }
    if (count < 2) throw InvalidParams("radial grid needs at least 2 points");
    RadialGrid grid;
    grid.r.resize(count);
    const double lo = std::log(r_min);
    const double step = (std::log(r_max) - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) grid.r[i] = std::exp(lo + step * static_cast<double>(i));
    grid.r.front() = r_min;
    grid.r.back() = r_max;
    return grid;
}

RadialGrid RadialGrid::scaled(double lambda, std::size_t count, double r_min, double r_max) {
    if (!(lambda > 0.0)) throw InvalidParams("radial grid scale must be positive");
    return geometric(r_min / lambda, r_max / lambda, count);
}

void validate(const RadialGrid& grid) {
    if (grid.size() < 2) throw InvalidParams("radial grid needs at least 2 points");
    if (!(grid.r.front() > 0.0)) throw InvalidParams("radial grid must start at r > 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid.r[i] > grid.r[i - 1]) || !std::isfinite(grid.r[i])) {
            throw InvalidParams("radial grid must be finite and strictly increasing");
        }
    }
}

RadialGrid default_grid(const SystemParams& params, int n, std::size_t count) {
    const auto level = energy_closed_form(n, params);
    return RadialGrid::scaled(standard_vars(params, level.E).lambda, count);
}

RadialSolution solve_standard(const SystemParams& params, int n, const RadialGrid& grid) {
    require_level(params, n, "solve_standard");
    validate(grid);
    auto sol = make_solution(params, n, grid, Route::Standard);
    const double E = sol.level.E;
    const double m = params.m;
    const auto v = standard_vars(params, E);
    const double nu = params.signed_nu();
    const double c = 2.0 * v.A_frob + 1.0;
    // C1 = 1; the ground level has C2 = 0 outright.
    const double C2 = n == 0 ? 0.0 : -(nu + v.mu) / (v.A_frob + v.eps);
    const double up = std::sqrt(m + E);
    const double down = std::sqrt((m - E) * (m + E)) / up;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double y = 2.0 * v.lambda * grid.r[i];
        const double env = kummer_envelope(v.A_frob, y);
        const double F1 = env * kummer({-static_cast<double>(n), c}, y);
        const double F2 = C2 == 0.0 ? 0.0 : C2 * env * kummer({1.0 - n, c}, y);
        sol.f[i] = up * (F1 + F2);
        sol.g[i] = down * (F1 - F2);
    }
    apply_parity(params.parity, sol.f, sol.g);
    return sol;
}

MixedFunctions mixed_case1_functions(const SystemParams& params, int n, const RadialGrid& grid) {
    require_level(params, n, "solve_mixed_case1");
    require_parity_plus(params, "solve_mixed_case1");
    validate(grid);
    MixedFunctions mf;
    mf.E = energy_closed_form(n, params).E;
    mf.mixing = mixing_case(MixingCaseId::One, params, mf.E);
    const double s = params.frobenius_exponent();
    const double lambda = standard_vars(params, mf.E).lambda;
    const double R = *mf.mixing.singular_point;
    const auto hp = heun_params_case1(params, mf.E);
    const std::size_t N = grid.size();
    mf.F.resize(N), mf.dF.resize(N), mf.d2F.resize(N), mf.G.resize(N), mf.dG.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = grid.r[i];
        kummer_function(s, n, 2.0 * s, lambda, r, mf.G[i], mf.dG[i]);
        heun_function(hp, s, 0.5 * hp.alpha, R, r, mf.F[i], mf.dF[i], mf.d2F[i]);
    }
    const auto forward = case1_forward(params, mf, grid);
    const auto k = calibration_index(
        N, [&](std::size_t i) { return forward[i]; }, [&](std::size_t i) { return mf.G[i]; },
        max_abs(forward), max_abs(mf.G));
    const double scale = mf.G[k] / forward[k];
    for (std::size_t i = 0; i < N; ++i) {
        mf.F[i] *= scale;
        mf.dF[i] *= scale;
        mf.d2F[i] *= scale;
    }
    return mf;
}

MixedFunctions mixed_case2_functions(const SystemParams& params, int n, const RadialGrid& grid) {
    require_level(params, n, "solve_mixed_case2");
    require_parity_plus(params, "solve_mixed_case2");
    validate(grid);
    MixedFunctions mf;
    mf.E = energy_closed_form(n, params).E;
    mf.mixing = mixing_case(MixingCaseId::Two, params, mf.E);
    const double s = params.frobenius_exponent();
    const double lambda = standard_vars(params, mf.E).lambda;
    const double D = *mf.mixing.singular_point;
    const auto hp = heun_params_case2(params, mf.E);
    const std::size_t N = grid.size();
    mf.F.resize(N), mf.dF.resize(N), mf.d2F.resize(N), mf.G.resize(N), mf.dG.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        const double r = grid.r[i];
        kummer_function(s, n, 2.0 * s + 1.0, lambda, r, mf.G[i], mf.dG[i]);
        heun_function(hp, s, 0.5 * hp.alpha, D, r, mf.F[i], mf.dF[i], mf.d2F[i]);
    }
    const auto back = case2_back(params, mf, grid);
    const auto k = calibration_index(
        N, [&](std::size_t i) { return mf.F[i]; }, [&](std::size_t i) { return back[i]; },
        max_abs(mf.F), max_abs(back));
    const double scale = back[k] / mf.F[k];
    for (std::size_t i = 0; i < N; ++i) {
        mf.F[i] *= scale;
        mf.dF[i] *= scale;
        mf.d2F[i] *= scale;
    }
    return mf;
}

RadialSolution solve_mixed_case1(const SystemParams& params, int n, const RadialGrid& grid) {
    const auto mf = mixed_case1_functions(params, n, grid);
    auto sol = make_solution(params, n, grid, Route::Mixed1);
    reconstruct(mf, sol);
    return sol;
}

RadialSolution solve_mixed_case2(const SystemParams& params, int n, const RadialGrid& grid) {
    const auto mf = mixed_case2_functions(params, n, grid);
    auto sol = make_solution(params, n, grid, Route::Mixed2);
    reconstruct(mf, sol);
    return sol;
}

RadialSolution solve_heun_full(const SystemParams& params, int n, const RadialGrid& grid) {
    require_level(params, n, "solve_heun_full");
    validate(grid);
    auto sol = make_solution(params, n, grid, Route::Heun);
    const double E = sol.level.E;
    const double m = params.m;
    const double e = params.e;
    const double nu = params.signed_nu();
    const auto hp = heun_params_full(params, E);
    const double A = 0.5 * hp.beta;
    const double C = 0.5 * hp.alpha;
    const double dxdr = -(E + m) / e;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double x = dxdr * r;
        const auto h = heunc_eval(hp, x);
        const double q = std::exp(A * std::log(-x) + C * x);
        const double f = q * h.value;
        const double df = dxdr * (q * (A / x + C) * h.value + q * h.first);
        sol.f[i] = f;
        sol.g[i] = -(df + nu / r * f) / (E + e / r + m);
    }
    apply_parity(params.parity, sol.f, sol.g);
    return sol;
}

RadialSolution solve(Route route, const SystemParams& params, int n, const RadialGrid& grid) {
    switch (route) {
    case Route::Standard: return solve_standard(params, n, grid);
    case Route::Mixed1: return solve_mixed_case1(params, n, grid);
    case Route::Mixed2: return solve_mixed_case2(params, n, grid);
    case Route::Heun: return solve_heun_full(params, n, grid);
    default: break;
    }
    throw InvalidParams("solve: route " + std::string(to_string(route)) +
                        " has no analytic wavefunction");
}

std::vector<double> case1_forward(const SystemParams& params, const MixedFunctions& mf,
                                  const RadialGrid& grid) {
    const double R = *mf.mixing.singular_point;
    const double nc = params.nu * mf.mixing.cosA;
    const double ms = params.m * mf.mixing.sinA;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        // (1/2e) y/(y-1) (d/dy + ...) equals R r / (2e (r - R)) (d/dr + ...).
        const double K = R * r / (2.0 * params.e * (r - R));
        out[i] = K * (mf.dF[i] + (nc / r - ms) * mf.F[i]);
    }
    return out;
}

namespace {

// (d/dr - nu cosA / r + m sinA) applied to the G produced by case1_forward.
std::vector<double> case1_back_operator(const SystemParams& params, const MixedFunctions& mf,
                                        const RadialGrid& grid) {
    const double R = *mf.mixing.singular_point;
    const double nc = params.nu * mf.mixing.cosA;
    const double ms = params.m * mf.mixing.sinA;
    const double e2 = 2.0 * params.e;
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        const double K = R * r / (e2 * (r - R));
        const double dK = -R * R / (e2 * (r - R) * (r - R));
        const double L = mf.dF[i] + (nc / r - ms) * mf.F[i];
        const double dL = mf.d2F[i] - nc / (r * r) * mf.F[i] + (nc / r - ms) * mf.dF[i];
        const double G = K * L;
        const double dG = dK * L + K * dL;
        out[i] = dG - nc / r * G + ms * G;
    }
    return out;
}

} // namespace

std::vector<double> case1_round_trip(const SystemParams& params, const MixedFunctions& mf,
                                     const RadialGrid& grid) {
    const double denom = mf.E - params.m * mf.mixing.cosA;
    if (denom == 0.0) throw DegenerateCase("case 1 back relation: E - m cosA vanishes");
    auto out = case1_back_operator(params, mf, grid);
    for (double& v : out) v /= denom;
    return out;
}

std::vector<double> case1_round_trip_r_prefactor(const SystemParams& params,
                                                 const MixedFunctions& mf,
                                                 const RadialGrid& grid) {
    auto out = case1_back_operator(params, mf, grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = grid.r[i];
        out[i] *= r / (2.0 * (mf.E * r + params.e));
    }
    return out;
}

std::vector<double> case2_back(const SystemParams& params, const MixedFunctions& mf,
                               const RadialGrid& grid) {
    const double nc = params.nu * mf.mixing.cosA;
    const double ms = params.m * mf.mixing.sinA;
    const double coupling = params.e - params.nu * mf.mixing.sinA;
    if (coupling == 0.0) throw DegenerateCase("case 2 relation: e - nu sinA vanishes");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.r[i];
        out[i] = r * (mf.dG[i] - nc / r * mf.G[i] + ms * mf.G[i]) / coupling;
    }
    return out;
}

CoefficientRatio coefficient_ratio(const SystemParams& params, int n) {
    validate(params);
    if (n < 0) throw InvalidParams("coefficient_ratio: n must be non-negative");
    if (n == 0) {
        throw DegenerateGroundState("coefficient_ratio: n = 0 makes (nu - mu)/n indeterminate");
    }
    const auto v = level_vars(n, params);
    const double nu = params.signed_nu();
    return {(nu - v.mu) / n, -(v.A_frob + v.eps) / (nu + v.mu)};
}

std::vector<double> derivative_weights(const std::vector<double>& x, std::size_t centre,
                                       std::size_t first, std::size_t count) {
    // Fornberg's recursion for the weights of orders 0 and 1.
    const double z = x[centre];
    std::vector<double> w0(count, 0.0), w1(count, 0.0);
    double c1 = 1.0;
    double c4 = x[first] - z;
    w0[0] = 1.0;
    for (std::size_t i = 1; i < count; ++i) {
        const double c5 = c4;
        c4 = x[first + i] - z;
        double c2 = 1.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = x[first + i] - x[first + j];
            c2 *= c3;
            if (j == i - 1) {
                w1[i] = c1 * (w0[i - 1] - c5 * w1[i - 1]) / c2;
                w0[i] = -c1 * c5 * w0[i - 1] / c2;
            }
            w1[j] = (c4 * w1[j] - w0[j]) / c3;
            w0[j] = c4 * w0[j] / c3;
        }
        c1 = c2;
    }
    return w1;
}

double residual(const RadialSolution& sol) {
    constexpr std::size_t half = 4;
    constexpr std::size_t width = 2 * half + 1;
    const auto& r = sol.grid.r;
    if (sol.f.size() != r.size() || sol.g.size() != r.size()) {
        throw InvalidParams("residual: f, g and grid sizes differ");
    }
    if (r.size() < width) return std::numeric_limits<double>::quiet_NaN();
    const double E = sol.level.E;
    const double e = sol.system.e;
    const double nu = sol.system.nu;
    const double m = sol.system.parity * sol.system.m;
    double worst = 0.0;
    for (std::size_t i = half; i + half < r.size(); ++i) {
        const auto w = derivative_weights(r, i, i - half, width);
        double df = 0.0, dg = 0.0;
        for (std::size_t k = 0; k < width; ++k) {
            df += w[k] * sol.f[i - half + k];
            dg += w[k] * sol.g[i - half + k];
        }
        const double ri = r[i];
        const double a1 = nu / ri * sol.f[i];
        const double b1 = (E + e / ri + m) * sol.g[i];
        const double a2 = -nu / ri * sol.g[i];
        const double b2 = -(E + e / ri - m) * sol.f[i];
        const double s1 = std::abs(df) + std::abs(a1) + std::abs(b1);
        const double s2 = std::abs(dg) + std::abs(a2) + std::abs(b2);
        if (s1 > 0.0) worst = std::max(worst, std::abs(df + a1 + b1) / s1);
        if (s2 > 0.0) worst = std::max(worst, std::abs(dg + a2 + b2) / s2);
    }
    return worst;
}

RadialSolution normalize(const RadialSolution& sol) {
    const auto& r = sol.grid.r;
    double norm = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) {
        const double a = sol.f[i - 1] * sol.f[i - 1] + sol.g[i - 1] * sol.g[i - 1];
        const double b = sol.f[i] * sol.f[i] + sol.g[i] * sol.g[i];
        norm += 0.5 * (r[i] - r[i - 1]) * (a + b);
    }
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw ZeroNorm("normalize: the solution has zero or non-finite norm");
    }
    double sign = 1.0;
    for (double v : sol.f) {
        if (v != 0.0) {
            sign = v > 0.0 ? 1.0 : -1.0;
            break;
        }
    }
    const double scale = sign / std::sqrt(norm);
    RadialSolution out = sol;
    for (double& v : out.f) v *= scale;
    for (double& v : out.g) v *= scale;
    return out;
}

int count_sign_changes(const std::vector<double>& v, double rel_floor) {
    const double floor = rel_floor * max_abs(v);
    int changes = 0;
    int last = 0;
    for (double x : v) {
        if (std::abs(x) <= floor) continue;
        const int s = x > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

double relative_deviation(const RadialSolution& a, const RadialSolution& b, double r_lo,
                          double r_hi) {
    if (a.grid.size() != b.grid.size()) {
        throw InvalidParams("relative_deviation: solutions live on different grids");
    }
    auto component = [&](const std::vector<double>& u, const std::vector<double>& w) {
        double diff = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double r = a.grid.r[i];
            if (r < r_lo || r > r_hi) continue;
            diff = std::max(diff, std::abs(u[i] - w[i]));
            scale = std::max(scale, std::abs(u[i]));
        }
        return scale > 0.0 ? diff / scale : diff;
    };
    return std::max(component(a.f, b.f), component(a.g, b.g));
}

} // namespace diracheun
