#include "diracheun/model.hpp"

#include <cmath>
#include <string>

#include "diracheun/errors.hpp"

namespace diracheun {

namespace {

// sqrt(m^2 - E^2) without cancellation near E = m.
double gap(double m, double E) { return std::sqrt((m - E) * (m + E)); }

void require_bound_energy(const SystemParams& params, double E, const char* who) {
    if (!(E > 0.0 && E < params.m)) {
        throw InvalidParams(std::string(who) + ": energy must satisfy 0 < E < m");
    }
    if (params.m - E < 1e-12 * params.m) {
        throw InvalidParams(std::string(who) + ": E is within 1e-12 m of m");
    }
}

} // namespace

std::string_view to_string(Route route) {
    switch (route) {
    case Route::Standard: return "standard";
    case Route::Mixed1: return "mixed1";
    case Route::Mixed2: return "mixed2";
    case Route::Heun: return "heun";
    case Route::Oracle: return "oracle";
    case Route::ClosedForm: return "closed_form";
    }
    return "unknown";
}

std::optional<Route> route_from_string(std::string_view name) {
    for (Route r : {Route::Standard, Route::Mixed1, Route::Mixed2, Route::Heun, Route::Oracle,
                    Route::ClosedForm}) {
        if (name == to_string(r)) return r;
    }
    return std::nullopt;
}

std::string_view to_string(MixingCaseId id) {
    switch (id) {
    case MixingCaseId::One: return "1";
    case MixingCaseId::OnePrime: return "1'";
    case MixingCaseId::Two: return "2";
    case MixingCaseId::TwoPrime: return "2'";
    }
    return "?";
}

double SystemParams::frobenius_exponent() const {
    const double n = nu;
    return std::sqrt((n - e) * (n + e));
}

void validate(const SystemParams& params) {
    if (!(params.m > 0.0) || !std::isfinite(params.m))
        throw InvalidParams("mass must be positive and finite");
    if (params.nu < 1) throw InvalidParams("nu = j + 1/2 must be a positive integer");
    if (params.parity != 1 && params.parity != -1)
        throw InvalidParams("parity must be +1 or -1");
    if (!(params.e >= 0.0) || !std::isfinite(params.e))
        throw InvalidParams("coupling must be non-negative and finite");
    if (params.e == static_cast<double>(params.nu))
        throw InvalidParams("critical coupling e = nu is not supported");
    if (params.e > static_cast<double>(params.nu))
        throw InvalidParams("supercritical coupling: e must be below nu = j + 1/2");
}

MixingCase mixing_case(MixingCaseId id, const SystemParams& params, double E) {
    validate(params);
    const double nu = params.nu;
    const double e = params.e;
    const double m = params.m;
    MixingCase mc;
    mc.id = id;
    switch (id) {
    case MixingCaseId::One:
    case MixingCaseId::OnePrime: {
        const double s = params.frobenius_exponent();
        mc.sinA = (id == MixingCaseId::One ? e : -e) / nu;
        mc.cosA = s / nu;
        const double plus = std::sqrt((nu + s) / (2.0 * nu));
        // (nu - s) = e^2 / (nu + s) avoids cancellation at weak coupling.
        const double minus = std::sqrt(e * e / ((nu + s) * 2.0 * nu));
        mc.cos_half = id == MixingCaseId::One ? plus : minus;
        mc.sin_half = id == MixingCaseId::One ? minus : plus;
        if (id == MixingCaseId::One) {
            const double denom = E + m * mc.cosA;
            if (denom == 0.0) throw DegenerateCase("case 1: E + m cosA vanishes");
            mc.singular_point = -2.0 * e / denom;
        }
        break;
    }
    case MixingCaseId::Two:
    case MixingCaseId::TwoPrime: {
        if (!(std::abs(E) < m)) throw InvalidParams("case 2 requires |E| < m");
        mc.cosA = (id == MixingCaseId::Two ? E : -E) / m;
        mc.sinA = gap(m, E) / m;
        const double up = std::sqrt((m + E) / (2.0 * m));
        const double down = std::sqrt((m - E) / (2.0 * m));
        mc.cos_half = id == MixingCaseId::Two ? up : down;
        mc.sin_half = id == MixingCaseId::Two ? down : up;
        if (id == MixingCaseId::Two) {
            if (E == 0.0) throw DegenerateCase("case 2: singular point D needs E != 0");
            mc.singular_point = -(e + nu * mc.sinA) / (2.0 * E);
        }
        break;
    }
    }
    return mc;
}

std::pair<double, double> singular_point_D_consistency(const SystemParams& params, double E) {
    if (E == 0.0) throw DegenerateCase("singular point D is undefined at E = 0");
    const auto mc = mixing_case(MixingCaseId::Two, params, E);
    const double num = -(params.e + params.nu * mc.sinA);
    return {num / (2.0 * params.m * mc.cosA), num / (2.0 * E)};
}

namespace {

specfun::HeunCParams mixed_map(const SystemParams& params, double E, const MixingCase& mc,
                               ExponentBranch branch) {
    const double S = *mc.singular_point;
    const double lambda = gap(params.m, E);
    const double a = (branch.regular_at_origin ? 1.0 : -1.0) * params.frobenius_exponent();
    const double b = (branch.decaying ? -1.0 : 1.0) * lambda * S;
    const double eES = 2.0 * params.e * E * S;
    return {2.0 * b, 2.0 * a, -2.0, eES,
            1.0 + params.m * S * mc.sinA - eES - params.nu * mc.cosA};
}

} // namespace

specfun::HeunCParams heun_params_case1(const SystemParams& params, double E,
                                       ExponentBranch branch) {
    validate(params);
    require_bound_energy(params, E, "heun_params_case1");
    return mixed_map(params, E, mixing_case(MixingCaseId::One, params, E), branch);
}

specfun::HeunCParams heun_params_case2(const SystemParams& params, double E,
                                       ExponentBranch branch) {
    validate(params);
    require_bound_energy(params, E, "heun_params_case2");
    return mixed_map(params, E, mixing_case(MixingCaseId::Two, params, E), branch);
}

specfun::HeunCParams heun_params_full(const SystemParams& params, double E,
                                      ExponentBranch branch) {
    validate(params);
    require_bound_energy(params, E, "heun_params_full");
    const double m = params.m;
    const double e = params.e;
    const double C = (branch.decaying ? 1.0 : -1.0) * e * std::sqrt((m - E) / (m + E));
    const double A = (branch.regular_at_origin ? 1.0 : -1.0) * params.frobenius_exponent();
    const double w = 2.0 * E * e * e / (E + m);
    return {2.0 * C, 2.0 * A, -2.0, -w, 1.0 - params.signed_nu() + w};
}

double energy_for_principal(double N, const SystemParams& params) {
    const double r = params.e / N;
    return params.m / std::sqrt(1.0 + r * r);
}

EnergyLevel energy_closed_form(int n, const SystemParams& params) {
    validate(params);
    if (n < 0) throw InvalidParams("radial quantum number must be non-negative");
    EnergyLevel level;
    level.n = n;
    level.nu = params.nu;
    level.parity = params.parity;
    level.E = energy_for_principal(n + params.frobenius_exponent(), params);
    level.E_over_m = level.E / params.m;
    level.route = Route::ClosedForm;
    return level;
}

double binding_fraction(int n, const SystemParams& params) {
    validate(params);
    if (n < 0) throw InvalidParams("radial quantum number must be non-negative");
    const double N = n + params.frobenius_exponent();
    const double x = params.e * params.e / (N * N);
    const double root = std::sqrt(1.0 + x);
    // 1 - 1/sqrt(1 + x) = x / (sqrt(1 + x) (1 + sqrt(1 + x))).
    return x / (root * (1.0 + root));
}

bool has_bound_state(const SystemParams& params, int n) {
    return n >= 1 || (n == 0 && params.parity == -1);
}

StandardVars standard_vars(const SystemParams& params, double E) {
    validate(params);
    require_bound_energy(params, E, "standard_vars");
    StandardVars v;
    const double m = params.m;
    const double e = params.e;
    v.lambda = gap(m, E);
    v.mu = e * m / v.lambda;
    v.eps = e * E / v.lambda;
    // eps^2 - mu^2 as (eps - mu)(eps + mu) keeps full precision as E -> m.
    const double diff = (v.eps - v.mu) * (v.eps + v.mu);
    const double nu = params.nu;
    v.A_frob = std::sqrt(diff + nu * nu);
    return v;
}

StandardVars level_vars(int n, const SystemParams& params) {
    validate(params);
    if (n < 0) throw InvalidParams("level_vars: n must be non-negative");
    if (!(params.e > 0.0)) throw InvalidParams("level_vars: coupling must be positive");
    const double s = params.frobenius_exponent();
    const double N = n + s;
    StandardVars v;
    v.mu = std::hypot(N, params.e);
    v.lambda = params.m * params.e / v.mu;
    v.eps = N;
    v.A_frob = s;
    return v;
}

namespace {

double polynomial_residual(const specfun::HeunCParams& h, int n) {
    return h.delta + (n + 0.5 * (h.beta + h.gamma + 2.0)) * h.alpha;
}

double route_residual(const SystemParams& params, double E, int n, Route route) {
    switch (route) {
    case Route::Standard: {
        const auto v = standard_vars(params, E);
        return v.eps - v.A_frob - n;
    }
    case Route::Mixed1: return polynomial_residual(heun_params_case1(params, E), n);
    case Route::Mixed2: return polynomial_residual(heun_params_case2(params, E), n);
    case Route::Heun: return polynomial_residual(heun_params_full(params, E), n);
    default: break;
    }
    throw InvalidParams("route has no analytic quantization condition");
}

} // namespace

std::map<Route, double> quantization_residuals(const SystemParams& params, double E, int n) {
    if (n < 0) throw InvalidParams("radial quantum number must be non-negative");
    std::map<Route, double> out;
    for (Route r : {Route::Standard, Route::Mixed1, Route::Mixed2, Route::Heun}) {
        out[r] = route_residual(params, E, n, r);
    }
    return out;
}

EnergyLevel quantization_root(const SystemParams& params, int n, Route route) {
    validate(params);
    if (n < 0) throw InvalidParams("radial quantum number must be non-negative");
    const double m = params.m;
    double lo = 0.01 * m;
    double hi = m * (1.0 - 1e-9);
    double f_lo = route_residual(params, lo, n, route);
    const double f_hi = route_residual(params, hi, n, route);
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw NoBracket("quantization_root: no sign change of the " +
                        std::string(to_string(route)) + " condition on the energy interval");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * m; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = route_residual(params, mid, n, route);
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (std::signbit(f_mid) == std::signbit(f_lo)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    EnergyLevel level;
    level.n = n;
    level.nu = params.nu;
    level.parity = params.parity;
    level.E = 0.5 * (lo + hi);
    level.E_over_m = level.E / m;
    level.route = route;
    return level;
}

} // namespace diracheun
