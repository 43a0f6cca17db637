#pragma once

// Reference values computed independently of the library: closed forms from
// the C++ standard library, brute-force long double sums, and direct ODE
// integration with Boost.Odeint.

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "diracheun/specfun.hpp"

namespace oracle_ref {

/// 1F1(a; c; x) by plain summation in long double, 4000 terms or until the
/// term is negligible. Good to ~1e-13 relative for |x| <= 20 away from
/// heavy cancellation.
inline double kummer_sum(double a, double c, double x) {
    long double term = 1.0L, sum = 1.0L;
    for (int k = 0; k < 4000; ++k) {
        term *= (static_cast<long double>(a) + k) / ((static_cast<long double>(c) + k) * (k + 1)) * x;
        sum += term;
        if (term == 0.0L || std::fabs(term) < 1e-22L * std::fabs(sum)) break;
    }
    return static_cast<double>(sum);
}

/// M(-n; alpha + 1; x) from the associated Laguerre polynomial,
/// L_n^alpha(x) = binom(n + alpha, n) M(-n; alpha + 1; x).
inline double kummer_from_laguerre(unsigned n, unsigned alpha, double x) {
    const double binom = std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) -
                                  std::lgamma(alpha + 1.0));
    return std::assoc_laguerre(n, alpha, x) / binom;
}

/// M(1/2; 3/2; -x^2) = sqrt(pi) erf(x) / (2x).
inline double kummer_half_erf(double x) {
    return std::sqrt(std::numbers::pi) * std::erf(x) / (2.0 * x);
}

/// HeunC(z) by integrating the canonical equation from z0 = sign(z) 1e-7,
/// started from H = 1 + H'(0) z0, H' = H'(0). The singular branch at the
/// origin behaves like z^-beta and is not excited for beta > -1.
inline std::array<double, 2> heunc_by_integration(const diracheun::specfun::HeunCParams& p,
                                                  double z) {
    namespace odeint = boost::numeric::odeint;
    using State = std::array<double, 2>;
    const double P = (p.alpha * p.beta + p.alpha - p.beta * p.gamma - p.beta - p.gamma -
                      2.0 * p.eta) / 2.0;
    const double Q = (p.alpha + p.alpha * p.gamma + p.beta + p.beta * p.gamma + p.gamma +
                      2.0 * p.delta + 2.0 * p.eta) / 2.0;
    const double slope = -P / (p.beta + 1.0);
    const double sigma = z < 0.0 ? -1.0 : 1.0;
    const double t0 = 1e-7;
    State y{1.0 + slope * sigma * t0, slope};
    auto rhs = [&](const State& s, State& ds, double t) {
        const double zz = sigma * t;
        const double pz = p.alpha + (1.0 + p.beta) / zz + (1.0 + p.gamma) / (zz - 1.0);
        const double qz = P / zz + Q / (zz - 1.0);
        ds[0] = sigma * s[1];
        ds[1] = sigma * (-pz * s[1] - qz * s[0]);
    };
    auto stepper = odeint::make_controlled(1e-14, 1e-14, odeint::runge_kutta_fehlberg78<State>());
    odeint::integrate_adaptive(stepper, rhs, y, t0, std::fabs(z), 1e-6);
    return y;
}

} // namespace oracle_ref
