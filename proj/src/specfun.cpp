#include "diracheun/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "diracheun/errors.hpp"

namespace diracheun::specfun {

namespace {

bool is_nonpositive_integer(double v) { return v <= 0.0 && v == std::round(v); }

// Plain Maclaurin sum; parameters already validated.
double kummer_series(double a, double c, double x, const EvalOptions& opts) {
    double term = 1.0;
    double sum = 1.0;
    if (auto degree = kummer_poly_degree({a, c})) {
        for (int k = 0; k < *degree; ++k) {
            term *= (a + k) / (c + k) * x / (k + 1);
            sum += term;
        }
        return sum;
    }
    int small_run = 0;
    for (int k = 0; k < opts.max_terms; ++k) {
        term *= (a + k) / (c + k) * x / (k + 1);
        sum += term;
        if (std::abs(term) < opts.rel_tol * std::abs(sum)) {
            if (++small_run == 2) return sum;
        } else {
            small_run = 0;
        }
    }
    throw NoConvergence("kummer: series did not converge within " +
                        std::to_string(opts.max_terms) + " terms");
}

} // namespace

void validate(const EvalOptions& opts) {
    if (!(opts.rel_tol > 0.0)) throw InvalidParams("EvalOptions: rel_tol must be positive");
    if (opts.max_terms < 8) throw InvalidParams("EvalOptions: max_terms must be at least 8");
    if (!(opts.truncation_tol > 0.0))
        throw InvalidParams("EvalOptions: truncation_tol must be positive");
}

std::optional<int> kummer_poly_degree(const KummerParams& params) {
    if (is_nonpositive_integer(params.a)) return static_cast<int>(-params.a);
    return std::nullopt;
}

void validate(const KummerParams& params) {
    if (!std::isfinite(params.a) || !std::isfinite(params.c))
        throw InvalidParams("kummer: parameters must be finite");
    if (!is_nonpositive_integer(params.c)) return;
    const auto pole = static_cast<int>(-params.c);
    const auto degree = kummer_poly_degree(params);
    if (!degree || *degree >= pole) {
        throw InvalidParams("kummer: c = " + std::to_string(params.c) +
                            " is a pole of the series coefficients");
    }
}

double kummer(const KummerParams& params, double x, const EvalOptions& opts) {
    validate(opts);
    validate(params);
    if (!std::isfinite(x)) throw InvalidParams("kummer: argument must be finite");
    const double a = params.a;
    const double c = params.c;
    // For negative x the alternating series cancels badly; Kummer's
    // transformation M(a,c,x) = e^x M(c-a,c,-x) gives a same-sign sum.
    if (x < 0.0 && !kummer_poly_degree(params)) {
        return std::exp(x) * kummer_series(c - a, c, -x, opts);
    }
    return kummer_series(a, c, x, opts);
}

double kummer_derivative(const KummerParams& params, double x, const EvalOptions& opts) {
    validate(params);
    if (params.a == 0.0) return 0.0;
    return params.a / params.c * kummer({params.a + 1.0, params.c + 1.0}, x, opts);
}

double kummer_second_derivative(const KummerParams& params, double x, const EvalOptions& opts) {
    validate(params);
    if (params.a == 0.0 || params.a == -1.0) return 0.0;
    const double scale = params.a * (params.a + 1.0) / (params.c * (params.c + 1.0));
    return scale * kummer({params.a + 2.0, params.c + 2.0}, x, opts);
}

double kummer_ode_residual(const KummerParams& params, double x, const EvalOptions& opts) {
    const double f = kummer(params, x, opts);
    const double d1 = kummer_derivative(params, x, opts);
    const double d2 = kummer_second_derivative(params, x, opts);
    const double t1 = x * d2;
    const double t2 = (params.c - x) * d1;
    const double t3 = -params.a * f;
    const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
    if (scale == 0.0) return 0.0;
    return std::abs(t1 + t2 + t3) / scale;
}

void validate(const HeunCParams& params) {
    for (double v : {params.alpha, params.beta, params.gamma, params.delta, params.eta}) {
        if (!std::isfinite(v)) throw InvalidParams("heunc: parameters must be finite");
    }
    if (params.beta <= -1.0 && params.beta == std::round(params.beta)) {
        throw InvalidParams("heunc: beta = " + std::to_string(params.beta) +
                            " leaves the regular branch undefined");
    }
}

double heunc_p(const HeunCParams& p) {
    return 0.5 * (p.alpha * p.beta + p.alpha - p.beta * p.gamma - p.beta - p.gamma - 2.0 * p.eta);
}

double heunc_q(const HeunCParams& p) {
    return 0.5 * (p.alpha + p.alpha * p.gamma + p.beta + p.beta * p.gamma + p.gamma +
                  2.0 * p.delta + 2.0 * p.eta);
}

double heunc_slope_at_origin(const HeunCParams& params) {
    validate(params);
    return -heunc_p(params) / (params.beta + 1.0);
}

namespace {

// Substituting sum c_k z^k into z(z-1) times the canonical equation gives
//   (k+1)(k+1+beta) c_{k+1} = [k(k-1) + k(2+beta+gamma-alpha) - P] c_k
//                             + [alpha(k-1) + P + Q] c_{k-1}.
class HeunRecurrence {
public:
    explicit HeunRecurrence(const HeunCParams& params)
        : p_(params), P_(heunc_p(params)), PQ_(heunc_p(params) + heunc_q(params)) {}

    // Returns c_{k+1} from c_k and c_{k-1}.
    double next(int k, double ck, double ckm1) const {
        return (diag(k) * ck + lower(k) * ckm1) / lead(k);
    }

    double diag(int k) const {
        const double kk = k;
        return kk * (kk - 1.0) + kk * (2.0 + p_.beta + p_.gamma - p_.alpha) - P_;
    }
    double lower(int k) const { return p_.alpha * (k - 1.0) + PQ_; }
    double lead(int k) const { return (k + 1.0) * (k + 1.0 + p_.beta); }

private:
    HeunCParams p_;
    double P_;
    double PQ_;
};

// Polynomial coefficients by the recurrence run downward from c_{d+1} = 0,
// c_d = 1, renormalized to c_0 = 1. Forward evaluation of a terminating series
// cancels badly in its top coefficients; downward the sequence grows and is
// stable. The equations k = 1 .. d + 1 hold by construction (k = d + 1 is the
// delta condition); the result is accepted only if the k = 0 equation, i.e.
// the accessory condition, holds as well.
std::optional<std::vector<double>> downward_polynomial(const HeunCParams& params,
                                                       const HeunRecurrence& rec, int degree) {
    if (degree < 1) return std::nullopt;
    std::vector<double> c(static_cast<std::size_t>(degree) + 2, 0.0);
    c[static_cast<std::size_t>(degree)] = 1.0;
    for (int k = degree; k >= 1; --k) {
        const double low = rec.lower(k);
        if (low == 0.0) return std::nullopt;
        const auto uk = static_cast<std::size_t>(k);
        c[uk - 1] = (rec.lead(k) * c[uk + 1] - rec.diag(k) * c[uk]) / low;
        if (!std::isfinite(c[uk - 1])) return std::nullopt;
    }
    if (c[0] == 0.0) return std::nullopt;
    const double c0 = c[0];
    for (double& v : c) v /= c0;
    c.pop_back();
    const double lhs = (1.0 + params.beta) * c[1];
    const double rhs = rec.diag(0);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    if (std::abs(lhs - rhs) > 1e-8 * scale) return std::nullopt;
    return c;
}

// Degree n for which the delta condition holds to rounding, if any.
std::optional<int> delta_condition_degree(const HeunCParams& params, int max_degree) {
    if (params.alpha == 0.0) return std::nullopt;
    const double shift = 0.5 * (params.beta + params.gamma + 2.0);
    const double n = std::round(-params.delta / params.alpha - shift);
    if (!(n >= 1.0) || n > max_degree) return std::nullopt;
    const double lhs = params.delta + (n + shift) * params.alpha;
    const double scale = std::max(std::abs(params.delta), std::abs((n + shift) * params.alpha));
    if (std::abs(lhs) > 1e-10 * scale) return std::nullopt;
    return static_cast<int>(n);
}

} // namespace

std::vector<double> heunc_coefficients(const HeunCParams& params, int count) {
    validate(params);
    std::vector<double> c;
    if (count <= 0) return c;
    c.reserve(static_cast<std::size_t>(count));
    c.push_back(1.0);
    HeunRecurrence rec(params);
    double prev = 0.0;
    for (int k = 0; static_cast<int>(c.size()) < count; ++k) {
        const double cur = c.back();
        c.push_back(rec.next(k, cur, prev));
        prev = cur;
    }
    return c;
}

HeunCValue heunc_eval(const HeunCParams& params, double z, const EvalOptions& opts) {
    validate(opts);
    validate(params);
    if (!std::isfinite(z)) throw InvalidParams("heunc: argument must be finite");

    const HeunRecurrence rec(params);
    HeunCValue out;

    // Pass 1: coefficients until numerical termination or max_terms.
    std::vector<double> coeffs{1.0};
    double max_prior = 1.0;
    std::optional<int> degree;
    if (auto d = delta_condition_degree(params, opts.max_terms - 2)) {
        if (auto poly = downward_polynomial(params, rec, *d)) {
            coeffs = std::move(*poly);
            degree = d;
        }
    }
    if (!degree) {
        double prev = 0.0;
        for (int k = 0; k + 1 < opts.max_terms; ++k) {
            const double next = rec.next(k, coeffs.back(), prev);
            prev = coeffs.back();
            coeffs.push_back(next);
            const auto last = coeffs.size() - 1;
            if (last >= 2) {
                const double limit = opts.truncation_tol * max_prior;
                if (std::abs(coeffs[last]) < limit && std::abs(coeffs[last - 1]) < limit) {
                    degree = static_cast<int>(last) - 2;
                    break;
                }
                max_prior = std::max(max_prior, std::abs(coeffs[last - 1]));
            }
            // Inside the unit disk the sum below decides when to stop; only
            // a handful of extra coefficients is needed to spot termination.
            if (std::abs(z) < 1.0 && last >= 64) break;
        }
    }

    if (degree) {
        coeffs.resize(static_cast<std::size_t>(*degree) + 1);
        double p0 = 1.0, p1 = 0.0, p2 = 0.0;
        for (int k = 0; k <= *degree; ++k) {
            const double ck = coeffs[static_cast<std::size_t>(k)];
            out.value += ck * p0;
            out.first += k * ck * p1;
            out.second += k * (k - 1.0) * ck * p2;
            p2 = p1;
            p1 = p0;
            p0 *= z;
        }
        out.terminated_degree = degree;
        out.terms_used = *degree + 1;
        return out;
    }

    if (!(std::abs(z) < 1.0)) {
        throw OutsideDomain("heunc: non-terminating series requires |z| < 1 (z = " +
                            std::to_string(z) + ")");
    }

    // Pass 2: convergent sum inside the unit disk, extending the recurrence.
    double p0 = 1.0, p1 = 0.0, p2 = 0.0;
    int small_run = 0;
    double prev = coeffs.size() >= 2 ? coeffs[coeffs.size() - 2] : 0.0;
    for (int k = 0; k < opts.max_terms; ++k) {
        if (static_cast<std::size_t>(k) >= coeffs.size()) {
            const double next = rec.next(k - 1, coeffs.back(), prev);
            prev = coeffs.back();
            coeffs.push_back(next);
        }
        const double ck = coeffs[static_cast<std::size_t>(k)];
        const double t0 = ck * p0;
        const double t1 = k * ck * p1;
        const double t2 = k * (k - 1.0) * ck * p2;
        out.value += t0;
        out.first += t1;
        out.second += t2;
        p2 = p1;
        p1 = p0;
        p0 *= z;
        const bool small = std::abs(t0) <= opts.rel_tol * std::abs(out.value) &&
                           std::abs(t1) <= opts.rel_tol * std::abs(out.first) &&
                           std::abs(t2) <= opts.rel_tol * std::abs(out.second);
        if (k >= 2 && small) {
            if (++small_run == 2) {
                out.terms_used = k + 1;
                return out;
            }
        } else {
            small_run = 0;
        }
    }
    throw NoConvergence("heunc: series did not converge within " +
                        std::to_string(opts.max_terms) + " terms");
}

double heunc(const HeunCParams& params, double z, const EvalOptions& opts) {
    return heunc_eval(params, z, opts).value;
}

double heunc_derivative(const HeunCParams& params, double z, const EvalOptions& opts) {
    return heunc_eval(params, z, opts).first;
}

double heunc_second_derivative(const HeunCParams& params, double z, const EvalOptions& opts) {
    return heunc_eval(params, z, opts).second;
}

double heunc_ode_residual(const HeunCParams& params, double z, const EvalOptions& opts) {
    if (z == 0.0 || z == 1.0) throw OutsideDomain("heunc_ode_residual: z is a singular point");
    const auto v = heunc_eval(params, z, opts);
    const double terms[] = {
        v.second,
        params.alpha * v.first,
        (1.0 + params.beta) / z * v.first,
        (1.0 + params.gamma) / (z - 1.0) * v.first,
        heunc_p(params) / z * v.value,
        heunc_q(params) / (z - 1.0) * v.value,
    };
    double sum = 0.0;
    double scale = 0.0;
    for (double t : terms) {
        sum += t;
        scale = std::max(scale, std::abs(t));
    }
    if (scale == 0.0) return 0.0;
    return std::abs(sum) / scale;
}

std::optional<int> heunc_poly_degree(const HeunCParams& params, double tol) {
    if (params.alpha == 0.0) throw InvalidParams("heunc_poly_degree: alpha must be nonzero");
    const double shift = 0.5 * (params.beta + params.gamma + 2.0);
    const double n_real = -params.delta / params.alpha - shift;
    const double n = std::round(n_real);
    if (n < 0.0) return std::nullopt;
    const double lhs = params.delta + (n + shift) * params.alpha;
    const double scale =
        std::max({1.0, std::abs(params.delta), std::abs((n + shift) * params.alpha)});
    if (std::abs(lhs) > tol * scale) return std::nullopt;
    return static_cast<int>(n);
}

TruncationAudit heunc_truncation_audit(const HeunCParams& params, int degree, int extra,
                                       double threshold) {
    if (degree < 0 || extra < 1) throw InvalidParams("heunc_truncation_audit: bad orders");
    TruncationAudit audit;
    audit.degree = degree;
    audit.coefficients = heunc_coefficients(params, degree + extra + 1);
    double head = 0.0;
    double tail = 0.0;
    for (std::size_t k = 0; k < audit.coefficients.size(); ++k) {
        const double mag = std::abs(audit.coefficients[k]);
        if (static_cast<int>(k) <= degree) {
            head = std::max(head, mag);
        } else {
            tail = std::max(tail, mag);
        }
    }
    audit.tail_ratio = tail / head;
    audit.terminates = audit.tail_ratio < threshold;
    return audit;
}

} // namespace diracheun::specfun
