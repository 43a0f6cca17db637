#pragma once

// Kummer 1F1(a; c; x) and the confluent Heun function HeunC(alpha, beta, gamma,
// delta, eta; z), real arguments only.
//
// Canonical confluent Heun equation used throughout:
//
//   H'' + (alpha + (1 + beta)/z + (1 + gamma)/(z - 1)) H'
//       + (P/z + Q/(z - 1)) H = 0,
//
//   P = (alpha*beta + alpha - beta*gamma - beta - gamma - 2*eta) / 2,
//   Q = (alpha + alpha*gamma + beta + beta*gamma + gamma + 2*delta + 2*eta) / 2.
//
// The evaluator returns the Frobenius solution regular at z = 0 with H(0) = 1.

#include <optional>
#include <vector>

namespace diracheun::specfun {

struct EvalOptions {
    double rel_tol = 1e-15;
    int max_terms = 10000;
    // Two consecutive HeunC coefficients below this fraction of the largest
    // earlier coefficient are taken as numerical termination of the series.
    double truncation_tol = 1e-12;
};

/// Throws InvalidParams unless rel_tol > 0 and max_terms >= 8.
void validate(const EvalOptions& opts);

struct KummerParams {
    double a = 0.0;
    double c = 1.0;
};

/// Throws InvalidParams when c is zero or a negative integer and the series
/// does not terminate (a = -n with n < |c|) before the pole is reached.
void validate(const KummerParams& params);

/// Degree of the terminating Kummer polynomial, if a is a non-positive integer.
std::optional<int> kummer_poly_degree(const KummerParams& params);

double kummer(const KummerParams& params, double x, const EvalOptions& opts = {});

/// d/dx 1F1(a; c; x) = (a/c) 1F1(a+1; c+1; x).
double kummer_derivative(const KummerParams& params, double x, const EvalOptions& opts = {});

/// d2/dx2 1F1(a; c; x) = a(a+1)/(c(c+1)) 1F1(a+2; c+2; x).
double kummer_second_derivative(const KummerParams& params, double x,
                                const EvalOptions& opts = {});

/// |x F'' + (c - x) F' - a F| divided by the largest of the three terms.
double kummer_ode_residual(const KummerParams& params, double x, const EvalOptions& opts = {});

struct HeunCParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double eta = 0.0;
};

/// Throws InvalidParams when beta is a negative integer (the regular branch
/// recurrence divides by (k + 1)(k + 1 + beta)).
void validate(const HeunCParams& params);

/// Residue coefficient P of the 1/z pole.
double heunc_p(const HeunCParams& params);
/// Residue coefficient Q of the 1/(z - 1) pole.
double heunc_q(const HeunCParams& params);

/// H'(0) = -P / (beta + 1).
double heunc_slope_at_origin(const HeunCParams& params);

/// Series coefficients c_0 .. c_{count-1} of the regular solution, c_0 = 1.
std::vector<double> heunc_coefficients(const HeunCParams& params, int count);

struct HeunCValue {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
    // Polynomial degree when the series terminated numerically, else empty.
    std::optional<int> terminated_degree;
    int terms_used = 0;
};

/// Evaluates H, H' and H'' together.
///
/// The series is a polynomial, and any finite z is accepted, when either
///  - the delta condition holds at some degree d >= 1 and the recurrence run
///    downward from c_{d+1} = 0 also satisfies its k = 0 equation (the
///    downward coefficients are then used), or
///  - two consecutive forward coefficients fall below truncation_tol times
///    the largest earlier one.
/// Otherwise |z| < 1 is required (OutsideDomain).
HeunCValue heunc_eval(const HeunCParams& params, double z, const EvalOptions& opts = {});

double heunc(const HeunCParams& params, double z, const EvalOptions& opts = {});
double heunc_derivative(const HeunCParams& params, double z, const EvalOptions& opts = {});
double heunc_second_derivative(const HeunCParams& params, double z,
                               const EvalOptions& opts = {});

/// Residual of the canonical equation at z divided by the magnitude of its
/// largest term.
double heunc_ode_residual(const HeunCParams& params, double z, const EvalOptions& opts = {});

/// The n >= 0 for which delta = -(n + (beta + gamma + 2)/2) alpha holds within
/// tol (absolute, on n), else empty. Only this one of the two polynomial
/// conditions is checked. Requires alpha != 0.
std::optional<int> heunc_poly_degree(const HeunCParams& params, double tol);

/// Coefficients through order degree + extra, and whether those beyond
/// `degree` vanish relative to the largest of c_0 .. c_degree.
struct TruncationAudit {
    std::vector<double> coefficients;
    int degree = 0;
    double tail_ratio = 0.0; // max |c_k|, k > degree, over max |c_k|, k <= degree
    bool terminates = false;
};

TruncationAudit heunc_truncation_audit(const HeunCParams& params, int degree, int extra = 5,
                                       double threshold = 1e-12);

} // namespace diracheun::specfun
