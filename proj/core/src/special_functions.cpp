#include "colecole/special_functions.hpp"
#include "colecole/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <quadmath.h>

namespace colecole {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// 15-term Lanczos coefficients, g = 607/128 (Godfrey's table).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

// Lanczos log Gamma for x > 0.
double lanczos_log_gamma(double x) {
    double s = kLanczos[0];
    for (int k = 1; k < 15; ++k) s += kLanczos[k] / (x + k - 1.0);
    const double t = x + kLanczosG - 0.5;
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(s);
}

bool is_nonpositive_integer(double x) {
    return x <= 0.0 && x == std::floor(x);
}

struct EvalResult {
    double value = 0.0;
    double err = std::numeric_limits<double>::infinity();
    bool ok = false;
};

template <typename Real> struct real_ops;

template <> struct real_ops<double> {
    static constexpr double eps = 2.22e-16;
    static double log_fn(double a) { return std::log(a); }
    static double exp_fn(double a) { return std::exp(a); }
    static double lgamma_fn(double a) { return ::lgamma(a); }
};
template <> struct real_ops<long double> {
    static constexpr double eps = 1.09e-19;
    static long double log_fn(long double a) { return logl(a); }
    static long double exp_fn(long double a) { return expl(a); }
    static long double lgamma_fn(long double a) { return lgammal(a); }
};
template <> struct real_ops<__float128> {
    static constexpr double eps = 1.93e-34;
    static __float128 log_fn(__float128 a) { return logq(a); }
    static __float128 exp_fn(__float128 a) { return expq(a); }
    static __float128 lgamma_fn(__float128 a) { return lgammaq(a); }
};

// Compensated Taylor sum of E_{alpha,beta}(z).  Terms are formed in log space
// (k log|z| - lgamma(k alpha + beta) is moderate even when z^k overflows).
// Self-validating: the error estimate combines rounding of the accumulated
// |term| sum (cancellation) with the last truncated term.
template <typename Real>
EvalResult taylor_series(double alpha, double beta, double z, double tol) {
    using ops = real_ops<Real>;
    const Real log_az = (z == 0.0) ? Real(0) : ops::log_fn(static_cast<Real>(std::fabs(z)));
    const bool negative = z < 0.0;
    Real sum = 0, comp = 0, sum_abs = 0;
    double last_abs = std::numeric_limits<double>::infinity();
    const int k_max = 200000;
    for (int k = 0; k < k_max; ++k) {
        const Real a = static_cast<Real>(alpha) * k + static_cast<Real>(beta);
        Real term;
        if (k == 0) {
            term = ops::exp_fn(-ops::lgamma_fn(a));
        } else if (z == 0.0) {
            term = 0;
        } else {
            const Real lt = static_cast<Real>(k) * log_az - ops::lgamma_fn(a);
            if (static_cast<double>(lt) > 700.0) return {}; // value overflows double
            term = ops::exp_fn(lt);
            if (negative && (k % 2 == 1)) term = -term;
        }
        const Real y = term - comp;
        const Real t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        sum_abs += term < 0 ? -term : term;
        const double ta = std::fabs(static_cast<double>(term));
        const double scale = std::max(1.0, std::fabs(static_cast<double>(sum)));
        if (k > 2 && ta < 1e-2 * tol * scale && last_abs < 1e-2 * tol * scale) {
            EvalResult r;
            r.value = static_cast<double>(sum);
            r.err = 4.0 * ops::eps * static_cast<double>(sum_abs) + ta;
            r.ok = r.err <= tol * std::max(1.0, std::fabs(r.value));
            return r;
        }
        last_abs = ta;
        if (static_cast<double>(sum_abs) > 1e290) break; // hopeless cancellation
    }
    return {};
}

// Real-axis asymptotic expansion for z << 0:
//   E_{alpha,beta}(z) ~ -sum_{k>=1} z^{-k} / Gamma(beta - k alpha).
// The term magnitudes oscillate through the sin factor of the reflection
// formula, so optimal truncation tracks the smooth envelope
//   env_k = |z|^{-k} / |Gamma|_envelope,  unimodal in k,
// and stops at its minimum.  The exponentially small remainder matters only
// near alpha = 1 (Stokes line), bounded by ~exp(z).
EvalResult asymptotic_series(double alpha, double beta, double z, double tol) {
    if (z >= -1.5) return {};
    const double log_az = std::log(-z);
    double sum = 0.0;
    double prev_env = std::numeric_limits<double>::infinity();
    double trunc = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 2000; ++k) {
        const double arg = beta - k * alpha; // Gamma argument
        double env;                          // smooth bound on |term|
        if (arg > 0.5) {
            env = std::exp(-k * log_az - lanczos_log_gamma(arg));
        } else {
            // |1/Gamma(arg)| <= Gamma(1-arg)/pi  (reflection, |sin| <= 1)
            env = std::exp(-k * log_az + lanczos_log_gamma(1.0 - arg)) / kPi;
        }
        if (env >= prev_env) { trunc = prev_env; break; } // past the envelope minimum
        prev_env = env;
        const double term = -std::pow(z, -static_cast<double>(k)) * reciprocal_gamma(arg);
        sum += term;
        if (env < 1e-3 * tol * std::max(1.0, std::fabs(sum))) { trunc = env; break; }
    }
    if (!std::isfinite(trunc)) trunc = prev_env;
    double exp_rem = 0.0;
    if (alpha > 0.98)
        exp_rem = std::exp(z) * std::max(1.0, std::pow(std::fabs(z), 1.0 - beta));
    EvalResult r;
    r.value = sum;
    r.err = 2.0 * trunc + exp_rem + 4e-16 * std::fabs(sum);
    r.ok = r.err <= tol * std::max(1.0, std::fabs(sum));
    return r;
}

} // namespace

double log_gamma(double x, int* sign_out) {
    if (!std::isfinite(x)) throw domain_error("log_gamma: non-finite argument");
    if (is_nonpositive_integer(x))
        throw domain_error("log_gamma: pole at non-positive integer");
    if (x > 0.0) {
        if (sign_out) *sign_out = 1;
        return lanczos_log_gamma(x);
    }
    // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double s = std::sin(kPi * x);
    if (sign_out) *sign_out = (s > 0.0) ? 1 : -1;
    return std::log(kPi / std::fabs(s)) - lanczos_log_gamma(1.0 - x);
}

double gamma_fn(double x) {
    int sign = 1;
    const double lg = log_gamma(x, &sign);
    if (lg > 709.0) return sign > 0 ? std::numeric_limits<double>::infinity()
                                    : -std::numeric_limits<double>::infinity();
    return sign * std::exp(lg);
}

double reciprocal_gamma(double x) {
    if (!std::isfinite(x)) throw domain_error("reciprocal_gamma: non-finite argument");
    if (is_nonpositive_integer(x)) return 0.0;
    if (x > 0.0) {
        const double lg = lanczos_log_gamma(x);
        if (lg > 709.0) return 0.0;
        return std::exp(-lg);
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi, entire in x
    const double s = std::sin(kPi * x);
    const double lg1mx = lanczos_log_gamma(1.0 - x);
    const double v = lg1mx + std::log(std::fabs(s) / kPi);
    if (v > 709.0)
        return (s >= 0 ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
    return (s >= 0 ? 1.0 : -1.0) * std::exp(v);
}

double mittag_leffler(const MLIndex& index, double z, double tol) {
    return mittag_leffler(index.alpha, index.beta, z, tol);
}

double mittag_leffler(double alpha, double beta, double z, double tol) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw domain_error("mittag_leffler: require alpha > 0 and beta > 0");
    if (!std::isfinite(z))
        throw domain_error("mittag_leffler: non-finite argument");
    if (alpha == 1.0 && beta == 1.0) return std::exp(z);

    EvalResult r = taylor_series<double>(alpha, beta, z, tol);
    if (r.ok) return r.value;

    if (z < 0.0) {
        const EvalResult a = asymptotic_series(alpha, beta, z, tol);
        if (a.ok) return a.value;
        r = taylor_series<long double>(alpha, beta, z, tol);
        if (r.ok) return r.value;
        const EvalResult q = taylor_series<__float128>(alpha, beta, z, tol);
        if (q.ok) return q.value;
        std::ostringstream os;
        os << "mittag_leffler: no evaluation path reached tol=" << tol
           << " at alpha=" << alpha << " beta=" << beta << " z=" << z
           << " (asymptotic err " << a.err << ", extended-series err " << q.err << ")";
        throw nonconvergence_error(os.str());
    }
    // z >= 0: positive-term series; retry in extended precision, else overflow
    r = taylor_series<long double>(alpha, beta, z, tol);
    if (r.ok) return r.value;
    const EvalResult q = taylor_series<__float128>(alpha, beta, z, tol);
    if (q.ok) return q.value;
    std::ostringstream os;
    os << "mittag_leffler: series overflow/non-convergence at alpha=" << alpha
       << " beta=" << beta << " z=" << z;
    throw nonconvergence_error(os.str());
}

double ml_kernel(const KernelParams& params, double t) {
    const double alpha = params.index.alpha, beta = params.index.beta;
    if (!(params.lambda > 0.0)) throw domain_error("ml_kernel: lambda must be > 0");
    if (t < 0.0) throw domain_error("ml_kernel: t must be >= 0");
    if (t == 0.0) {
        if (beta < 1.0)
            throw singular_evaluation_error("ml_kernel: singular at t=0 for beta < 1");
        if (beta == 1.0) return 1.0; // t^0 * E(0) = 1/Gamma(1)
        return 0.0;
    }
    return std::pow(t, beta - 1.0) *
           mittag_leffler(alpha, beta, -params.lambda * std::pow(t, alpha));
}

double convolve_monomial(const KernelParams& params, double r, double t) {
    if (!(r > -1.0)) throw domain_error("convolve_monomial: require r > -1");
    if (!(t > 0.0)) throw domain_error("convolve_monomial: require t > 0");
    KernelParams shifted = params;
    shifted.index.beta = params.index.beta + r + 1.0;
    return gamma_fn(r + 1.0) * ml_kernel(shifted, t);
}

double ml_kernel_integral(const KernelParams& params, double t1, double t2) {
    if (!(t1 >= 0.0) || !(t2 >= t1))
        throw domain_error("ml_kernel_integral: require 0 <= t1 <= t2");
    if (t1 == t2) return 0.0;
    const double alpha = params.index.alpha, lambda = params.lambda;
    const double e1 = mittag_leffler(alpha, 1.0, -lambda * std::pow(t1, alpha));
    const double e2 = mittag_leffler(alpha, 1.0, -lambda * std::pow(t2, alpha));
    return (e1 - e2) / lambda;
}

} // namespace colecole
