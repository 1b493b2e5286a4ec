#ifndef COLECOLE_SPECIAL_FUNCTIONS_HPP
#define COLECOLE_SPECIAL_FUNCTIONS_HPP

#include <cstddef>

namespace colecole {

// Parameter pair (alpha, beta) of the two-parameter Mittag-Leffler function
// E_{alpha,beta}(z) = sum_k z^k / Gamma(k*alpha + beta).
struct MLIndex {
    double alpha;
    double beta;
};

// Relaxation kernel parameters: index plus the decay coefficient lambda > 0 of
// the kernel e_{alpha,beta}(-lambda t^alpha) = t^{beta-1} E_{alpha,beta}(-lambda t^alpha).
struct KernelParams {
    MLIndex index;
    double lambda;
};

// Gamma function on the real line (poles excluded), Lanczos approximation.
double gamma_fn(double x);

// log|Gamma(x)|; sign_out (optional) receives the sign of Gamma(x).
double log_gamma(double x, int* sign_out = nullptr);

// 1/Gamma(x); entire, zero at non-positive integers.
double reciprocal_gamma(double x);

// E_{alpha,beta}(z) for real z to absolute tolerance tol (relative once
// |E| > 1).  Evaluation cascades through a compensated Taylor sum, the
// real-axis asymptotic expansion, and extended-precision (80- and 128-bit)
// Taylor sums; throws nonconvergence_error if none reaches tol.
double mittag_leffler(const MLIndex& index, double z, double tol = 1e-13);
double mittag_leffler(double alpha, double beta, double z, double tol = 1e-13);

// Susceptibility kernel e_{alpha,beta}(-lambda t^alpha) = t^{beta-1} E_{alpha,beta}(-lambda t^alpha).
// t = 0 with beta < 1 is a singular evaluation; t < 0 is a domain error.
double ml_kernel(const KernelParams& params, double t);

// Exact monomial convolution
//   int_0^t e_{alpha,beta}(-lambda (t-s)^alpha) s^r ds
//     = Gamma(r+1) e_{alpha,beta+r+1}(-lambda t^alpha),   r > -1, t > 0.
double convolve_monomial(const KernelParams& params, double r, double t);

// Antiderivative drop of the alpha-alpha kernel,
//   int_{t1}^{t2} e_{alpha,alpha}(-lambda s^alpha) ds
//     = (1/lambda) [E_{alpha,1}(-lambda t1^alpha) - E_{alpha,1}(-lambda t2^alpha)],
// for 0 <= t1 <= t2; always >= 0.
double ml_kernel_integral(const KernelParams& params, double t1, double t2);

} // namespace colecole

#endif
