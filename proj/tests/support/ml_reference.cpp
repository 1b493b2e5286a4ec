#include "support/ml_reference.hpp"

#include <cmath>
#include <mpfr.h>

namespace colecole_tests {

std::optional<double> ml_series_reference(double alpha, double beta, double z,
                                          long max_bits) {
    // cancellation scale: the largest |term| is ~exp(x) with x = e^{ln|z|/alpha}
    double x_scale = 1.0;
    if (z < -1.0) x_scale = std::exp(std::log(-z) / alpha);
    const long bits = 128 + static_cast<long>(1.6 * x_scale * 1.4427);
    if (bits > max_bits) return std::nullopt;

    mpfr_t sum, term, power, zz, arg, tmp;
    mpfr_inits2(bits, sum, term, power, zz, arg, tmp, (mpfr_ptr)nullptr);
    mpfr_set_d(sum, 0.0, MPFR_RNDN);
    mpfr_set_d(power, 1.0, MPFR_RNDN);
    mpfr_set_d(zz, z, MPFR_RNDN);

    const double k_past_peak = (z < 0 ? x_scale / alpha : std::pow(std::fabs(z), 1.0 / alpha) / alpha) + 32.0;
    const long k_max = 400000;
    bool converged = false;
    for (long k = 0; k < k_max; ++k) {
        mpfr_set_d(arg, alpha, MPFR_RNDN);
        mpfr_mul_si(arg, arg, k, MPFR_RNDN);
        mpfr_add_d(arg, arg, beta, MPFR_RNDN);
        mpfr_gamma(tmp, arg, MPFR_RNDN);
        mpfr_div(term, power, tmp, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        if (k > k_past_peak) {
            // stop once the term is negligible at double precision
            mpfr_abs(tmp, term, MPFR_RNDN);
            const double ta = mpfr_get_d(tmp, MPFR_RNDN);
            mpfr_abs(tmp, sum, MPFR_RNDN);
            const double sa = mpfr_get_d(tmp, MPFR_RNDN);
            if (ta < 1e-25 * (1.0 + sa)) {
                converged = true;
                break;
            }
        }
        mpfr_mul(power, power, zz, MPFR_RNDN);
    }
    double out = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_clears(sum, term, power, zz, arg, tmp, (mpfr_ptr)nullptr);
    if (!converged) return std::nullopt;
    return out;
}

} // namespace colecole_tests
