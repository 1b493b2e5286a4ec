#include "colecole/manufactured.hpp"
#include "colecole/errors.hpp"
#include "colecole/special_functions.hpp"

#include <cmath>

namespace colecole {

namespace {
// binomial expansion of (s-1)^5 in powers of s
constexpr double kPolyCoeffs[6] = {-1.0, 5.0, -10.0, 10.0, -5.0, 1.0};
} // namespace

IDEProblem ManufacturedProblem::problem(double T) const {
    // u(0) = (0-1)^5 = -1,  u'(0) = 5 (0-1)^4 = 5
    return {c, d, lambda, alpha, -1.0, 5.0, T};
}

double ManufacturedProblem::exact_q(double t) const {
    const double sgn = t <= 1.0 ? 1.0 : -1.0;
    double frac = 0.0;
    if (t > 0.0)
        frac = std::pow(t, 2.0 + alpha) + std::pow(t, 3.0 + 2.0 * alpha);
    return frac + sgn * std::pow(t - 1.0, 5.0);
}

double ManufacturedProblem::exact_p(double t) const {
    const double sgn = t <= 1.0 ? 1.0 : -1.0;
    double frac = 0.0;
    if (t > 0.0)
        frac = (2.0 + alpha) * std::pow(t, 1.0 + alpha) +
               (3.0 + 2.0 * alpha) * std::pow(t, 2.0 + 2.0 * alpha);
    return frac + sgn * 5.0 * std::pow(t - 1.0, 4.0);
}

double ManufacturedProblem::memory(double t) const {
    if (t <= 0.0) return 0.0;
    const KernelParams kp{{alpha, alpha}, lambda};
    double mem = convolve_monomial(kp, 2.0 + alpha, t) +
                 convolve_monomial(kp, 3.0 + 2.0 * alpha, t);
    // (s-1)^5 part, expanded in monomials anchored at 0
    for (int m = 0; m <= 5; ++m)
        mem += kPolyCoeffs[m] * convolve_monomial(kp, static_cast<double>(m), t);
    if (t > 1.0) {
        // sign flip past the kink: subtract 2 int_1^t e(t-s) (s-1)^5 ds
        KernelParams shifted = kp;
        shifted.index.beta = alpha + 6.0;
        mem -= 2.0 * gamma_fn(6.0) * ml_kernel(shifted, t - 1.0);
    }
    return mem;
}

double ManufacturedProblem::forcing(double t) const {
    const double sgn = t <= 1.0 ? 1.0 : -1.0;
    double upp = sgn * 20.0 * std::pow(t - 1.0, 3.0);
    if (t > 0.0)
        upp += (2.0 + alpha) * (1.0 + alpha) * std::pow(t, alpha) +
               (3.0 + 2.0 * alpha) * (2.0 + 2.0 * alpha) * std::pow(t, 1.0 + 2.0 * alpha);
    return upp + c * exact_q(t) - d * memory(t);
}

AnsatzExpansion ManufacturedProblem::ansatz(double tau) const {
    if (!(tau >= 2.0)) throw domain_error("ManufacturedProblem: require tau >= 2");
    AnsatzExpansion out;
    out.tau = tau;
    if (2.0 + alpha < tau) out.terms.push_back({2.0 + alpha, 1.0});
    if (3.0 + 2.0 * alpha < tau) out.terms.push_back({3.0 + 2.0 * alpha, 1.0});
    return out;
}

std::vector<double> ManufacturedProblem::singular_exponents() const {
    return {2.0 + alpha, 3.0 + 2.0 * alpha};
}

} // namespace colecole
