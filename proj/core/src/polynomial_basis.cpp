#include "colecole/polynomial_basis.hpp"
#include "colecole/errors.hpp"
#include "colecole/quadrature.hpp"

#include <cmath>

namespace colecole {

namespace {
constexpr double kDomainSlack = 1e-12;

void check_unit_interval(double x, const char* who) {
    if (x < -1.0 - kDomainSlack || x > 1.0 + kDomainSlack)
        throw domain_error(std::string(who) + ": x outside [-1,1]");
}
} // namespace

double legendre_eval(int k, double x) {
    if (k < 0) throw domain_error("legendre_eval: k must be >= 0");
    check_unit_interval(x, "legendre_eval");
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int m = 2; m <= k; ++m) {
        const double p = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p;
    }
    return p1;
}

void legendre_eval_all(int n, double x, std::vector<double>& out) {
    check_unit_interval(x, "legendre_eval_all");
    out.resize(n + 1);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = x;
    for (int m = 2; m <= n; ++m)
        out[m] = ((2.0 * m - 1.0) * x * out[m - 1] - (m - 1.0) * out[m - 2]) / m;
}

double chebyshev_eval(int k, double x) {
    if (k < 0) throw domain_error("chebyshev_eval: k must be >= 0");
    check_unit_interval(x, "chebyshev_eval");
    if (k == 0) return 1.0;
    double t0 = 1.0, t1 = x;
    for (int m = 2; m <= k; ++m) {
        const double t = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t;
    }
    return t1;
}

void chebyshev_eval_all(int n, double x, std::vector<double>& out) {
    check_unit_interval(x, "chebyshev_eval_all");
    out.resize(n + 1);
    out[0] = 1.0;
    if (n == 0) return;
    out[1] = x;
    for (int m = 2; m <= n; ++m) out[m] = 2.0 * x * out[m - 1] - out[m - 2];
}

double chebyshev_deriv(int k, double x) {
    if (k < 0) throw domain_error("chebyshev_deriv: k must be >= 0");
    check_unit_interval(x, "chebyshev_deriv");
    if (k == 0) return 0.0;
    // U recurrence is exact at x = +-1 as well
    double u0 = 1.0, u1 = 2.0 * x;
    if (k == 1) return 1.0;
    for (int m = 2; m < k; ++m) {
        const double u = 2.0 * x * u1 - u0;
        u0 = u1;
        u1 = u;
    }
    return k * u1;
}

double chebyshev_antideriv(int k, double x) {
    if (k < 0) throw domain_error("chebyshev_antideriv: k must be >= 0");
    check_unit_interval(x, "chebyshev_antideriv");
    if (k == 0) return 1.0 + x;
    if (k == 1) return 0.5 * (x * x - 1.0);
    const double tp = chebyshev_eval(k + 1, x);
    const double tm = chebyshev_eval(k - 1, x);
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    return tp / (2.0 * (k + 1.0)) - tm / (2.0 * (k - 1.0)) - sgn / (k * k - 1.0);
}

double chebyshev_clenshaw(const Eigen::VectorXd& coeffs, double x) {
    const int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 0) return 0.0;
    double b1 = 0.0, b2 = 0.0;
    for (int k = n; k >= 1; --k) {
        const double b = 2.0 * x * b1 - b2 + coeffs[k];
        b2 = b1;
        b1 = b;
    }
    return x * b1 - b2 + coeffs[0];
}

double IntervalBasis::to_reference(double t) const {
    const double h = t_cur - t_prev;
    return ((t - t_prev) + (t - t_cur)) / h;
}

double IntervalBasis::from_reference(double x) const {
    return 0.5 * (t_prev + t_cur) + 0.5 * (t_cur - t_prev) * x;
}

double scaled_chebyshev(const IntervalBasis& basis, int n, double t) {
    if (!(basis.t_prev < basis.t_cur))
        throw domain_error("scaled_chebyshev: empty interval");
    const double h = basis.t_cur - basis.t_prev;
    if (t < basis.t_prev - kDomainSlack * h || t > basis.t_cur + kDomainSlack * h)
        throw domain_error("scaled_chebyshev: t outside interval");
    double x = basis.to_reference(t);
    x = std::min(1.0, std::max(-1.0, x));
    return chebyshev_eval(n, x);
}

Eigen::MatrixXd chebyshev_transform_matrix(int n) {
    if (n < 1) throw domain_error("chebyshev_transform_matrix: need n >= 1");
    const std::vector<double> x = cgl_points(n);
    Eigen::MatrixXd c(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
        const double ck = (k == 0 || k == n) ? 2.0 : 1.0;
        for (int j = 0; j <= n; ++j) {
            const double cj = (j == 0 || j == n) ? 2.0 : 1.0;
            c(k, j) = 2.0 / (n * ck * cj) * chebyshev_eval(k, x[j]);
        }
    }
    return c;
}

namespace {

// Closed-form assembly: B_j(x) = sum_{k=0}^{N-1} w_j [T_k(x_j) - T_N(x_j)(-1)^{N+k}] d^{-1}T_k(x)
// with discrete-transform weights w_j = 2/N interior, 1/N at x_N = 1, and the
// usual k = 0 halving of the transform.  These are the Chebyshev-modal
// coefficients of the Lagrange cardinal on the nodes x_1..x_N.
Eigen::MatrixXd birkhoff_closed_form(int n, const std::vector<double>& x) {
    Eigen::MatrixXd b(n, n);
    for (int j = 1; j <= n; ++j) {
        const double wj = (j == n) ? 1.0 / n : 2.0 / n;
        const double tnj = chebyshev_eval(n, x[j]);
        for (int i = 1; i <= n; ++i) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                const double sgn = ((n + k) % 2 == 0) ? 1.0 : -1.0;
                const double ck = (k == 0) ? 2.0 : 1.0;
                acc += wj / ck * (chebyshev_eval(k, x[j]) - tnj * sgn) *
                       chebyshev_antideriv(k, x[i]);
            }
            b(i - 1, j - 1) = acc;
        }
    }
    return b;
}

// Fallback: B_j = integral of the Lagrange cardinal on nodes x_1..x_N.
// Chebyshev-modal coefficients of each cardinal come from one LU solve.
Eigen::MatrixXd birkhoff_direct(int n, const std::vector<double>& x) {
    Eigen::MatrixXd v(n, n);   // v(i-1,k) = T_k(x_i), i = 1..N, k = 0..N-1
    Eigen::MatrixXd phi(n, n); // phi(i-1,k) = d^{-1}T_k(x_i)
    std::vector<double> tk;
    for (int i = 1; i <= n; ++i) {
        chebyshev_eval_all(n - 1, x[i], tk);
        for (int k = 0; k < n; ++k) {
            v(i - 1, k) = tk[k];
            phi(i - 1, k) = chebyshev_antideriv(k, x[i]);
        }
    }
    // B = phi * v^{-1}  <=>  v^T B^T = phi^T
    return v.transpose().partialPivLu().solve(phi.transpose()).transpose();
}

// Max defect of the Birkhoff identity over the test polynomials T_0..T_N.
double birkhoff_defect(int n, const std::vector<double>& x, const Eigen::MatrixXd& b) {
    double worst = 0.0;
    for (int m = 0; m <= n; ++m) {
        Eigen::VectorXd dq(n);
        for (int j = 1; j <= n; ++j) dq(j - 1) = chebyshev_deriv(m, x[j]);
        const Eigen::VectorXd rec = b * dq;
        const double qm1 = chebyshev_eval(m, -1.0);
        for (int i = 1; i <= n; ++i) {
            const double err = std::fabs(chebyshev_eval(m, x[i]) - qm1 - rec(i - 1));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

} // namespace

BirkhoffMatrix BirkhoffMatrix::build(int n) {
    if (n < 1) throw domain_error("BirkhoffMatrix: need N >= 1");
    const std::vector<double> x = cgl_points(n);
    Eigen::MatrixXd b = birkhoff_closed_form(n, x);
    const double tol = 1e-10;
    if (birkhoff_defect(n, x, b) > tol) {
        b = birkhoff_direct(n, x);
        if (birkhoff_defect(n, x, b) > tol)
            throw numerical_error("BirkhoffMatrix: interpolation identity not met");
    }
    return BirkhoffMatrix{n, std::move(b)};
}

} // namespace colecole
