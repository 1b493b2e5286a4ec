#include "colecole/quadrature.hpp"
#include "colecole/errors.hpp"

#include <cmath>
#include <sstream>

namespace colecole {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

// Legendre P_n and P_n' at x by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (n == 0) { p = 1.0; dp = 0.0; return; }
    for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}
} // namespace

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw domain_error("gauss_legendre: need n >= 1");
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Newton from the Chebyshev-based initial guess (roots in descending order)
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        legendre_pair(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // mirror: i-th guess above is the i-th largest positive root
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

std::vector<double> cgl_points(int n) {
    if (n < 1) throw domain_error("cgl_points: need n >= 1");
    std::vector<double> x(n + 1);
    for (int j = 0; j <= n; ++j) x[j] = -std::cos(kPi * j / n);
    x[0] = -1.0;
    x[n] = 1.0;
    if (n % 2 == 0) x[n / 2] = 0.0;
    return x;
}

double map_point(const SingularMap& m, double y) {
    if (!(m.t_l < m.t_r)) throw domain_error("SingularMap: require t_l < t_r");
    if (m.r < 0) throw domain_error("SingularMap: require r >= 0");
    if (y < -1.0 || y > 1.0) throw domain_error("map_point: y outside [-1,1]");
    return m.t_r + (m.t_l - m.t_r) * std::pow(0.5 * (1.0 - y), 1 + m.r);
}

double mapped_integrate(const std::function<double(double)>& f,
                        const SingularMap& m, const QuadratureRule& rule) {
    if (!(m.t_l < m.t_r)) throw domain_error("mapped_integrate: require t_l < t_r");
    if (m.r < 0) throw domain_error("mapped_integrate: require r >= 0");
    const double c_r = (m.r + 1) * 0.5 * (m.t_r - m.t_l);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double y = rule.nodes[i];
        const double t = m.t_r + (m.t_l - m.t_r) * std::pow(0.5 * (1.0 - y), 1 + m.r);
        const double fv = f(t);
        if (!std::isfinite(fv)) {
            std::ostringstream os;
            os << "mapped_integrate: non-finite integrand at t=" << t;
            throw numerical_error(os.str());
        }
        sum += fv * std::pow(0.5 * (1.0 - y), m.r) * rule.weights[i];
    }
    return c_r * sum;
}

double mapped_integrate(const std::function<double(double)>& f,
                        const SingularMap& m, int n) {
    return mapped_integrate(f, m, gauss_legendre(n));
}

double mapped_integrate_singular(const std::function<double(double, double)>& f,
                                 const SingularMap& m, const QuadratureRule& rule) {
    if (!(m.t_l < m.t_r)) throw domain_error("mapped_integrate: require t_l < t_r");
    if (m.r < 0) throw domain_error("mapped_integrate: require r >= 0");
    const double c_r = (m.r + 1) * 0.5 * (m.t_r - m.t_l);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double y = rule.nodes[i];
        const double to_right = (m.t_r - m.t_l) * std::pow(0.5 * (1.0 - y), 1 + m.r);
        const double t = m.t_r - to_right;
        const double fv = f(t, to_right);
        if (!std::isfinite(fv)) {
            std::ostringstream os;
            os << "mapped_integrate: non-finite integrand at t=" << t;
            throw numerical_error(os.str());
        }
        sum += fv * std::pow(0.5 * (1.0 - y), m.r) * rule.weights[i];
    }
    return c_r * sum;
}

double mapped_integrate_singular(const std::function<double(double, double)>& f,
                                 const SingularMap& m, int n) {
    return mapped_integrate_singular(f, m, gauss_legendre(n));
}

} // namespace colecole
