#include "support/oracles.hpp"

#include <cmath>
#include <map>

#include "colecole/polynomial_basis.hpp"
#include "colecole/quadrature.hpp"
#include "colecole/spatial_galerkin.hpp"
#include "colecole/special_functions.hpp"

namespace colecole_tests {

using namespace colecole;

Eigen::MatrixXd shen_mass_quadrature(int cutoff) {
    const int m = cutoff - 1;
    const QuadratureRule rule = gauss_legendre(cutoff + 3);
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> leg;
    Eigen::VectorXd phi(m);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        legendre_eval_all(cutoff, rule.nodes[q], leg);
        for (int k = 0; k < m; ++k)
            phi(k) = (leg[k] - leg[k + 2]) / std::sqrt(4.0 * k + 6.0);
        b += rule.weights[q] * phi * phi.transpose();
    }
    return b;
}

namespace {

// eigenvalues of a symmetric tridiagonal matrix by Sturm-count bisection
std::vector<double> tridiag_eigenvalues(const std::vector<double>& diag,
                                        const std::vector<double>& off, double tol) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) return {};
    double lo = diag[0], hi = diag[0];
    for (int i = 0; i < n; ++i) {
        double radius = 0.0;
        if (i > 0) radius += std::fabs(off[i - 1]);
        if (i + 1 < n) radius += std::fabs(off[i]);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    // Sturm sequence: number of eigenvalues below x
    auto count_below = [&](double x) {
        int count = 0;
        double q = 1.0;
        for (int i = 0; i < n; ++i) {
            const double e2 = i > 0 ? off[i - 1] * off[i - 1] : 0.0;
            q = diag[i] - x - (i > 0 ? e2 / q : 0.0);
            if (q == 0.0) q = -1e-300;
            if (q < 0.0) ++count;
        }
        return count;
    };
    std::vector<double> out;
    for (int idx = 0; idx < n; ++idx) {
        double a = lo - tol, b = hi + tol;
        while (b - a > tol * std::max(1.0, std::fabs(a) + std::fabs(b))) {
            const double mid = 0.5 * (a + b);
            if (count_below(mid) > idx) b = mid;
            else a = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

} // namespace

std::vector<double> pentadiagonal_eigenvalues_bisection(const Eigen::MatrixXd& b,
                                                        double tol) {
    const int n = static_cast<int>(b.rows());
    std::vector<double> all;
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<double> diag, off;
        for (int k = parity; k < n; k += 2) {
            diag.push_back(b(k, k));
            if (k + 2 < n) off.push_back(b(k, k + 2));
        }
        const auto eig = tridiag_eigenvalues(diag, off, tol);
        all.insert(all.end(), eig.begin(), eig.end());
    }
    std::sort(all.begin(), all.end());
    return all;
}

double convolution_quadrature_reference(const KernelParams& params, double r,
                                        double t, int n, int map_order) {
    const double mid = 0.5 * t;
    // [mid, t]: kernel layer at s = t
    const double right = mapped_integrate_singular(
        [&](double s, double to_right) {
            return ml_kernel(params, to_right) * std::pow(s, r);
        },
        SingularMap{mid, t, map_order}, n);
    // [0, mid]: algebraic factor s^r clustered at s = 0 via reflection
    const double left = mapped_integrate_singular(
        [&](double /*sigma*/, double to_right) {
            const double s = to_right; // distance to the right endpoint = s
            return ml_kernel(params, t - s) * std::pow(s, r);
        },
        SingularMap{0.0, mid, map_order}, n);
    return left + right;
}

Eigen::MatrixXd coupled_march_reference(const Eigen::MatrixXd& mass,
                                        const Eigen::MatrixXd& stiffness,
                                        double a, double b, const KernelWorkspace& ws,
                                        const Eigen::VectorXd& u0_hat,
                                        const Eigen::VectorXd& u1_hat) {
    const int m = static_cast<int>(mass.rows());
    const TimeMesh& mesh = ws.mesh();
    const int n = mesh.degree;
    const int k_count = mesh.intervals;
    const Eigen::MatrixXd& vm = ws.value_map();
    const Eigen::MatrixXd& mm = ws.memory_map();
    const Eigen::VectorXd& mc = ws.memory_const();

    const int dim = 2 * (n + 1) * m;
    auto at = [m](int block) { return block * m; };

    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(dim, dim);
    // ordering: [q0 | p0 | Dp_1..N | Dq_1..N], each an m-vector
    sys.block(at(0), at(0), m, m).setIdentity();
    sys.block(at(1), at(1), m, m).setIdentity();
    for (int i = 1; i <= n; ++i) {
        const int row = at(1 + i);
        sys.block(row, at(1 + i), m, m) = mass;
        sys.block(row, at(0), m, m) += (a - b * mc(i - 1)) * stiffness;
        for (int j = 1; j <= n; ++j)
            sys.block(row, at(1 + n + j), m, m) +=
                (a * vm(i - 1, j - 1) - b * mm(i - 1, j - 1)) * stiffness;
        const int row2 = at(1 + n + i);
        sys.block(row2, at(1 + n + i), m, m).setIdentity();
        sys.block(row2, at(1), m, m) -= Eigen::MatrixXd::Identity(m, m);
        for (int j = 1; j <= n; ++j)
            sys.block(row2, at(1 + j), m, m) -=
                vm(i - 1, j - 1) * Eigen::MatrixXd::Identity(m, m);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    const Eigen::PartialPivLU<Eigen::MatrixXd> mass_lu(mass);

    Eigen::MatrixXd knots(m, k_count + 1);
    Eigen::VectorXd q_left = mass_lu.solve(u0_hat);
    Eigen::VectorXd p_left = mass_lu.solve(u1_hat);
    knots.col(0) = q_left;

    // per-interval Chebyshev coefficients of q, one column per degree
    std::vector<Eigen::MatrixXd> cheb_pieces;
    Eigen::VectorXd rhs(dim);
    for (int k = 1; k <= k_count; ++k) {
        rhs.setZero();
        rhs.segment(at(0), m) = q_left;
        rhs.segment(at(1), m) = p_left;
        for (int i = 1; i <= n; ++i) {
            Eigen::VectorXd hist = Eigen::VectorXd::Zero(m);
            for (int l = 1; l <= k - 1; ++l) {
                const Eigen::MatrixXd& hc = ws.history_cheb(k - l);
                for (int deg = 0; deg <= n; ++deg)
                    hist += hc(i - 1, deg) * cheb_pieces[l - 1].col(deg);
            }
            rhs.segment(at(1 + i), m) = b * (stiffness * hist);
        }
        const Eigen::VectorXd x = lu.solve(rhs);
        // values at the N+1 nodes, then Chebyshev transform per component
        Eigen::MatrixXd q_vals(m, n + 1);
        q_vals.col(0) = x.segment(at(0), m);
        Eigen::MatrixXd dq(m, n);
        for (int j = 1; j <= n; ++j) dq.col(j - 1) = x.segment(at(1 + n + j), m);
        for (int i = 1; i <= n; ++i) {
            q_vals.col(i) = q_vals.col(0);
            for (int j = 1; j <= n; ++j) q_vals.col(i) += vm(i - 1, j - 1) * dq.col(j - 1);
        }
        Eigen::MatrixXd p_vals(m, n + 1);
        p_vals.col(0) = x.segment(at(1), m);
        Eigen::MatrixXd dp(m, n);
        for (int j = 1; j <= n; ++j) dp.col(j - 1) = x.segment(at(1 + j), m);
        for (int i = 1; i <= n; ++i) {
            p_vals.col(i) = p_vals.col(0);
            for (int j = 1; j <= n; ++j) p_vals.col(i) += vm(i - 1, j - 1) * dp.col(j - 1);
        }
        cheb_pieces.push_back(q_vals * ws.transform().transpose());
        q_left = q_vals.col(n);
        p_left = p_vals.col(n);
        knots.col(k) = q_left;
    }
    return knots;
}

double ansatz_residual(const AnsatzExpansion& ansatz, double alpha, double lambda,
                       double d, double u0, double u1, double tau,
                       std::vector<double>* missing) {
    struct Source {
        double e;
        double coeff;
    };
    std::vector<Source> sources;
    for (int k = 0;; ++k) {
        const double e = (k + 1) * alpha;
        if (e >= 2.0) break;
        sources.push_back(
            {e, d * u0 * std::pow(-lambda, k) / std::tgamma(k * alpha + alpha + 1.0)});
    }
    for (int k = 0;; ++k) {
        const double e = (k + 1) * alpha + 1.0;
        if (e >= 2.0) break;
        sources.push_back(
            {e, d * u1 * std::pow(-lambda, k) / std::tgamma(k * alpha + alpha + 2.0)});
    }

    double worst = 0.0;
    for (const auto& term : ansatz.terms) {
        const double mu = term.exponent;
        double rhs = 0.0;
        for (const auto& src : sources)
            if (std::fabs(src.e - (mu - 2.0)) < 1e-9) rhs += src.coeff;
        const double lhs = term.coeff * mu * (mu - 1.0);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)));
    }
    if (missing) {
        // aggregate sources per target exponent, then require coverage
        std::map<long long, std::pair<double, double>> targets; // mu -> (mu, total)
        for (const auto& src : sources) {
            const double mu = src.e + 2.0;
            if (!(mu > 2.0) || mu >= std::min(tau, 4.0)) continue;
            if (std::fabs(mu - std::round(mu)) < 1e-9) continue;
            auto& slot = targets[llround(mu * 1e9)];
            slot.first = mu;
            slot.second += src.coeff;
        }
        for (const auto& [key, slot] : targets) {
            if (slot.second == 0.0) continue;
            bool found = false;
            for (const auto& term : ansatz.terms)
                if (std::fabs(term.exponent - slot.first) < 1e-9) found = true;
            if (!found) missing->push_back(slot.first);
        }
    }
    return worst;
}

} // namespace colecole_tests
