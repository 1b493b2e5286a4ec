#include "colecole/spatial_galerkin.hpp"
#include "colecole/errors.hpp"
#include "colecole/polynomial_basis.hpp"
#include "colecole/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace colecole {

ShenBasis::ShenBasis(int n, double lo, double hi) : cutoff(n), x_lo(lo), x_hi(hi) {
    if (cutoff < 2) throw domain_error("ShenBasis: require N >= 2");
    if (!(x_lo < x_hi)) throw domain_error("ShenBasis: require x_lo < x_hi");
}

double ShenBasis::to_reference(double x) const {
    return (2.0 * x - (x_lo + x_hi)) / (x_hi - x_lo);
}

double ShenBasis::from_reference(double xi) const {
    return 0.5 * (x_lo + x_hi) + 0.5 * (x_hi - x_lo) * xi;
}

double ShenBasis::eval(int k, double xi) const {
    if (k < 0 || k > cutoff - 2) throw domain_error("ShenBasis::eval: mode out of range");
    const double ck = 1.0 / std::sqrt(4.0 * k + 6.0);
    return ck * (legendre_eval(k, xi) - legendre_eval(k + 2, xi));
}

void ShenBasis::eval_all(double xi, Eigen::VectorXd& out) const {
    std::vector<double> leg;
    legendre_eval_all(cutoff, xi, leg);
    out.resize(cutoff - 1);
    for (int k = 0; k <= cutoff - 2; ++k)
        out(k) = (leg[k] - leg[k + 2]) / std::sqrt(4.0 * k + 6.0);
}

Eigen::MatrixXd shen_mass_matrix(int cutoff) {
    if (cutoff < 2) throw domain_error("shen_mass_matrix: require N >= 2");
    const int m = cutoff - 1;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
    auto leg_norm2 = [](int k) { return 2.0 / (2.0 * k + 1.0); }; // ||L_k||^2
    for (int k = 0; k < m; ++k) {
        b(k, k) = (leg_norm2(k) + leg_norm2(k + 2)) / (4.0 * k + 6.0);
        if (k + 2 < m) {
            const double v = -leg_norm2(k + 2) /
                             std::sqrt((4.0 * k + 6.0) * (4.0 * (k + 2) + 6.0));
            b(k, k + 2) = v;
            b(k + 2, k) = v;
        }
    }
    return b;
}

StiffnessCheck shen_stiffness_check(int cutoff) {
    if (cutoff < 2) throw domain_error("shen_stiffness_check: require N >= 2");
    const int m = cutoff - 1;
    // assemble (phi_k', phi_j') by Gauss quadrature, exact for degree 2N
    const QuadratureRule rule = gauss_legendre(cutoff + 2);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> leg;
    Eigen::VectorXd dphi(m);
    for (std::size_t q = 0; q < rule.size(); ++q) {
        const double x = rule.nodes[q];
        legendre_eval_all(cutoff, x, leg);
        // L_k' from the recurrence (x^2 - 1) L_k' = k (x L_k - L_{k-1})
        for (int k = 0; k < m; ++k) {
            const double dk = k == 0 ? 0.0
                                     : k * (x * leg[k] - leg[k - 1]) / (x * x - 1.0);
            const double dk2 = (k + 2) * (x * leg[k + 2] - leg[k + 1]) / (x * x - 1.0);
            dphi(k) = (dk - dk2) / std::sqrt(4.0 * k + 6.0);
        }
        s += rule.weights[q] * dphi * dphi.transpose();
    }
    const double dev = (s - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    return {dev, dev <= 1e-12};
}

ModalDecomposition sym_eigen(const Eigen::MatrixXd& b) {
    if (b.rows() != b.cols()) throw domain_error("sym_eigen: matrix must be square");
    if ((b - b.transpose()).cwiseAbs().maxCoeff() > 1e-12 * b.cwiseAbs().maxCoeff())
        throw domain_error("sym_eigen: matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
    if (es.info() != Eigen::Success)
        throw nonconvergence_error("sym_eigen: eigen-iteration failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Composite Gauss panels covering [-1,1], split at the (mapped) breakpoints.
std::vector<std::pair<double, double>> reference_panels(const ShenBasis& basis,
                                                        const std::vector<double>& breaks) {
    std::vector<double> cuts{-1.0, 1.0};
    for (double b : breaks) {
        const double xi = basis.to_reference(b);
        if (xi > -1.0 + 1e-14 && xi < 1.0 - 1e-14) cuts.push_back(xi);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> panels;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = cuts[i], b = cuts[i + 1];
        if (b - a < 1e-14) continue;
        // keep panels short so the fixed-order rule resolves smooth data
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / 0.5)));
        for (int p = 0; p < pieces; ++p)
            panels.emplace_back(a + (b - a) * p / pieces, a + (b - a) * (p + 1) / pieces);
    }
    return panels;
}

} // namespace

Eigen::VectorXd project_initial(const std::function<double(double)>& u,
                                const ShenBasis& basis,
                                const std::vector<double>& breakpoints) {
    const int m = basis.num_modes();
    const QuadratureRule rule = gauss_legendre(std::max(basis.cutoff + 2, 16));
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd phi(m);
    for (const auto& [a, b] : reference_panels(basis, breakpoints)) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double xi = mid + half * rule.nodes[q];
            const double uv = u(basis.from_reference(xi));
            if (!std::isfinite(uv))
                throw numerical_error("project_initial: non-finite sample of u");
            basis.eval_all(xi, phi);
            out += (half * rule.weights[q] * uv) * phi;
        }
    }
    return out;
}

Eigen::MatrixXd project_initial_2d(const std::function<double(double, double)>& u,
                                   const ShenBasis& basis_x, const ShenBasis& basis_y) {
    const int mx = basis_x.num_modes(), my = basis_y.num_modes();
    const QuadratureRule rx = gauss_legendre(std::max(basis_x.cutoff + 2, 16));
    const QuadratureRule ry = gauss_legendre(std::max(basis_y.cutoff + 2, 16));
    const int px = static_cast<int>(rx.size()), py = static_cast<int>(ry.size());
    // U_hat = Phi_x' G Phi_y with G(q,r) = w_q w_r u(x_q, y_r)
    Eigen::MatrixXd phix(px, mx), phiy(py, my);
    Eigen::VectorXd tmp;
    for (int q = 0; q < px; ++q) {
        basis_x.eval_all(rx.nodes[q], tmp);
        phix.row(q) = tmp.transpose();
    }
    for (int r = 0; r < py; ++r) {
        basis_y.eval_all(ry.nodes[r], tmp);
        phiy.row(r) = tmp.transpose();
    }
    Eigen::MatrixXd g(px, py);
    for (int q = 0; q < px; ++q) {
        const double x = basis_x.from_reference(rx.nodes[q]);
        for (int r = 0; r < py; ++r) {
            const double uv = u(x, basis_y.from_reference(ry.nodes[r]));
            if (!std::isfinite(uv))
                throw numerical_error("project_initial_2d: non-finite sample of u");
            g(q, r) = rx.weights[q] * ry.weights[r] * uv;
        }
    }
    return phix.transpose() * g * phiy;
}

std::vector<IDEProblem> decouple_1d(double a_eff, double b_eff, double lambda,
                                    double alpha,
                                    const Eigen::VectorXd& u0_hat,
                                    const Eigen::VectorXd& u1_hat,
                                    const ModalDecomposition& decomp, double T) {
    const int m = static_cast<int>(decomp.eigenvalues.size());
    if (u0_hat.size() != m || u1_hat.size() != m)
        throw domain_error("decouple_1d: projection size mismatch");
    const Eigen::VectorXd v0 = decomp.eigvecs.transpose() * u0_hat;
    const Eigen::VectorXd v1 = decomp.eigvecs.transpose() * u1_hat;
    std::vector<IDEProblem> modes;
    modes.reserve(m);
    for (int i = 0; i < m; ++i) {
        const double li = decomp.eigenvalues(i);
        if (!(li > 0.0)) throw numerical_error("decouple_1d: non-positive mass eigenvalue");
        modes.push_back({a_eff / li, b_eff / li, lambda, alpha, v0(i) / li, v1(i) / li, T});
    }
    return modes;
}

Modal2D decouple_2d(double a_eff, double b_eff, double lambda, double alpha,
                    const Eigen::MatrixXd& u0_hat, const Eigen::MatrixXd& u1_hat,
                    const ModalDecomposition& decomp, double T) {
    const int m = static_cast<int>(decomp.eigenvalues.size());
    if (u0_hat.rows() != m || u0_hat.cols() != m || u1_hat.rows() != m ||
        u1_hat.cols() != m)
        throw domain_error("decouple_2d: projection size mismatch");
    const Eigen::MatrixXd w0 = decomp.eigvecs.transpose() * u0_hat * decomp.eigvecs;
    const Eigen::MatrixXd w1 = decomp.eigvecs.transpose() * u1_hat * decomp.eigvecs;
    Modal2D out;
    out.n = m;
    out.problems.reserve(m * m);
    for (int i = 0; i < m; ++i) {
        const double li = decomp.eigenvalues(i);
        for (int j = 0; j < m; ++j) {
            const double lj = decomp.eigenvalues(j);
            if (!(li > 0.0 && lj > 0.0))
                throw numerical_error("decouple_2d: non-positive mass eigenvalue");
            const double kappa = 1.0 / li + 1.0 / lj;
            out.problems.push_back({a_eff * kappa, b_eff * kappa, lambda, alpha,
                                    w0(i, j) / (li * lj), w1(i, j) / (li * lj), T});
        }
    }
    return out;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const ShenBasis& basis,
                            const std::vector<double>& points) {
    if (coeffs.size() != basis.num_modes())
        throw domain_error("reconstruct: coefficient size mismatch");
    Eigen::VectorXd out(points.size());
    Eigen::VectorXd phi;
    for (std::size_t p = 0; p < points.size(); ++p) {
        const double xi = basis.to_reference(points[p]);
        if (xi < -1.0 - 1e-12 || xi > 1.0 + 1e-12)
            throw domain_error("reconstruct: point outside physical domain");
        basis.eval_all(std::min(1.0, std::max(-1.0, xi)), phi);
        out(p) = phi.dot(coeffs);
    }
    return out;
}

Eigen::MatrixXd reconstruct_2d(const Eigen::MatrixXd& coeffs,
                               const ShenBasis& basis_x, const ShenBasis& basis_y,
                               const std::vector<double>& points_x,
                               const std::vector<double>& points_y) {
    if (coeffs.rows() != basis_x.num_modes() || coeffs.cols() != basis_y.num_modes())
        throw domain_error("reconstruct_2d: coefficient size mismatch");
    const int px = static_cast<int>(points_x.size()), py = static_cast<int>(points_y.size());
    Eigen::MatrixXd phix(px, basis_x.num_modes()), phiy(py, basis_y.num_modes());
    Eigen::VectorXd tmp;
    for (int p = 0; p < px; ++p) {
        const double xi = basis_x.to_reference(points_x[p]);
        if (xi < -1.0 - 1e-12 || xi > 1.0 + 1e-12)
            throw domain_error("reconstruct_2d: point outside physical domain");
        basis_x.eval_all(std::min(1.0, std::max(-1.0, xi)), tmp);
        phix.row(p) = tmp.transpose();
    }
    for (int p = 0; p < py; ++p) {
        const double xi = basis_y.to_reference(points_y[p]);
        if (xi < -1.0 - 1e-12 || xi > 1.0 + 1e-12)
            throw domain_error("reconstruct_2d: point outside physical domain");
        basis_y.eval_all(std::min(1.0, std::max(-1.0, xi)), tmp);
        phiy.row(p) = tmp.transpose();
    }
    return phix * coeffs * phiy.transpose();
}

} // namespace colecole
