#ifndef COLECOLE_SPATIAL_GALERKIN_HPP
#define COLECOLE_SPATIAL_GALERKIN_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "colecole/ide_solver.hpp"

namespace colecole {

// Compact Legendre combinations phi_k = (L_k - L_{k+2})/sqrt(4k+6),
// k = 0..N-2, vanishing at the reference endpoints.  The stiffness matrix
// (phi_k', phi_j') is the identity and the mass matrix is pentadiagonal.
// The physical interval [x_lo, x_hi] maps affinely onto [-1,1].
struct ShenBasis {
    int cutoff;   // N; the basis has N-1 functions
    double x_lo;
    double x_hi;

    ShenBasis(int n, double lo, double hi);

    int num_modes() const { return cutoff - 1; }
    double length() const { return x_hi - x_lo; }
    double to_reference(double x) const;
    double from_reference(double xi) const;

    // phi_k at reference coordinate xi.
    double eval(int k, double xi) const;
    // phi_0..phi_{N-2} at xi.
    void eval_all(double xi, Eigen::VectorXd& out) const;
};

// Mass matrix b_{kj} = (phi_k, phi_j) on the reference interval, assembled
// from closed-form Legendre norms.  Symmetric, pentadiagonal
// (entries only at |k-j| in {0,2}), positive definite.
Eigen::MatrixXd shen_mass_matrix(int cutoff);

// Quadrature-assembled stiffness matrix deviation from the identity.
struct StiffnessCheck {
    double max_deviation;
    bool pass; // max_deviation <= 1e-12
};
StiffnessCheck shen_stiffness_check(int cutoff);

// Orthonormal eigen-decomposition of a symmetric matrix: B = E diag(l) E'.
struct ModalDecomposition {
    Eigen::VectorXd eigenvalues; // ascending
    Eigen::MatrixXd eigvecs;     // orthonormal columns
};
ModalDecomposition sym_eigen(const Eigen::MatrixXd& b);

// Galerkin projections (u, phi_k) on the reference interval, by composite
// Gauss quadrature subdivided at declared discontinuities of u.
// u and the breakpoints are in physical coordinates.
Eigen::VectorXd project_initial(const std::function<double(double)>& u,
                                const ShenBasis& basis,
                                const std::vector<double>& breakpoints = {});

// 2D tensor projection (u, phi_k(x) phi_l(y)); smooth u only.
Eigen::MatrixXd project_initial_2d(const std::function<double(double, double)>& u,
                                   const ShenBasis& basis_x,
                                   const ShenBasis& basis_y);

// Decoupling of the semi-discrete system  B u'' + a_eff u = b_eff int e u
// into independent modal problems: mode i has c = a_eff/l_i, d = b_eff/l_i,
// initial data l_i^{-1} (E' u_hat)_i.
std::vector<IDEProblem> decouple_1d(double a_eff, double b_eff, double lambda,
                                    double alpha,
                                    const Eigen::VectorXd& u0_hat,
                                    const Eigen::VectorXd& u1_hat,
                                    const ModalDecomposition& decomp, double T);

// 2D counterpart: mode (i,j) has c = a_eff (l_i^{-1} + l_j^{-1}), initial
// data (l_i l_j)^{-1} (E' U_hat E)_{ij}.  Problems are returned row-major.
struct Modal2D {
    int n; // modes per direction
    std::vector<IDEProblem> problems;
    IDEProblem& at(int i, int j) { return problems[i * n + j]; }
    const IDEProblem& at(int i, int j) const { return problems[i * n + j]; }
};
Modal2D decouple_2d(double a_eff, double b_eff, double lambda, double alpha,
                    const Eigen::MatrixXd& u0_hat, const Eigen::MatrixXd& u1_hat,
                    const ModalDecomposition& decomp, double T);

// Pointwise reconstruction u(x) = sum_k c_k phi_k(x) at physical points.
Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const ShenBasis& basis,
                            const std::vector<double>& points);

// 2D reconstruction on a tensor grid; returns values V(i,j) = u(x_i, y_j).
Eigen::MatrixXd reconstruct_2d(const Eigen::MatrixXd& coeffs,
                               const ShenBasis& basis_x, const ShenBasis& basis_y,
                               const std::vector<double>& points_x,
                               const std::vector<double>& points_y);

} // namespace colecole

#endif
