#ifndef COLECOLE_TESTS_ORACLES_HPP
#define COLECOLE_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <vector>

#include "colecole/ide_solver.hpp"

namespace colecole_tests {

// Mass matrix (phi_k, phi_j) assembled by Gauss-Legendre quadrature instead
// of closed-form Legendre norms.
Eigen::MatrixXd shen_mass_quadrature(int cutoff);

// Eigenvalues of a symmetric matrix with the |k-j| in {0,2} sparsity pattern,
// via parity splitting into two tridiagonal blocks and Sturm bisection.
std::vector<double> pentadiagonal_eigenvalues_bisection(const Eigen::MatrixXd& b,
                                                        double tol = 1e-12);

// Kernel integral of a smooth integrand by split two-sided mapped quadrature:
//   int_0^t e_{alpha,alpha}(-lambda (t-s)^alpha) s^r ds
// with node clustering at s = 0 (left algebraic factor s^r) on [0, t/2] and
// at s = t (kernel layer) on [t/2, t].  Independent of convolve_monomial.
double convolution_quadrature_reference(const colecole::KernelParams& params,
                                        double r, double t, int n = 96,
                                        int map_order = 5);

// Reference collocation solve of the coupled system
//   M q'' + a S q = b S int_0^t e_{alpha,alpha}(-lambda (t-s)^alpha) q(s) ds,
// by the same Birkhoff multistep scheme applied blockwise (no enrichment,
// no diagonalization).  Returns values of q at the knots, one column per
// knot 0..K.
Eigen::MatrixXd coupled_march_reference(const Eigen::MatrixXd& mass,
                                        const Eigen::MatrixXd& stiffness,
                                        double a, double b,
                                        const colecole::KernelWorkspace& ws,
                                        const Eigen::VectorXd& u0_hat,
                                        const Eigen::VectorXd& u1_hat);

// Residual check of an enrichment expansion: substitute u = sum gamma t^mu
// + u1 t + u0 into the memory equation and equate coefficients of every
// power below min(tau, 4).  Returns the largest coefficient mismatch, and
// appends any source exponent the expansion failed to cover.
double ansatz_residual(const colecole::AnsatzExpansion& ansatz, double alpha,
                       double lambda, double d, double u0, double u1, double tau,
                       std::vector<double>* missing = nullptr);

} // namespace colecole_tests

#endif
