#ifndef COLECOLE_POLYNOMIAL_BASIS_HPP
#define COLECOLE_POLYNOMIAL_BASIS_HPP

#include <Eigen/Dense>
#include <vector>

namespace colecole {

// Legendre polynomial L_k(x) on [-1,1]; L_k(1) = 1.
double legendre_eval(int k, double x);
// L_0..L_n at x (recurrence, one pass).
void legendre_eval_all(int n, double x, std::vector<double>& out);

// Chebyshev polynomial of the first kind, T_k(cos theta) = cos(k theta).
double chebyshev_eval(int k, double x);
void chebyshev_eval_all(int n, double x, std::vector<double>& out);

// T_k'(x) = k U_{k-1}(x); exact at the endpoints.
double chebyshev_deriv(int k, double x);

// Antiderivative int_{-1}^x T_k(y) dy:
//   k=0: 1+x,  k=1: (x^2-1)/2,
//   k>=2: T_{k+1}(x)/(2(k+1)) - T_{k-1}(x)/(2(k-1)) - (-1)^k/(k^2-1).
// Vanishes at x = -1 for every k.
double chebyshev_antideriv(int k, double x);

// Clenshaw evaluation of sum_k c_k T_k(x).
double chebyshev_clenshaw(const Eigen::VectorXd& coeffs, double x);

// Time interval [t_prev, t_cur] carrying a degree-N Chebyshev basis scaled by
//   x = (t - t_prev)/(t_cur - t_prev) + (t - t_cur)/(t_cur - t_prev)  in [-1,1].
struct IntervalBasis {
    double t_prev;
    double t_cur;
    int degree;

    double to_reference(double t) const;
    double from_reference(double x) const;
};

// T_n at the affine image of t in [t_prev, t_cur].
double scaled_chebyshev(const IntervalBasis& basis, int n, double t);

// Discrete Chebyshev transform on N+1 CGL points: coeffs = C * values is
// exact for polynomials of degree <= N.
Eigen::MatrixXd chebyshev_transform_matrix(int n);

// First-order Birkhoff (pseudospectral integration) matrix on CGL points:
// B(i,j) = B_j(x_i), i,j = 1..N, where B_j is the polynomial of degree <= N
// with B_j(x_0) = 0 and B_j'(x_i) = delta_ij.  For every q in P_N:
//   q(x_i) = q(x_0) + sum_j B(i,j) q'(x_j).
// Assembled from the closed-form Chebyshev expansion with discrete-transform
// weights, validated against that identity, with a direct solve of the
// interpolation conditions as fallback.
struct BirkhoffMatrix {
    int order;              // N
    Eigen::MatrixXd entries; // N x N

    static BirkhoffMatrix build(int n);
};

} // namespace colecole

#endif
