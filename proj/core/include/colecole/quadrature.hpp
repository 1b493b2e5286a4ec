#ifndef COLECOLE_QUADRATURE_HPP
#define COLECOLE_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace colecole {

// Gauss rule on [-1,1]: ascending nodes, positive weights summing to 2.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule; exact on polynomials of degree <= 2n-1.
QuadratureRule gauss_legendre(int n);

// Chebyshev-Gauss-Lobatto points x_j = -cos(pi j / n), j = 0..n, ascending.
std::vector<double> cgl_points(int n);

// One-sided singular mapping onto [t_l, t_r] with the boundary layer at t_r:
//   t = h(y; r) = t_r + (t_l - t_r) ((1-y)/2)^{1+r},   y in [-1,1].
// r = 0 reduces to the affine map.
struct SingularMap {
    double t_l;
    double t_r;
    int r;
};

double map_point(const SingularMap& m, double y);

// Mapped Gauss-Legendre quadrature of f over (t_l, t_r):
//   int f dt = c_r int f(h(y;r)) ((1-y)/2)^r dy,  c_r = (r+1)(t_r - t_l)/2,
// with the n-point rule.  Gauss nodes exclude +-1, so f is never evaluated
// at the endpoints.  Non-finite integrand values are an error.
double mapped_integrate(const std::function<double(double)>& f,
                        const SingularMap& m, int n);
double mapped_integrate(const std::function<double(double)>& f,
                        const SingularMap& m, const QuadratureRule& rule);

// Same rule, but the integrand receives (t, t_r - t) with the distance to the
// singular endpoint computed from the map directly: t_r - h(y;r)
// = (t_r - t_l)((1-y)/2)^{1+r} carries no cancellation even when t rounds
// onto t_r.  Kernel integrands should form their argument from it.
double mapped_integrate_singular(const std::function<double(double, double)>& f,
                                 const SingularMap& m, const QuadratureRule& rule);
double mapped_integrate_singular(const std::function<double(double, double)>& f,
                                 const SingularMap& m, int n);

} // namespace colecole

#endif
