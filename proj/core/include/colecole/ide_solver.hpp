#ifndef COLECOLE_IDE_SOLVER_HPP
#define COLECOLE_IDE_SOLVER_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "colecole/polynomial_basis.hpp"
#include "colecole/special_functions.hpp"

namespace colecole {

// Prototype temporal problem
//   u'' + c u = d int_0^t e_{alpha,alpha}(-lambda (t-s)^alpha) u(s) ds,
//   u(0) = u0, u'(0) = u1,  on (0, T].
// d = 0 switches the memory off (classical oscillator).
struct IDEProblem {
    double c;
    double d;
    double lambda;
    double alpha;
    double u0;
    double u1;
    double T;

    void validate() const;
    KernelParams kernel() const { return {{alpha, alpha}, lambda}; }
    // damped-Hamiltonian stiffness c - d/lambda
    double hamiltonian_coeff() const { return c - d / lambda; }
};

// K equal subintervals of [0,T], each carrying N+1 CGL collocation nodes
//   t_j^k = (t_{k-1}+t_k)/2 + (t_k - t_{k-1}) x_j / 2.
struct TimeMesh {
    double T;
    int intervals;  // K
    int degree;     // N

    TimeMesh() : TimeMesh(1.0, 1, 1) {}
    TimeMesh(double horizon, int k, int n);

    double h() const { return T / intervals; }
    double knot(int k) const { return k * h(); }       // t_k, k = 0..K
    const std::vector<double>& ref_nodes() const { return ref_nodes_; }
    // offset of node i from the interval's left endpoint, tau_0 = 0, tau_N = h
    double node_offset(int i) const { return 0.5 * h() * (ref_nodes_[i] + 1.0); }
    double node(int k, int i) const { return knot(k - 1) + node_offset(i); }
    int interval_of(double t) const; // 1-based; t in [0,T]

private:
    std::vector<double> ref_nodes_;
};

// One singular enrichment term gamma * t^mu.
struct AnsatzTerm {
    double exponent;
    double coeff;
};

// Singular part u_*(t) = sum gamma_m t^{mu_m} of the solution near t = 0.
// Exponents are non-integer, strictly inside (2, tau), ascending.
struct AnsatzExpansion {
    std::vector<AnsatzTerm> terms;
    double tau = 4.0;

    double eval(double t) const;        // u_*
    double eval_deriv(double t) const;  // u_*'
    double eval_deriv2(double t) const; // u_*''
    bool empty() const { return terms.empty(); }
};

// Coefficient-independent structure of the enrichment: the exponent lattice
// f or given (alpha, lambda, tau) with per-exponent weights such that
//   gamma = d (u0 * x_u0 + u1 * y_u1).
// Obtained by equating coefficients of the singular powers in the equation:
// each right-hand-side source term du0 t^{(k+1)alpha} / Gamma(k alpha+alpha+1)
// or du1 t^{(k+1)alpha+1} / Gamma(k alpha+alpha+2) with exponent e < 2 feeds
// exactly one ansatz exponent mu = e + 2 through double integration.
struct AnsatzBasis {
    double alpha;
    double lambda;
    double tau;
    struct Row {
        double exponent; // mu
        double x_u0;     // weight of d*u0
        double y_u1;     // weight of d*u1
    };
    std::vector<Row> rows;

    static AnsatzBasis build(double alpha, double lambda, double tau);
    AnsatzExpansion instantiate(double d, double u0, double u1) const;
    std::vector<double> exponents() const;
};

// Enrichment for a concrete problem; tau >= 2 (tau = 2: empty extraction).
AnsatzExpansion build_ansatz(const IDEProblem& prob, double tau);

// Kernel-integral quadrature controls: n-point mapped Gauss-Legendre with map
// order r for integrals whose evaluation point is within far_switch interval
// lengths of the singular end; plain Gauss (r = 0) beyond.
struct QuadOptions {
    int n = 64;
    int map_order = 3;
    double far_switch = 1.0;
};

// Integrand selector for the kernel history integrals: either the monomial
// s^exponent (first interval only, anchored at t = 0) or the scaled Chebyshev
// T_degree on the integration interval.
struct IntegrandSpec {
    enum class Kind { monomial, chebyshev } kind;
    double exponent = 0.0;
    int degree = 0;

    static IntegrandSpec monomial(double e) { return {Kind::monomial, e, 0}; }
    static IntegrandSpec chebyshev(int n) { return {Kind::chebyshev, 0.0, n}; }
};

// Singular integral with the evaluation point inside the interval:
//   int_a^t e_{alpha,alpha}(-lambda (t-s)^alpha) g(s) ds,  t in (a, b].
// Monomial g uses the exact convolution identity (requires a = 0); Chebyshev
// g uses mapped quadrature clustered at s = t.
double history_integral_type1(const KernelParams& params, double a, double b,
                              const IntegrandSpec& g, double t,
                              const QuadOptions& opts = {});

// Nearly singular integral with the evaluation point beyond the interval:
//   int_a^b e_{alpha,alpha}(-lambda (t-s)^alpha) g(s) ds,  t > b.
// Mapped quadrature with the layer at s = b; plain Gauss once t - b exceeds
// far_switch * (b - a).
double history_integral_type2(const KernelParams& params, double a, double b,
                              const IntegrandSpec& g, double t,
                              const QuadOptions& opts = {});

// Everything that depends only on (mesh shape, kernel, quadrature, exponent
// lattice) and is shared by every modal problem with the same alpha/lambda:
// Birkhoff and transform matrices and all kernel moment tables.  Immutable
// after construction; safe to share across concurrent marches.
class KernelWorkspace {
public:
    KernelWorkspace(const TimeMesh& mesh, const KernelParams& params,
                    const QuadOptions& opts, std::vector<double> ansatz_exponents = {});

    const TimeMesh& mesh() const { return mesh_; }
    const KernelParams& params() const { return params_; }
    const QuadOptions& options() const { return opts_; }
    const BirkhoffMatrix& birkhoff() const { return birkhoff_; }
    const Eigen::MatrixXd& transform() const { return transform_; }
    const std::vector<double>& ansatz_exponents() const { return mus_; }

    // NxN blocks of the per-interval collocation system
    const Eigen::MatrixXd& value_map() const { return value_map_; }     // J*B
    const Eigen::MatrixXd& memory_map() const { return memory_map_; }   // J*(W C Btilde)
    const Eigen::VectorXd& memory_const() const { return memory_const_; } // W(:,0)

    // Type-I Chebyshev moments W(i,n) = int_0^{tau_i} e(tau_i - s) T_n ds
    const Eigen::MatrixXd& type1_cheb() const { return type1_cheb_; }
    // history moments for gap g = 1..K-1:
    //   H^g(i,n)  = int_0^h e(g h + tau_i - s) T_n(s) ds
    const Eigen::MatrixXd& history_cheb(int gap) const { return history_cheb_[gap - 1]; }
    //   AH^g(i,m) = int_0^h e(g h + tau_i - s) s^{mu_m} ds
    const Eigen::MatrixXd& history_ansatz(int gap) const { return history_ansatz_[gap - 1]; }
    // exact first-interval ansatz moments E1(i,m) = Gamma(mu+1) e_{a,a+mu+1}(tau_i)
    const Eigen::MatrixXd& type1_ansatz() const { return type1_ansatz_; }

private:
    TimeMesh mesh_;
    KernelParams params_;
    QuadOptions opts_;
    std::vector<double> mus_;
    BirkhoffMatrix birkhoff_;
    Eigen::MatrixXd transform_;
    Eigen::MatrixXd value_map_;
    Eigen::MatrixXd memory_map_;
    Eigen::VectorXd memory_const_;
    Eigen::MatrixXd type1_cheb_;
    Eigen::MatrixXd type1_ansatz_;
    std::vector<Eigen::MatrixXd> history_cheb_;
    std::vector<Eigen::MatrixXd> history_ansatz_;
};

// Chebyshev representation of (p, q) on one interval.
struct IntervalSolution {
    Eigen::VectorXd q_vals, p_vals;   // values at the N+1 CGL nodes (polynomial part)
    Eigen::VectorXd q_cheb, p_cheb;   // Chebyshev coefficients of the same
};

// Piecewise solution of a march: per-interval polynomials plus the
// enrichment attached to interval 1.  eval_* return the total solution.
struct PiecewiseSolution {
    TimeMesh mesh;
    AnsatzExpansion ansatz;
    std::vector<IntervalSolution> pieces;
    double condition_estimate = 0.0; // of the per-interval collocation matrix

    double eval_q(double t) const;
    double eval_p(double t) const;
    double knot_q(int k) const; // q at t_k
    double knot_p(int k) const;
};

struct MarchOptions {
    double tau = 4.0;
    QuadOptions quad{};
    // Enrichment override for manufactured problems (used instead of build_ansatz).
    std::optional<AnsatzExpansion> ansatz;
    // Optional source term g(t) added to the first equation.
    std::function<double(double)> forcing;
};

// Sequential multistep collocation over all K intervals.
PiecewiseSolution march(const IDEProblem& prob, const TimeMesh& mesh,
                        const MarchOptions& opts = {});
// Same, sharing a precomputed workspace (mesh/kernel/quadrature must match).
PiecewiseSolution march_with_workspace(const IDEProblem& prob,
                                       const KernelWorkspace& ws,
                                       const MarchOptions& opts = {});

// H(t) = p(t)^2 + (c - d/lambda) q(t)^2.
double hamiltonian(const IDEProblem& prob, const PiecewiseSolution& sol, double t);

// Memory convolution of the computed solution,
//   int_0^t e_{alpha,alpha}(-lambda (t-s)^alpha) q(s) ds,
// exact for the enrichment part, quadrature/moment tables elsewhere.
// Shares the workspace tables when t is a knot.
double memory_convolution(const PiecewiseSolution& sol, const KernelWorkspace& ws,
                          double t);

// Independent reference solver: the second-kind Volterra form
//   z = f + int_0^t [d e_{alpha,alpha+2} - c (t-s)] z(s) ds,  z = u'',
// discretized by piecewise-linear product integration on a uniform M-mesh
// with exact kernel moments; u is recovered by double integration.
// Shares no code with march beyond the special functions.
struct OracleSolution {
    double T;
    std::vector<double> times;
    std::vector<double> z;
    double u0, u1;

    double eval_u(double t) const; // t must lie on [0,T]
};
OracleSolution integral_form_oracle(const IDEProblem& prob, int m);

} // namespace colecole

#endif
