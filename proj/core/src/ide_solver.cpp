#include "colecole/ide_solver.hpp"
#include "colecole/errors.hpp"
#include "colecole/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace colecole {

namespace {
constexpr double kExponentMatchTol = 1e-9;

bool near_integer(double x, double tol = 1e-9) {
    return std::fabs(x - std::round(x)) < tol;
}
} // namespace

void IDEProblem::validate() const {
    if (!(c > 0.0)) throw domain_error("IDEProblem: require c > 0");
    if (!(d >= 0.0)) throw domain_error("IDEProblem: require d >= 0");
    if (!(lambda > 0.0)) throw domain_error("IDEProblem: require lambda > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw domain_error("IDEProblem: require 0 < alpha < 1");
    if (!(T > 0.0)) throw domain_error("IDEProblem: require T > 0");
    if (!std::isfinite(u0) || !std::isfinite(u1))
        throw domain_error("IDEProblem: non-finite initial data");
}

TimeMesh::TimeMesh(double horizon, int k, int n) : T(horizon), intervals(k), degree(n) {
    if (!(T > 0.0)) throw domain_error("TimeMesh: require T > 0");
    if (intervals < 1) throw domain_error("TimeMesh: require K >= 1");
    if (degree < 1) throw domain_error("TimeMesh: require N >= 1");
    ref_nodes_ = cgl_points(degree);
}

int TimeMesh::interval_of(double t) const {
    if (t <= 0.0) return 1;
    const int k = static_cast<int>(std::ceil(t / h() - 1e-12));
    return std::min(std::max(k, 1), intervals);
}

double AnsatzExpansion::eval(double t) const {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    for (const auto& term : terms) s += term.coeff * std::pow(t, term.exponent);
    return s;
}

double AnsatzExpansion::eval_deriv(double t) const {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    for (const auto& term : terms)
        s += term.coeff * term.exponent * std::pow(t, term.exponent - 1.0);
    return s;
}

double AnsatzExpansion::eval_deriv2(double t) const {
    if (t <= 0.0) return 0.0;
    double s = 0.0;
    for (const auto& term : terms)
        s += term.coeff * term.exponent * (term.exponent - 1.0) *
             std::pow(t, term.exponent - 2.0);
    return s;
}

AnsatzBasis AnsatzBasis::build(double alpha, double lambda, double tau) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw domain_error("AnsatzBasis: require 0 < alpha < 1");
    if (!(lambda > 0.0)) throw domain_error("AnsatzBasis: require lambda > 0");
    if (!(tau >= 2.0)) throw domain_error("AnsatzBasis: require tau >= 2");

    // Collect right-hand-side sources with exponent e < 2; each feeds the
    // ansatz exponent mu = e + 2 with weight coeff / (mu (mu-1)).
    std::map<long long, Row> rows; // keyed by round(mu / tol) to merge collisions
    auto add_source = [&](double e, double weight, bool from_u0) {
        const double mu = e + 2.0;
        if (!(mu > 2.0) || mu >= tau || near_integer(mu)) return;
        const long long key = llround(mu / kExponentMatchTol);
        auto it = rows.find(key);
        if (it == rows.end()) it = rows.emplace(key, Row{mu, 0.0, 0.0}).first;
        const double w = weight / (mu * (mu - 1.0));
        if (from_u0) it->second.x_u0 += w;
        else it->second.y_u1 += w;
    };
    // u0 family: d u0 sum_k (-lambda)^k t^{(k+1)alpha} / Gamma(k alpha + alpha + 1)
    for (int k = 0;; ++k) {
        const double e = (k + 1) * alpha;
        if (e >= 2.0) break;
        add_source(e, std::pow(-lambda, k) * reciprocal_gamma(k * alpha + alpha + 1.0), true);
    }
    // u1 family: d u1 sum_k (-lambda)^k t^{(k+1)alpha + 1} / Gamma(k alpha + alpha + 2)
    for (int k = 0;; ++k) {
        const double e = (k + 1) * alpha + 1.0;
        if (e >= 2.0) break;
        add_source(e, std::pow(-lambda, k) * reciprocal_gamma(k * alpha + alpha + 2.0), false);
    }
    AnsatzBasis basis{alpha, lambda, tau, {}};
    for (auto& [key, row] : rows) basis.rows.push_back(row);
    std::sort(basis.rows.begin(), basis.rows.end(),
              [](const Row& a, const Row& b) { return a.exponent < b.exponent; });
    return basis;
}

AnsatzExpansion AnsatzBasis::instantiate(double d, double u0, double u1) const {
    AnsatzExpansion out;
    out.tau = tau;
    for (const auto& row : rows) {
        const double gamma = d * (u0 * row.x_u0 + u1 * row.y_u1);
        if (gamma != 0.0) out.terms.push_back({row.exponent, gamma});
    }
    return out;
}

std::vector<double> AnsatzBasis::exponents() const {
    std::vector<double> mus;
    mus.reserve(rows.size());
    for (const auto& row : rows) mus.push_back(row.exponent);
    return mus;
}

AnsatzExpansion build_ansatz(const IDEProblem& prob, double tau) {
    prob.validate();
    if (!(tau >= 2.0)) throw domain_error("build_ansatz: require tau >= 2");
    return AnsatzBasis::build(prob.alpha, prob.lambda, tau)
        .instantiate(prob.d, prob.u0, prob.u1);
}

double history_integral_type1(const KernelParams& params, double a, double b,
                              const IntegrandSpec& g, double t,
                              const QuadOptions& opts) {
    if (!(a < b)) throw domain_error("history_integral_type1: empty interval");
    if (!(t > a) || t > b * (1.0 + 1e-12))
        throw domain_error("history_integral_type1: t must lie in (a, b]");
    if (g.kind == IntegrandSpec::Kind::monomial) {
        if (a != 0.0)
            throw domain_error("history_integral_type1: monomial integrand is anchored at 0");
        return convolve_monomial(params, g.exponent, t);
    }
    const IntervalBasis cheb{a, b, g.degree};
    const SingularMap map{a, t, opts.map_order};
    return mapped_integrate_singular(
        [&](double s, double to_right) {
            return ml_kernel(params, to_right) * scaled_chebyshev(cheb, g.degree, s);
        },
        map, opts.n);
}

double history_integral_type2(const KernelParams& params, double a, double b,
                              const IntegrandSpec& g, double t,
                              const QuadOptions& opts) {
    if (!(a < b)) throw domain_error("history_integral_type2: empty interval");
    if (!(t > b)) throw domain_error("history_integral_type2: t must exceed b");
    const int r = (t - b < opts.far_switch * (b - a)) ? opts.map_order : 0;
    const SingularMap map{a, b, r};
    const double beyond = t - b;
    if (g.kind == IntegrandSpec::Kind::monomial) {
        return mapped_integrate_singular(
            [&](double s, double to_right) {
                return ml_kernel(params, beyond + to_right) * std::pow(s, g.exponent);
            },
            map, opts.n);
    }
    const IntervalBasis cheb{a, b, g.degree};
    return mapped_integrate_singular(
        [&](double s, double to_right) {
            return ml_kernel(params, beyond + to_right) * scaled_chebyshev(cheb, g.degree, s);
        },
        map, opts.n);
}

KernelWorkspace::KernelWorkspace(const TimeMesh& mesh, const KernelParams& params,
                                 const QuadOptions& opts, std::vector<double> ansatz_exponents)
    : mesh_(mesh), params_(params), opts_(opts), mus_(std::move(ansatz_exponents)),
      birkhoff_(BirkhoffMatrix::build(mesh.degree)),
      transform_(chebyshev_transform_matrix(mesh.degree)) {
    const int n = mesh_.degree;
    const int k_count = mesh_.intervals;
    const int m = static_cast<int>(mus_.size());
    const double h = mesh_.h();
    const double jac = 0.5 * h;
    const QuadratureRule rule = gauss_legendre(opts_.n);

    value_map_ = jac * birkhoff_.entries;

    // Values at all N+1 nodes from the derivative unknowns: row 0 is zero.
    Eigen::MatrixXd btilde = Eigen::MatrixXd::Zero(n + 1, n);
    btilde.bottomRows(n) = value_map_;

    std::vector<double> cheb_vals(n + 1);

    // Type-I moments over [0, tau_i] with the kernel layer at s = tau_i.
    type1_cheb_ = Eigen::MatrixXd::Zero(n, n + 1);
    for (int i = 1; i <= n; ++i) {
        const double tau_i = mesh_.node_offset(i);
        const SingularMap map{0.0, tau_i, opts_.map_order};
        const double c_r = (map.r + 1) * 0.5 * tau_i;
        for (std::size_t q = 0; q < rule.size(); ++q) {
            const double y = rule.nodes[q];
            const double frac = std::pow(0.5 * (1.0 - y), 1 + map.r);
            const double to_right = tau_i * frac; // tau_i - s, cancellation-free
            const double s = tau_i - to_right;
            const double w = c_r * std::pow(0.5 * (1.0 - y), map.r) * rule.weights[q] *
                             ml_kernel(params_, to_right);
            chebyshev_eval_all(n, 2.0 * s / h - 1.0, cheb_vals);
            for (int deg = 0; deg <= n; ++deg)
                type1_cheb_(i - 1, deg) += w * cheb_vals[deg];
        }
    }

    // Exact first-interval ansatz moments.
    type1_ansatz_ = Eigen::MatrixXd::Zero(n, m);
    for (int i = 1; i <= n; ++i) {
        const double tau_i = mesh_.node_offset(i);
        for (int col = 0; col < m; ++col)
            type1_ansatz_(i - 1, col) = convolve_monomial(params_, mus_[col], tau_i);
    }

    // History moments per gap, Chebyshev and ansatz columns sharing the
    // kernel evaluations.  Gap 1 is nearly singular at s = h (mapped rule);
    // larger gaps are smooth (plain Gauss).
    history_cheb_.resize(std::max(0, k_count - 1));
    history_ansatz_.resize(std::max(0, k_count - 1));
    for (int gap = 1; gap <= k_count - 1; ++gap) {
        Eigen::MatrixXd hc = Eigen::MatrixXd::Zero(n, n + 1);
        Eigen::MatrixXd ha = Eigen::MatrixXd::Zero(n, m);
        for (int i = 1; i <= n; ++i) {
            const double dist = (gap - 1) * h + mesh_.node_offset(i);
            const int r = (dist < opts_.far_switch * h) ? opts_.map_order : 0;
            const SingularMap map{0.0, h, r};
            const double c_r = (r + 1) * 0.5 * h;
            for (std::size_t q = 0; q < rule.size(); ++q) {
                const double y = rule.nodes[q];
                const double to_right = h * std::pow(0.5 * (1.0 - y), 1 + r);
                const double s = h - to_right;
                const double w = c_r * std::pow(0.5 * (1.0 - y), r) * rule.weights[q] *
                                 ml_kernel(params_, dist + to_right);
                chebyshev_eval_all(n, 2.0 * s / h - 1.0, cheb_vals);
                for (int deg = 0; deg <= n; ++deg) hc(i - 1, deg) += w * cheb_vals[deg];
                for (int col = 0; col < m; ++col)
                    ha(i - 1, col) += w * std::pow(s, mus_[col]);
            }
        }
        history_cheb_[gap - 1] = std::move(hc);
        history_ansatz_[gap - 1] = std::move(ha);
    }

    memory_map_ = type1_cheb_ * transform_ * btilde;
    memory_const_ = type1_cheb_ * transform_ * Eigen::VectorXd::Ones(n + 1);
}

namespace {

// Column indices of the workspace exponent lattice for each ansatz term.
std::vector<int> match_exponents(const AnsatzExpansion& ansatz,
                                 const std::vector<double>& mus) {
    std::vector<int> cols(ansatz.terms.size(), -1);
    for (std::size_t i = 0; i < ansatz.terms.size(); ++i) {
        for (std::size_t j = 0; j < mus.size(); ++j) {
            if (std::fabs(ansatz.terms[i].exponent - mus[j]) < kExponentMatchTol) {
                cols[i] = static_cast<int>(j);
                break;
            }
        }
        if (cols[i] < 0) {
            std::ostringstream os;
            os << "march: workspace lacks ansatz exponent " << ansatz.terms[i].exponent;
            throw domain_error(os.str());
        }
    }
    return cols;
}

} // namespace

PiecewiseSolution march_with_workspace(const IDEProblem& prob, const KernelWorkspace& ws,
                                       const MarchOptions& opts) {
    prob.validate();
    if (!(opts.tau >= 2.0)) throw domain_error("march: require tau >= 2");
    const TimeMesh& mesh = ws.mesh();
    const int n = mesh.degree;
    const int k_count = mesh.intervals;

    AnsatzExpansion ansatz =
        opts.ansatz ? *opts.ansatz : build_ansatz(prob, opts.tau);
    const std::vector<int> acol = match_exponents(ansatz, ws.ansatz_exponents());
    const int n_terms = static_cast<int>(ansatz.terms.size());

    const double c = prob.c, d = prob.d;
    const Eigen::MatrixXd& vm = ws.value_map();
    const Eigen::MatrixXd& mm = ws.memory_map();
    const Eigen::VectorXd& mc = ws.memory_const();

    // Unknowns per interval: [q0, p0, Dp_1..N, Dq_1..N]; the first two rows
    // pin the left endpoint values, the rest collocate the first-order system.
    // Stiff modes (large c from small mass eigenvalues) get their collocation
    // rows scaled by a power of two; same solution, balanced pivoting.
    const int dim = 2 * (n + 1);
    const double row_scale =
        std::exp2(-std::ceil(std::log2(std::max(1.0, c + d / prob.lambda))));
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(dim, dim);
    a(0, 0) = 1.0;
    a(1, 1) = 1.0;
    for (int i = 1; i <= n; ++i) {
        a(1 + i, 2 + (i - 1)) = row_scale;
        a(1 + i, 0) = row_scale * (c - d * mc(i - 1));
        for (int j = 1; j <= n; ++j)
            a(1 + i, 2 + n + (j - 1)) =
                row_scale * (c * vm(i - 1, j - 1) - d * mm(i - 1, j - 1));
        a(1 + n + i, 2 + n + (i - 1)) = 1.0;
        a(1 + n + i, 1) = -1.0;
        for (int j = 1; j <= n; ++j) a(1 + n + i, 2 + (j - 1)) = -vm(i - 1, j - 1);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > 0.0) || !std::isfinite(rcond)) {
        std::ostringstream os;
        os << "march: singular collocation system (rcond=" << rcond << ")";
        throw numerical_error(os.str());
    }

    PiecewiseSolution sol;
    sol.mesh = mesh;
    sol.ansatz = ansatz;
    sol.condition_estimate = 1.0 / rcond;
    sol.pieces.reserve(k_count);

    Eigen::VectorXd rhs(dim);
    for (int k = 1; k <= k_count; ++k) {
        double q_left, p_left;
        if (k == 1) {
            q_left = prob.u0;
            p_left = prob.u1;
        } else {
            const IntervalSolution& prev = sol.pieces[k - 2];
            const double t_prev = mesh.knot(k - 1);
            q_left = prev.q_vals(n) + (k - 1 == 1 ? ansatz.eval(t_prev) : 0.0);
            p_left = prev.p_vals(n) + (k - 1 == 1 ? ansatz.eval_deriv(t_prev) : 0.0);
        }
        rhs.setZero();
        rhs(0) = q_left;
        rhs(1) = p_left;
        for (int i = 1; i <= n; ++i) {
            double r1 = 0.0;
            if (opts.forcing) r1 += opts.forcing(mesh.node(k, i));
            if (d != 0.0) {
                for (int l = 1; l <= k - 1; ++l) {
                    const int gap = k - l;
                    r1 += d * ws.history_cheb(gap).row(i - 1).dot(sol.pieces[l - 1].q_cheb);
                    if (l == 1) {
                        const Eigen::MatrixXd& ha = ws.history_ansatz(gap);
                        for (int s = 0; s < n_terms; ++s)
                            r1 += d * ansatz.terms[s].coeff * ha(i - 1, acol[s]);
                    }
                }
            }
            if (k == 1 && n_terms > 0) {
                const double tau_i = mesh.node_offset(i);
                if (d != 0.0) {
                    const Eigen::MatrixXd& e1 = ws.type1_ansatz();
                    for (int s = 0; s < n_terms; ++s)
                        r1 += d * ansatz.terms[s].coeff * e1(i - 1, acol[s]);
                }
                r1 -= ansatz.eval_deriv2(tau_i) + c * ansatz.eval(tau_i);
            }
            rhs(1 + i) = row_scale * r1;
        }
        const Eigen::VectorXd x = lu.solve(rhs);
        IntervalSolution piece;
        piece.q_vals = Eigen::VectorXd(n + 1);
        piece.p_vals = Eigen::VectorXd(n + 1);
        piece.q_vals(0) = x(0);
        piece.p_vals(0) = x(1);
        const Eigen::VectorXd dp = x.segment(2, n);
        const Eigen::VectorXd dq = x.segment(2 + n, n);
        piece.q_vals.tail(n) = Eigen::VectorXd::Constant(n, x(0)) + vm * dq;
        piece.p_vals.tail(n) = Eigen::VectorXd::Constant(n, x(1)) + vm * dp;
        piece.q_cheb = ws.transform() * piece.q_vals;
        piece.p_cheb = ws.transform() * piece.p_vals;
        sol.pieces.push_back(std::move(piece));
    }
    return sol;
}

PiecewiseSolution march(const IDEProblem& prob, const TimeMesh& mesh,
                        const MarchOptions& opts) {
    prob.validate();
    if (!(opts.tau >= 2.0)) throw domain_error("march: require tau >= 2");
    std::vector<double> mus;
    if (opts.ansatz) {
        for (const auto& term : opts.ansatz->terms) mus.push_back(term.exponent);
    } else {
        mus = AnsatzBasis::build(prob.alpha, prob.lambda, opts.tau).exponents();
    }
    const KernelWorkspace ws(mesh, prob.kernel(), opts.quad, std::move(mus));
    return march_with_workspace(prob, ws, opts);
}

double PiecewiseSolution::eval_q(double t) const {
    const int k = mesh.interval_of(t);
    const IntervalBasis ib{mesh.knot(k - 1), mesh.knot(k), mesh.degree};
    double x = ib.to_reference(std::min(std::max(t, 0.0), mesh.T));
    x = std::min(1.0, std::max(-1.0, x));
    double v = chebyshev_clenshaw(pieces[k - 1].q_cheb, x);
    if (k == 1) v += ansatz.eval(t);
    return v;
}

double PiecewiseSolution::eval_p(double t) const {
    const int k = mesh.interval_of(t);
    const IntervalBasis ib{mesh.knot(k - 1), mesh.knot(k), mesh.degree};
    double x = ib.to_reference(std::min(std::max(t, 0.0), mesh.T));
    x = std::min(1.0, std::max(-1.0, x));
    double v = chebyshev_clenshaw(pieces[k - 1].p_cheb, x);
    if (k == 1) v += ansatz.eval_deriv(t);
    return v;
}

double PiecewiseSolution::knot_q(int k) const {
    if (k == 0) return pieces[0].q_vals(0);
    double v = pieces[k - 1].q_vals(mesh.degree);
    if (k == 1) v += ansatz.eval(mesh.knot(1));
    return v;
}

double PiecewiseSolution::knot_p(int k) const {
    if (k == 0) return pieces[0].p_vals(0);
    double v = pieces[k - 1].p_vals(mesh.degree);
    if (k == 1) v += ansatz.eval_deriv(mesh.knot(1));
    return v;
}

double hamiltonian(const IDEProblem& prob, const PiecewiseSolution& sol, double t) {
    const double q = sol.eval_q(t);
    const double p = sol.eval_p(t);
    return p * p + prob.hamiltonian_coeff() * q * q;
}

double memory_convolution(const PiecewiseSolution& sol, const KernelWorkspace& ws,
                          double t) {
    if (t <= 0.0) return 0.0;
    const TimeMesh& mesh = ws.mesh();
    const int n = mesh.degree;
    const int k = mesh.interval_of(t);
    const std::vector<int> acol = match_exponents(sol.ansatz, ws.ansatz_exponents());
    const int n_terms = static_cast<int>(sol.ansatz.terms.size());

    const bool at_knot = std::fabs(t - mesh.knot(k)) < 1e-12 * mesh.T;
    if (at_knot) {
        // node N of interval k: all moments are precomputed rows
        double mem = ws.type1_cheb().row(n - 1).dot(sol.pieces[k - 1].q_cheb);
        if (k == 1) {
            for (int s = 0; s < n_terms; ++s)
                mem += sol.ansatz.terms[s].coeff * ws.type1_ansatz()(n - 1, acol[s]);
        }
        for (int l = 1; l <= k - 1; ++l) {
            const int gap = k - l;
            mem += ws.history_cheb(gap).row(n - 1).dot(sol.pieces[l - 1].q_cheb);
            if (l == 1) {
                for (int s = 0; s < n_terms; ++s)
                    mem += sol.ansatz.terms[s].coeff * ws.history_ansatz(gap)(n - 1, acol[s]);
            }
        }
        return mem;
    }

    // general t: per-interval mapped quadrature of kernel * computed solution
    const KernelParams& kp = ws.params();
    const QuadOptions& qo = ws.options();
    double mem = 0.0;
    for (int l = 1; l <= k - 1; ++l) {
        const double a = mesh.knot(l - 1), b = mesh.knot(l);
        const int r = (t - b < qo.far_switch * (b - a)) ? qo.map_order : 0;
        const double beyond = t - b;
        mem += mapped_integrate_singular(
            [&](double s, double to_right) {
                return ml_kernel(kp, beyond + to_right) * sol.eval_q(s);
            },
            SingularMap{a, b, r}, qo.n);
    }
    const double a = mesh.knot(k - 1);
    if (t > a) {
        if (k == 1) {
            // exact enrichment part plus quadrature on the polynomial part
            for (int s = 0; s < n_terms; ++s)
                mem += sol.ansatz.terms[s].coeff *
                       convolve_monomial(kp, sol.ansatz.terms[s].exponent, t);
            const IntervalBasis ib{a, mesh.knot(k), mesh.degree};
            mem += mapped_integrate_singular(
                [&](double s, double to_right) {
                    double x = std::min(1.0, std::max(-1.0, ib.to_reference(s)));
                    return ml_kernel(kp, to_right) *
                           chebyshev_clenshaw(sol.pieces[0].q_cheb, x);
                },
                SingularMap{a, t, qo.map_order}, qo.n);
        } else {
            mem += mapped_integrate_singular(
                [&](double s, double to_right) {
                    return ml_kernel(kp, to_right) * sol.eval_q(s);
                },
                SingularMap{a, t, qo.map_order}, qo.n);
        }
    }
    return mem;
}

OracleSolution integral_form_oracle(const IDEProblem& prob, int m) {
    prob.validate();
    if (m < 16) throw domain_error("integral_form_oracle: require M >= 16");
    const double dt = prob.T / m;
    const double c = prob.c, d = prob.d;
    const KernelParams e3{{prob.alpha, prob.alpha + 3.0}, prob.lambda};
    const KernelParams e4{{prob.alpha, prob.alpha + 4.0}, prob.lambda};
    const KernelParams f1{{prob.alpha, prob.alpha + 1.0}, prob.lambda};
    const KernelParams f2{{prob.alpha, prob.alpha + 2.0}, prob.lambda};

    // antiderivative tables for the ML part of the kernel
    std::vector<double> e3v(m + 1), e4v(m + 1);
    for (int g = 0; g <= m; ++g) {
        e3v[g] = ml_kernel(e3, g * dt);
        e4v[g] = ml_kernel(e4, g * dt);
    }
    // hat-function moments over one cell at gap g:
    //   wl(g), wr(g) multiply z_j, z_{j+1} on cell [t_j, t_{j+1}], g = i - j
    std::vector<double> wl(m + 1), wr(m + 1);
    for (int g = 1; g <= m; ++g) {
        const double j0 = d * (e3v[g] - e3v[g - 1]) - c * dt * dt * (g - 0.5);
        const double j1 = d * (-dt * e3v[g - 1] + e4v[g] - e4v[g - 1]) -
                          c * dt * dt * dt * (g / 2.0 - 1.0 / 3.0);
        wr[g] = j1 / dt;
        wl[g] = j0 - wr[g];
    }

    OracleSolution out;
    out.T = prob.T;
    out.u0 = prob.u0;
    out.u1 = prob.u1;
    out.times.resize(m + 1);
    out.z.resize(m + 1);
    for (int i = 0; i <= m; ++i) out.times[i] = i * dt;

    auto f = [&](double t) {
        if (t == 0.0) return -c * prob.u0;
        return d * prob.u0 * ml_kernel(f1, t) + d * prob.u1 * ml_kernel(f2, t) -
               c * prob.u1 * t - c * prob.u0;
    };
    out.z[0] = f(0.0);
    for (int i = 1; i <= m; ++i) {
        double conv = 0.0;
        for (int j = 0; j <= i - 1; ++j) conv += wl[i - j] * out.z[j];
        for (int j = 1; j <= i - 1; ++j) conv += wr[i - j + 1] * out.z[j];
        out.z[i] = (f(i * dt) + conv) / (1.0 - wr[1]);
    }
    return out;
}

double OracleSolution::eval_u(double t) const {
    if (t < 0.0 || t > T * (1.0 + 1e-12))
        throw domain_error("OracleSolution::eval_u: t outside [0,T]");
    t = std::min(t, T);
    const int m = static_cast<int>(z.size()) - 1;
    const double dt = T / m;
    const int full = std::min(m, static_cast<int>(std::floor(t / dt + 1e-12)));
    double integral = 0.0;
    // full cells: int (t-s) * piecewise-linear z
    for (int j = 0; j < full; ++j) {
        const double dist = t - j * dt;
        integral += z[j] * dt * (0.5 * dist - dt / 6.0) +
                    z[j + 1] * dt * (0.5 * dist - dt / 3.0);
    }
    // partial cell
    const double sm = t - full * dt;
    if (sm > 0.0 && full < m) {
        const double slope = (z[full + 1] - z[full]) / dt;
        integral += z[full] * 0.5 * sm * sm + slope * sm * sm * sm / 6.0;
    }
    return u0 + u1 * t + integral;
}

} // namespace colecole
