#include "colecole/driver.hpp"
#include "colecole/config.hpp"
#include "colecole/errors.hpp"
#include "colecole/manufactured.hpp"
#include "colecole/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

namespace colecole {

namespace {
constexpr double kPi = 3.14159265358979323846264338327950288;

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw numerical_error("cannot open output file: " + path.string());
    return out;
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

std::vector<double> uniform_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
    return g;
}

} // namespace

void PhysicalConfig::validate() const {
    if (!(eps0 > 0.0)) throw config_error("PhysicalConfig: require eps0 > 0");
    if (!(mu0 > 0.0)) throw config_error("PhysicalConfig: require mu0 > 0");
    if (!(eps_inf >= 1.0)) throw config_error("PhysicalConfig: require eps_inf >= 1");
    if (!(eps_s >= eps_inf))
        throw config_error("PhysicalConfig: require eps_s >= eps_inf");
    if (!(tau_relax > 0.0)) throw config_error("PhysicalConfig: require tau_relax > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("PhysicalConfig: require 0 < alpha < 1");
}

Coefficients derive_coefficients(const PhysicalConfig& cfg) {
    cfg.validate();
    const double tau_a = std::pow(cfg.tau_relax, cfg.alpha);
    const double a = 1.0 / (cfg.mu0 * cfg.eps0 * cfg.eps_inf);
    const double b = (cfg.eps_s - cfg.eps_inf) /
                     (cfg.mu0 * tau_a * cfg.eps0 * cfg.eps_inf * cfg.eps_inf);
    const double lambda = cfg.eps_s / (cfg.eps_inf * tau_a);
    return {a, b, lambda, a - b / lambda};
}

std::function<double(double)> InitialCondition::profile_1d(double x_lo, double x_hi) const {
    switch (kind) {
        case Kind::square_impulse: {
            const double lo = center - 0.5 * width, hi = center + 0.5 * width;
            const double h = height;
            return [lo, hi, h](double x) { return (x >= lo && x <= hi) ? h : 0.0; };
        }
        case Kind::sine_product: {
            const double k = kx;
            return [k, x_lo](double x) { return std::sin(k * kPi * (x - x_lo)); };
        }
        case Kind::custom_table: {
            std::ifstream in(file);
            if (!in) throw config_error("custom_table: cannot open " + file);
            auto xs = std::make_shared<std::vector<double>>();
            auto us = std::make_shared<std::vector<double>>();
            double x, u;
            char comma;
            while (in >> x >> comma >> u) {
                xs->push_back(x);
                us->push_back(u);
            }
            if (xs->size() < 2) throw config_error("custom_table: need at least 2 rows");
            if (!std::is_sorted(xs->begin(), xs->end()))
                throw config_error("custom_table: x column must ascend");
            return [xs, us](double xq) {
                if (xq <= xs->front()) return us->front();
                if (xq >= xs->back()) return us->back();
                const auto it = std::upper_bound(xs->begin(), xs->end(), xq);
                const std::size_t i = it - xs->begin();
                const double w = (xq - (*xs)[i - 1]) / ((*xs)[i] - (*xs)[i - 1]);
                return (1.0 - w) * (*us)[i - 1] + w * (*us)[i];
            };
        }
    }
    throw config_error("InitialCondition: unknown profile");
}

std::function<double(double, double)> InitialCondition::profile_2d(double x_lo, double,
                                                                   double y_lo, double) const {
    if (kind != Kind::sine_product)
        throw config_error("2D runs support the sine_product profile only");
    const double k1 = kx, k2 = ky;
    return [k1, k2, x_lo, y_lo](double x, double y) {
        return std::sin(k1 * kPi * (x - x_lo)) * std::sin(k2 * kPi * (y - y_lo));
    };
}

std::vector<double> InitialCondition::breakpoints() const {
    if (kind == Kind::square_impulse)
        return {center - 0.5 * width, center + 0.5 * width};
    if (kind == Kind::custom_table && !file.empty()) {
        std::ifstream in(file);
        std::vector<double> xs;
        double x, u;
        char comma;
        while (in >> x >> comma >> u) xs.push_back(x);
        return xs;
    }
    return {};
}

void InitialCondition::validate(int dim, double x_lo, double x_hi, double y_lo,
                                double y_hi) const {
    if (kind == Kind::square_impulse) {
        if (!(width > 0.0)) throw config_error("square_impulse: require width > 0");
        if (center - 0.5 * width < x_lo || center + 0.5 * width > x_hi)
            throw config_error("square_impulse: support leaves the domain");
        if (dim == 2)
            throw config_error("2D runs support the sine_product profile only");
    }
    if (kind == Kind::sine_product) {
        // homogeneous boundary values need k (hi - lo) integral
        const double nx = kx * (x_hi - x_lo);
        if (std::fabs(nx - std::round(nx)) > 1e-9)
            throw config_error("sine_product: kx * domain length must be an integer");
        if (dim == 2) {
            const double ny = ky * (y_hi - y_lo);
            if (std::fabs(ny - std::round(ny)) > 1e-9)
                throw config_error("sine_product: ky * domain length must be an integer");
        }
    }
    if (kind == Kind::custom_table) {
        if (dim == 2) throw config_error("2D runs support the sine_product profile only");
        if (file.empty()) throw config_error("custom_table: ic_file is required");
    }
}

void SimulateSpec::validate() const {
    if (dim != 1 && dim != 2) throw config_error("simulate: dim must be 1 or 2");
    if (!(x_lo < x_hi)) throw config_error("simulate: require x_min < x_max");
    if (dim == 2 && !(y_lo < y_hi)) throw config_error("simulate: require y_min < y_max");
    if (dim == 2 &&
        std::fabs((x_hi - x_lo) - (y_hi - y_lo)) > 1e-12 * (x_hi - x_lo))
        throw config_error("simulate: 2D runs require a square domain");
    if (spatial_n < 2) throw config_error("simulate: require spatial_n >= 2");
    if (!(T > 0.0)) throw config_error("simulate: require T > 0");
    if (intervals < 1) throw config_error("simulate: require intervals >= 1");
    if (colloc < 1) throw config_error("simulate: require colloc >= 1");
    if (!(tau >= 2.0)) throw config_error("simulate: require tau >= 2");
    if (quad.n < 1 || quad.map_order < 0)
        throw config_error("simulate: bad quadrature options");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("simulate: require 0 < alpha < 1");
    if (!physical && !(lambda > 0.0)) throw config_error("simulate: require lambda > 0");
    if (static_cast<bool>(physical) == static_cast<bool>(direct))
        throw config_error("simulate: exactly one coefficient source required");
    if (direct && (!(direct->first > 0.0) || direct->second < 0.0))
        throw config_error("simulate: require c > 0 and d >= 0");
    if (snapshot_stride < 1 || intervals % snapshot_stride != 0)
        throw config_error("simulate: snapshot_stride must divide the interval count");
    if (dense_output && dense_per_interval < 2)
        throw config_error("simulate: dense_per_interval must be >= 2");
    ic.validate(dim, x_lo, x_hi, y_lo, y_hi);
}

void IdeSpec::validate() const {
    IDEProblem{c, d, lambda, alpha, u0, u1, T}.validate();
    if (intervals < 1 || colloc < 1) throw config_error("ide: bad mesh sizes");
    if (!(tau >= 2.0)) throw config_error("ide: require tau >= 2");
    if (quad.n < 1 || quad.map_order < 0) throw config_error("ide: bad quadrature options");
}

void ConvergenceSpec::validate() const {
    IDEProblem{c, d, lambda, alpha, 0.0, 0.0, 2.0}.validate();
    if (n_sweep.empty() || k_sweep.empty() || taus.empty())
        throw config_error("convergence: empty sweep");
    for (int n : n_sweep)
        if (n < 6) throw config_error("convergence: collocation degrees must be >= 6");
    for (int k : k_sweep)
        if (k < 2 || k % 2 != 0)
            throw config_error("convergence: interval counts must be even (knot at the kink)");
    for (double t : taus)
        if (!(t >= 2.0)) throw config_error("convergence: require tau >= 2");
    if (frozen_colloc < 6) throw config_error("convergence: frozen_colloc must be >= 6");
}

namespace {

// Everything shared by the snapshot/energy evaluation of one PDE run.
struct ModalRun {
    std::vector<PiecewiseSolution> solutions;
    double max_condition = 0.0;
};

ModalRun march_all(const std::vector<IDEProblem>& modes, const KernelWorkspace& ws,
                   double tau, int threads) {
    ModalRun run;
    run.solutions.resize(modes.size());
    std::vector<double> conds(modes.size(), 0.0);
    parallel_for(static_cast<int>(modes.size()), threads, [&](int i) {
        MarchOptions opts;
        opts.tau = tau;
        run.solutions[i] = march_with_workspace(modes[i], ws, opts);
        conds[i] = run.solutions[i].condition_estimate;
    });
    run.max_condition = *std::max_element(conds.begin(), conds.end());
    return run;
}

std::vector<double> snapshot_times(const TimeMesh& mesh, int stride, bool dense,
                                   int per_interval) {
    std::vector<double> times{0.0};
    for (int k = stride; k <= mesh.intervals; k += stride) times.push_back(mesh.knot(k));
    if (dense) {
        for (int k = 1; k <= mesh.intervals; ++k)
            for (int j = 1; j < per_interval; ++j)
                times.push_back(mesh.knot(k - 1) + mesh.h() * j / per_interval);
        std::sort(times.begin(), times.end());
    }
    return times;
}

} // namespace

double recover_e_modal(const PiecewiseSolution& sol, const KernelWorkspace& ws,
                       double a, double b, double mu0, double t) {
    double e = a * mu0 * sol.eval_q(t);
    if (b != 0.0) e -= b * mu0 * memory_convolution(sol, ws, t);
    return e;
}

SimulationResult run_simulation(const SimulateSpec& spec) {
    spec.validate();
    SimulationResult result;

    double a, b, lambda, mu0;
    if (spec.physical) {
        PhysicalConfig cfg = *spec.physical;
        cfg.alpha = spec.alpha;
        const Coefficients co = derive_coefficients(cfg);
        a = co.a;
        b = co.b;
        lambda = co.lambda;
        mu0 = cfg.mu0;
    } else {
        a = spec.direct->first;
        b = spec.direct->second;
        lambda = spec.lambda;
        mu0 = 1.0;
    }
    result.a = a;
    result.b = b;
    result.lambda = lambda;
    result.mu0 = mu0;

    const double len = spec.x_hi - spec.x_lo;
    const double scale = 2.0 / len; // reference-interval Laplacian factor
    const double a_eff = a * scale * scale;
    const double b_eff = b * scale * scale;

    const TimeMesh mesh(spec.T, spec.intervals, spec.colloc);
    const KernelParams kernel{{spec.alpha, spec.alpha}, lambda};
    const AnsatzBasis abasis = AnsatzBasis::build(spec.alpha, lambda, spec.tau);
    const KernelWorkspace ws(mesh, kernel, spec.quad, abasis.exponents());

    const ShenBasis basis(spec.spatial_n, spec.x_lo, spec.x_hi);
    const Eigen::MatrixXd mass = shen_mass_matrix(spec.spatial_n);
    const ModalDecomposition decomp = sym_eigen(mass);

    const std::vector<double> times =
        snapshot_times(mesh, spec.snapshot_stride, spec.dense_output,
                       spec.dense_per_interval);

    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path out_dir(spec.out_dir);

    if (spec.dim == 1) {
        const Eigen::VectorXd u0_hat =
            project_initial(spec.ic.profile_1d(spec.x_lo, spec.x_hi), basis,
                            spec.ic.breakpoints());
        const Eigen::VectorXd u1_hat = Eigen::VectorXd::Zero(basis.num_modes());
        const std::vector<IDEProblem> modes =
            decouple_1d(a_eff, b_eff, lambda, spec.alpha, u0_hat, u1_hat, decomp, spec.T);
        const ModalRun run = march_all(modes, ws, spec.tau, spec.threads);
        result.max_condition_estimate = run.max_condition;
        const int m = static_cast<int>(modes.size());

        const int pts = spec.output_points > 0
                            ? spec.output_points
                            : std::min(2 * spec.spatial_n + 1, 513);
        result.grid_x = uniform_grid(spec.x_lo, spec.x_hi, pts);

        for (double t : times) {
            Eigen::VectorXd v(m), e_modal(m);
            for (int i = 0; i < m; ++i) {
                v(i) = run.solutions[i].eval_q(t);
                if (spec.recover_e)
                    e_modal(i) = recover_e_modal(run.solutions[i], ws, a, b, mu0, t);
            }
            FieldSnapshot snap;
            snap.time = t;
            snap.u = reconstruct(decomp.eigvecs * v, basis, result.grid_x);
            if (spec.recover_e)
                snap.e_field = reconstruct(decomp.eigvecs * e_modal, basis, result.grid_x);
            result.snapshots.push_back(std::move(snap));
        }

        // energy trace at every knot
        for (int k = 0; k <= mesh.intervals; ++k) {
            const double t = mesh.knot(k);
            double l2sq = 0.0, kin = 0.0, grad = 0.0;
            std::vector<double> hs(m);
            for (int i = 0; i < m; ++i) {
                const double q = run.solutions[i].eval_q(t);
                const double p = run.solutions[i].eval_p(t);
                l2sq += decomp.eigenvalues(i) * q * q;
                kin += decomp.eigenvalues(i) * p * p;
                grad += q * q;
                hs[i] = p * p + modes[i].hamiltonian_coeff() * q * q;
            }
            result.energy.times.push_back(t);
            result.energy.l2_norm.push_back(std::sqrt(0.5 * len * l2sq));
            // wave energy ||u_t||^2 + a ||grad u||^2; the memory term only
            // drains it, so it stays below its initial value
            result.energy.energy.push_back(0.5 * len * kin + a * scale * grad);
            result.energy.mode_hamiltonians.push_back(std::move(hs));
        }
    } else {
        const Eigen::MatrixXd u0_hat = project_initial_2d(
            spec.ic.profile_2d(spec.x_lo, spec.x_hi, spec.y_lo, spec.y_hi), basis, basis);
        const Eigen::MatrixXd u1_hat =
            Eigen::MatrixXd::Zero(basis.num_modes(), basis.num_modes());
        const Modal2D modal =
            decouple_2d(a_eff, b_eff, lambda, spec.alpha, u0_hat, u1_hat, decomp, spec.T);
        const ModalRun run = march_all(modal.problems, ws, spec.tau, spec.threads);
        result.max_condition_estimate = run.max_condition;
        const int m = modal.n;

        const int pts = spec.output_points > 0 ? spec.output_points
                                               : std::min(2 * spec.spatial_n + 1, 65);
        result.grid_x = uniform_grid(spec.x_lo, spec.x_hi, pts);
        result.grid_y = uniform_grid(spec.y_lo, spec.y_hi, pts);

        for (double t : times) {
            Eigen::MatrixXd w(m, m), e_modal(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const auto& sol = run.solutions[i * m + j];
                    w(i, j) = sol.eval_q(t);
                    if (spec.recover_e)
                        e_modal(i, j) = recover_e_modal(sol, ws, a, b, mu0, t);
                }
            FieldSnapshot snap;
            snap.time = t;
            const Eigen::MatrixXd u_hat =
                decomp.eigvecs * w * decomp.eigvecs.transpose();
            const Eigen::MatrixXd grid_u =
                reconstruct_2d(u_hat, basis, basis, result.grid_x, result.grid_y);
            snap.u = Eigen::Map<const Eigen::VectorXd>(grid_u.data(), grid_u.size());
            if (spec.recover_e) {
                const Eigen::MatrixXd e_hat =
                    decomp.eigvecs * e_modal * decomp.eigvecs.transpose();
                const Eigen::MatrixXd grid_e =
                    reconstruct_2d(e_hat, basis, basis, result.grid_x, result.grid_y);
                snap.e_field = Eigen::Map<const Eigen::VectorXd>(grid_e.data(), grid_e.size());
            }
            result.snapshots.push_back(std::move(snap));
        }

        for (int k = 0; k <= mesh.intervals; ++k) {
            const double t = mesh.knot(k);
            double l2sq = 0.0, kin = 0.0, grad = 0.0;
            std::vector<double> hs(m * m);
            const double cell = 0.25 * len * len; // (Lx/2)(Ly/2)
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    const auto& sol = run.solutions[i * m + j];
                    const double q = sol.eval_q(t);
                    const double p = sol.eval_p(t);
                    const double li = decomp.eigenvalues(i), lj = decomp.eigenvalues(j);
                    l2sq += li * lj * q * q;
                    kin += li * lj * p * p;
                    grad += (li + lj) * q * q;
                    hs[i * m + j] =
                        p * p + modal.problems[i * m + j].hamiltonian_coeff() * q * q;
                }
            result.energy.times.push_back(t);
            result.energy.l2_norm.push_back(std::sqrt(cell * l2sq));
            result.energy.energy.push_back(cell * kin + a * grad);
            result.energy.mode_hamiltonians.push_back(std::move(hs));
        }
    }

    // ---- files ----
    for (const auto& snap : result.snapshots) {
        const std::string name = "field_" + time_tag(snap.time) + ".csv";
        auto out = open_output(out_dir / name);
        const bool with_e = snap.e_field.size() > 0;
        if (spec.dim == 1) {
            out << (with_e ? "x,u,E\n" : "x,u\n");
            for (std::size_t i = 0; i < result.grid_x.size(); ++i) {
                out << format_number(result.grid_x[i]) << ',' << format_number(snap.u(i));
                if (with_e) out << ',' << format_number(snap.e_field(i));
                out << '\n';
            }
        } else {
            out << (with_e ? "x,y,u,E\n" : "x,y,u\n");
            for (std::size_t i = 0; i < result.grid_x.size(); ++i)
                for (std::size_t j = 0; j < result.grid_y.size(); ++j) {
                    const std::size_t idx = i + result.grid_x.size() * j;
                    out << format_number(result.grid_x[i]) << ','
                        << format_number(result.grid_y[j]) << ','
                        << format_number(snap.u(idx));
                    if (with_e) out << ',' << format_number(snap.e_field(idx));
                    out << '\n';
                }
        }
        result.files_written.push_back(name);
    }
    {
        auto out = open_output(out_dir / "energy.csv");
        out << "t,l2_norm,hamiltonian\n";
        for (std::size_t i = 0; i < result.energy.times.size(); ++i)
            out << format_number(result.energy.times[i]) << ','
                << format_number(result.energy.l2_norm[i]) << ','
                << format_number(result.energy.energy[i]) << '\n';
        result.files_written.push_back("energy.csv");
    }
    {
        auto out = open_output(out_dir / "run.json");
        out << simulate_run_json(spec, result);
        result.files_written.push_back("run.json");
    }
    return result;
}

IdeResult run_ide_study(const IdeSpec& spec) {
    spec.validate();
    const IDEProblem prob{spec.c, spec.d, spec.lambda, spec.alpha,
                          spec.u0, spec.u1, spec.T};
    const TimeMesh mesh(spec.T, spec.intervals, spec.colloc);
    MarchOptions opts;
    opts.tau = spec.tau;
    opts.quad = spec.quad;
    const PiecewiseSolution sol = march(prob, mesh, opts);

    IdeResult result;
    result.condition_estimate = sol.condition_estimate;
    const std::vector<double> times =
        snapshot_times(mesh, 1, spec.dense_output, spec.dense_per_interval);
    for (double t : times) {
        result.times.push_back(t);
        result.q.push_back(sol.eval_q(t));
        result.p.push_back(sol.eval_p(t));
        result.h.push_back(hamiltonian(prob, sol, t));
    }

    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path out_dir(spec.out_dir);
    {
        auto out = open_output(out_dir / "trace.csv");
        out << "t,q,p,H\n";
        for (std::size_t i = 0; i < result.times.size(); ++i)
            out << format_number(result.times[i]) << ',' << format_number(result.q[i])
                << ',' << format_number(result.p[i]) << ','
                << format_number(result.h[i]) << '\n';
        result.files_written.push_back("trace.csv");
    }
    {
        auto out = open_output(out_dir / "run.json");
        out << ide_run_json(spec, result);
        result.files_written.push_back("run.json");
    }
    return result;
}

namespace {

double manufactured_max_node_error(const ManufacturedProblem& mp, int intervals,
                                   int degree, double tau, const QuadOptions& quad) {
    const IDEProblem prob = mp.problem();
    const TimeMesh mesh(prob.T, intervals, degree);
    MarchOptions opts;
    opts.tau = tau;
    opts.quad = quad;
    opts.ansatz = mp.ansatz(tau);
    opts.forcing = [&mp](double t) { return mp.forcing(t); };
    // workspace exponents: full singular set, shared across taus
    const KernelWorkspace ws(mesh, prob.kernel(), quad, mp.singular_exponents());
    const PiecewiseSolution sol = march_with_workspace(prob, ws, opts);
    double worst = 0.0;
    for (int k = 1; k <= intervals; ++k)
        for (int i = 0; i <= degree; ++i) {
            const double t = mesh.node(k, i);
            const double qn = sol.pieces[k - 1].q_vals(i) +
                              (k == 1 ? sol.ansatz.eval(t) : 0.0);
            worst = std::max(worst, std::fabs(qn - mp.exact_q(t)));
        }
    return worst;
}

} // namespace

ConvergenceResult run_convergence_study(const ConvergenceSpec& spec) {
    spec.validate();
    const ManufacturedProblem mp{spec.c, spec.d, spec.lambda, spec.alpha};
    ConvergenceResult result;
    result.n_sweep = spec.n_sweep;
    result.k_sweep = spec.k_sweep;
    result.taus = spec.taus;

    for (int n : spec.n_sweep) {
        std::vector<double> row;
        for (double tau : spec.taus)
            row.push_back(manufactured_max_node_error(mp, 2, n, tau, spec.quad));
        result.err_n.push_back(std::move(row));
    }
    for (int k : spec.k_sweep) {
        std::vector<double> row;
        for (double tau : spec.taus)
            row.push_back(
                manufactured_max_node_error(mp, k, spec.frozen_colloc, tau, spec.quad));
        result.err_k.push_back(std::move(row));
    }

    std::filesystem::create_directories(spec.out_dir);
    const std::filesystem::path out_dir(spec.out_dir);
    auto write_table = [&](const std::string& name, const std::string& col,
                           const std::vector<int>& sweep,
                           const std::vector<std::vector<double>>& err) {
        auto out = open_output(out_dir / name);
        out << col;
        for (double tau : spec.taus) out << ",err_tau" << time_tag(tau);
        out << '\n';
        for (std::size_t i = 0; i < sweep.size(); ++i) {
            out << sweep[i];
            for (std::size_t j = 0; j < spec.taus.size(); ++j)
                out << ',' << format_number(err[i][j]);
            out << '\n';
        }
        result.files_written.push_back(name);
    };
    write_table("convergence_n.csv", "N", spec.n_sweep, result.err_n);
    write_table("convergence_k.csv", "K", spec.k_sweep, result.err_k);
    {
        auto out = open_output(out_dir / "run.json");
        out << convergence_run_json(spec);
        result.files_written.push_back("run.json");
    }
    return result;
}

namespace {

// polynomial coefficients (in s) of T_n mapped onto [0, L], n <= 2
std::vector<double> scaled_cheb_monomials(int n, double len) {
    // x = 2 s / len - 1
    const std::vector<double> x{-1.0, 2.0 / len};
    if (n == 0) return {1.0};
    if (n == 1) return x;
    // T_2 = 2 x^2 - 1
    return {2.0 * x[0] * x[0] - 1.0, 4.0 * x[0] * x[1], 2.0 * x[1] * x[1]};
}

} // namespace

QuadtestResult run_quadtest(const QuadtestSpec& spec) {
    const double alpha = 0.6;
    const KernelParams kp{{alpha, alpha}, 1.0};
    QuadtestResult result;

    // case (i): evaluation point at the right endpoint of (0, 0.7)
    const double t_in = 0.7;
    // case (ii): evaluation point just past the right endpoint of (0, 1)
    const double t_near = 1.01, b_near = 1.0;

    double exact_inside[2], exact_nearly[2];
    for (int n = 1; n <= 2; ++n) {
        double v = 0.0;
        for (std::size_t m_i = 0; m_i < scaled_cheb_monomials(n, t_in).size(); ++m_i)
            v += scaled_cheb_monomials(n, t_in)[m_i] *
                 convolve_monomial(kp, static_cast<double>(m_i), t_in);
        exact_inside[n - 1] = v;

        // int_0^1 = int_0^{1.01} - int_1^{1.01}; the latter in powers of (s-1)
        const std::vector<double> mono = scaled_cheb_monomials(n, b_near);
        double full = 0.0, tail = 0.0;
        for (std::size_t m_i = 0; m_i < mono.size(); ++m_i) {
            full += mono[m_i] * convolve_monomial(kp, static_cast<double>(m_i), t_near);
            // s^m = sum_j binom(m,j) (s-1)^j
            for (std::size_t jj = 0; jj <= m_i; ++jj) {
                double binom = 1.0;
                for (std::size_t q = 0; q < jj; ++q)
                    binom = binom * (m_i - q) / (q + 1);
                KernelParams shifted = kp;
                shifted.index.beta = alpha + jj + 1.0;
                tail += mono[m_i] * binom * gamma_fn(jj + 1.0) *
                        ml_kernel(shifted, t_near - b_near);
            }
        }
        exact_nearly[n - 1] = full - tail;
    }

    for (int nq : spec.n_sweep) {
        QuadtestResult::Row row{};
        row.n = nq;
        for (int n = 1; n <= 2; ++n) {
            const IntervalBasis cheb_in{0.0, t_in, 2};
            auto f_in = [&](double s, double to_right) {
                return ml_kernel(kp, to_right) * scaled_chebyshev(cheb_in, n, s);
            };
            const IntervalBasis cheb_near{0.0, b_near, 2};
            const double beyond = t_near - b_near;
            auto f_near = [&](double s, double to_right) {
                return ml_kernel(kp, beyond + to_right) * scaled_chebyshev(cheb_near, n, s);
            };
            row.err_inside_r0[n - 1] =
                std::fabs(mapped_integrate_singular(f_in, SingularMap{0.0, t_in, 0}, nq) -
                          exact_inside[n - 1]);
            row.err_inside_r3[n - 1] =
                std::fabs(mapped_integrate_singular(f_in, SingularMap{0.0, t_in, 3}, nq) -
                          exact_inside[n - 1]);
            row.err_nearly_r0[n - 1] =
                std::fabs(mapped_integrate_singular(f_near, SingularMap{0.0, b_near, 0}, nq) -
                          exact_nearly[n - 1]);
            row.err_nearly_r3[n - 1] =
                std::fabs(mapped_integrate_singular(f_near, SingularMap{0.0, b_near, 3}, nq) -
                          exact_nearly[n - 1]);
        }
        result.rows.push_back(row);
    }

    std::filesystem::create_directories(spec.out_dir);
    {
        auto out = open_output(std::filesystem::path(spec.out_dir) / "quadtest.csv");
        out << "n,inside_T1_r0,inside_T1_r3,inside_T2_r0,inside_T2_r3,"
               "nearly_T1_r0,nearly_T1_r3,nearly_T2_r0,nearly_T2_r3\n";
        for (const auto& row : result.rows) {
            out << row.n;
            out << ',' << format_number(row.err_inside_r0[0]) << ','
                << format_number(row.err_inside_r3[0]) << ','
                << format_number(row.err_inside_r0[1]) << ','
                << format_number(row.err_inside_r3[1]) << ','
                << format_number(row.err_nearly_r0[0]) << ','
                << format_number(row.err_nearly_r3[0]) << ','
                << format_number(row.err_nearly_r0[1]) << ','
                << format_number(row.err_nearly_r3[1]) << '\n';
        }
        result.files_written.push_back("quadtest.csv");
    }
    {
        auto out = open_output(std::filesystem::path(spec.out_dir) / "run.json");
        out << quadtest_run_json(spec);
        result.files_written.push_back("run.json");
    }
    return result;
}

} // namespace colecole
