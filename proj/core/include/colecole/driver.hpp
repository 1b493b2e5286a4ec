#ifndef COLECOLE_DRIVER_HPP
#define COLECOLE_DRIVER_HPP

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colecole/ide_solver.hpp"
#include "colecole/spatial_galerkin.hpp"

namespace colecole {

// Cole-Cole material constants.  The derived wave/memory coefficients are
//   a = 1/(mu0 eps0 eps_inf),  b = (eps_s - eps_inf)/(mu0 tau^alpha eps0 eps_inf^2),
//   lambda = eps_s/(eps_inf tau^alpha),
// with a - b/lambda = a eps_inf/eps_s > 0 for every admissible configuration.
struct PhysicalConfig {
    double eps0 = 1.0;
    double eps_inf = 1.0;
    double eps_s = 2.0;
    double tau_relax = 1.0;
    double mu0 = 1.0;
    double alpha = 0.6;

    void validate() const;
};

struct Coefficients {
    double a;
    double b;
    double lambda;
    double stability_margin; // a - b/lambda
};

Coefficients derive_coefficients(const PhysicalConfig& cfg);

// Named initial-condition profiles.
struct InitialCondition {
    enum class Kind { square_impulse, sine_product, custom_table } kind =
        Kind::square_impulse;
    // square_impulse(center, width, height)
    double center = 1.0, width = 0.2, height = 1.0;
    // sine_product(kx, ky): product of sin(k pi (coord - lo)) factors
    double kx = 2.0, ky = 0.5;
    // custom_table(file): CSV of x,u rows; piecewise-linear
    std::string file;

    std::function<double(double)> profile_1d(double x_lo, double x_hi) const;
    std::function<double(double, double)> profile_2d(double x_lo, double x_hi,
                                                     double y_lo, double y_hi) const;
    std::vector<double> breakpoints() const;
    void validate(int dim, double x_lo, double x_hi, double y_lo, double y_hi) const;
};

// Full resolved PDE run description.
struct SimulateSpec {
    int dim = 1;
    double x_lo = 0.0, x_hi = 2.0;
    double y_lo = 0.0, y_hi = 2.0;
    int spatial_n = 200;
    double T = 1.5;
    int intervals = 5;
    int colloc = 20;
    double tau = 4.0;
    QuadOptions quad{};
    double alpha = 0.6;
    double lambda = 1.0;
    // exactly one coefficient source
    std::optional<PhysicalConfig> physical;
    std::optional<std::pair<double, double>> direct; // (c, d) i.e. (a, b)
    InitialCondition ic{};
    int snapshot_stride = 1;
    bool dense_output = false;
    int dense_per_interval = 8;
    int output_points = 0; // 0: auto
    bool recover_e = true;
    int threads = 0; // 0: hardware concurrency
    std::string out_dir = "out";

    void validate() const;
};

struct EnergyTrace {
    std::vector<double> times;
    std::vector<double> l2_norm;
    // wave energy ||u_t||^2 + a ||grad u||^2, drained (non-monotonically)
    // by the memory term
    std::vector<double> energy;
    // damped per-mode Hamiltonians p^2 + (c_m - d_m/lambda) q^2
    std::vector<std::vector<double>> mode_hamiltonians; // per time, per mode
};

struct FieldSnapshot {
    double time;
    Eigen::VectorXd u;            // 1D: values on grid; 2D: row-major
    Eigen::VectorXd e_field;      // empty if not recovered
};

struct SimulationResult {
    std::vector<double> grid_x;
    std::vector<double> grid_y; // empty in 1D
    std::vector<FieldSnapshot> snapshots;
    EnergyTrace energy;
    double a, b, lambda, mu0;
    double max_condition_estimate;
    std::vector<std::string> files_written;
};

SimulationResult run_simulation(const SimulateSpec& spec);

// Standalone temporal study of the prototype memory oscillator.
struct IdeSpec {
    double c = 4.0, d = 3.0, lambda = 1.5, alpha = 0.6;
    double u0 = 0.0, u1 = 2.0;
    double T = 20.0;
    int intervals = 20;
    int colloc = 20;
    double tau = 4.0;
    QuadOptions quad{};
    bool dense_output = false;
    int dense_per_interval = 16;
    std::string out_dir = "out";

    void validate() const;
};

struct IdeResult {
    std::vector<double> times, q, p, h;
    double condition_estimate;
    std::vector<std::string> files_written;
};

IdeResult run_ide_study(const IdeSpec& spec);

// Enrichment convergence study on the manufactured fractional-power solution:
// max-node error against N (2 subintervals) and against K (frozen N).
struct ConvergenceSpec {
    double alpha = 0.6, c = 4.0, d = 3.0, lambda = 1.5;
    std::vector<int> n_sweep = {8, 12, 16, 20, 24};
    std::vector<int> k_sweep = {2, 4, 8, 16, 32};
    int frozen_colloc = 9;
    std::vector<double> taus = {2.0, 3.0, 5.0};
    QuadOptions quad{800, 3, 1.0};
    std::string out_dir = "out";

    void validate() const;
};

struct ConvergenceResult {
    // err_n[i][j]: N = n_sweep[i], tau = taus[j]; same layout for err_k
    std::vector<std::vector<double>> err_n;
    std::vector<std::vector<double>> err_k;
    std::vector<int> n_sweep;
    std::vector<int> k_sweep;
    std::vector<double> taus;
    std::vector<std::string> files_written;
};

ConvergenceResult run_convergence_study(const ConvergenceSpec& spec);

// Mapped-quadrature accuracy sweep on the two reference kernel integrals
// (inside-singular and nearly-singular), r = 0 versus r = 3, against the
// exact monomial-convolution values.
struct QuadtestSpec {
    std::vector<int> n_sweep = {8, 12, 16, 20, 24, 28, 32, 40, 48, 56, 64, 80, 96, 112, 128};
    std::string out_dir = "out";
};

struct QuadtestResult {
    struct Row {
        int n;
        double err_inside_r0[2], err_inside_r3[2];   // T_1, T_2 integrands
        double err_nearly_r0[2], err_nearly_r3[2];
    };
    std::vector<Row> rows;
    std::vector<std::string> files_written;
};

QuadtestResult run_quadtest(const QuadtestSpec& spec);

// Electric-field recovery from the auxiliary field:
//   E = a mu0 q(t) - b mu0 int_0^t e_{alpha,alpha}(-lambda(t-s)^alpha) q(s) ds
// applied mode by mode.
double recover_e_modal(const PiecewiseSolution& sol, const KernelWorkspace& ws,
                       double a, double b, double mu0, double t);

// 17-significant-digit decimal formatting used for all CSV output.
std::string format_number(double v);

} // namespace colecole

#endif
