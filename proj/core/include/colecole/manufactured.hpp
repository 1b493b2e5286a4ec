#ifndef COLECOLE_MANUFACTURED_HPP
#define COLECOLE_MANUFACTURED_HPP

#include "colecole/ide_solver.hpp"

namespace colecole {

// Benchmark problem with the prescribed solution
//   u(t) = t^{2+alpha} + t^{3+2alpha} + sgn(1-t) (t-1)^5   on [0, 2],
// driven through the memory equation by the exactly computed source
//   g = u'' + c u - d int_0^t e_{alpha,alpha}(-lambda (t-s)^alpha) u ds.
// The two fractional powers mimic the leading singular behaviour at t = 0;
// extraction thresholds tau = 2 / 3 / 5 enrich with none / one / both.
struct ManufacturedProblem {
    double c;
    double d;
    double lambda;
    double alpha;

    IDEProblem problem(double T = 2.0) const;
    double exact_q(double t) const;
    double exact_p(double t) const;
    // exact memory integral of the prescribed solution
    double memory(double t) const;
    double forcing(double t) const;
    // the fractional-power part, filtered by exponent < tau
    AnsatzExpansion ansatz(double tau) const;
    std::vector<double> singular_exponents() const;
};

} // namespace colecole

#endif
