#ifndef COLECOLE_TESTS_ML_REFERENCE_HPP
#define COLECOLE_TESTS_ML_REFERENCE_HPP

#include <optional>

namespace colecole_tests {

// Arbitrary-precision Taylor-series reference for E_{alpha,beta}(z), summed
// with MPFR at a precision sized to the cancellation scale exp(ln|z|/alpha).
// Independent of the production evaluator (no shared code path).
// Returns nullopt when the required precision exceeds max_bits; at those
// (small alpha, very negative z) corners the plain series is numerically
// impractical at any fixed budget.
std::optional<double> ml_series_reference(double alpha, double beta, double z,
                                          long max_bits = 8192);

} // namespace colecole_tests

#endif
