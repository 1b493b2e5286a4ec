#include <doctest.h>

#include <cmath>

#include "colecole/errors.hpp"
#include "colecole/quadrature.hpp"
#include "colecole/special_functions.hpp"
#include "support/ml_reference.hpp"
#include "support/oracles.hpp"

using namespace colecole;
using colecole_tests::convolution_quadrature_reference;
using colecole_tests::ml_series_reference;

TEST_SUITE_BEGIN("special_functions");

TEST_CASE("gamma matches factorials and half-integer values") {
    double fact = 1.0;
    for (int n = 1; n <= 20; ++n) {
        fact *= n;
        CHECK(gamma_fn(n + 1.0) == doctest::Approx(fact).epsilon(5e-14));
    }
    const double sqrt_pi = std::sqrt(M_PI);
    CHECK(gamma_fn(0.5) == doctest::Approx(sqrt_pi).epsilon(1e-14));
    CHECK(gamma_fn(1.5) == doctest::Approx(0.5 * sqrt_pi).epsilon(1e-14));
    CHECK(gamma_fn(2.5) == doctest::Approx(0.75 * sqrt_pi).epsilon(1e-14));
    CHECK(gamma_fn(-0.5) == doctest::Approx(-2.0 * sqrt_pi).epsilon(1e-13));
    CHECK(reciprocal_gamma(-3.0) == 0.0);
    CHECK(reciprocal_gamma(0.0) == 0.0);
    CHECK_THROWS_AS(gamma_fn(-2.0), domain_error);
}

TEST_CASE("mittag_leffler pinned values") {
    CHECK(mittag_leffler(1.0, 1.0, 1.0) ==
          doctest::Approx(2.718281828459045).epsilon(1e-15));
    CHECK(mittag_leffler(0.6, 0.6, 0.0) ==
          doctest::Approx(1.0 / gamma_fn(0.6)).epsilon(1e-14));
    // high-precision series value
    const auto ref = ml_series_reference(0.6, 0.6, -1.0);
    REQUIRE(ref.has_value());
    CHECK(mittag_leffler(0.6, 0.6, -1.0) == doctest::Approx(*ref).epsilon(1e-13));
}

TEST_CASE("mittag_leffler domain and convergence errors") {
    CHECK_THROWS_AS(mittag_leffler(0.0, 1.0, -1.0), domain_error);
    CHECK_THROWS_AS(mittag_leffler(0.5, -1.0, -1.0), domain_error);
    CHECK_THROWS_AS(mittag_leffler(0.5, 1.0, std::nan("")), domain_error);
    // value overflows double: reported, never silently wrong
    CHECK_THROWS_AS(mittag_leffler(0.3, 0.3, 50.0), nonconvergence_error);
}

TEST_CASE("exponential reduction on [-10, 5]") {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double z = -10.0 + 15.0 * i / 200.0;
        worst = std::max(worst, std::fabs(mittag_leffler(1.0, 1.0, z) - std::exp(z)));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("series consistency against the extended-precision oracle") {
    // |ml - reference| <= 1e-12 (relative once |E| > 1), z in [-20, 5];
    // points where the plain series needs more precision than the oracle
    // budget are skipped (severe small-alpha cancellation corners).
    const double ab[] = {0.3, 0.5, 0.6, 0.8, 1.0};
    int checked = 0, skipped = 0;
    for (double alpha : ab)
        for (double beta : ab)
            for (int zi = -20; zi <= 5; ++zi) {
                const double z = zi;
                const auto ref = ml_series_reference(alpha, beta, z);
                if (!ref) {
                    ++skipped;
                    continue;
                }
                ++checked;
                const double v = mittag_leffler(alpha, beta, z);
                CHECK(std::fabs(v - *ref) <= 1e-12 * std::max(1.0, std::fabs(*ref)));
            }
    CHECK(checked > 500);
    CHECK(skipped < 60);
}

TEST_CASE("antiderivative identity: d/dt E_{a,1}(-l t^a) = -l e_{a,a}(-l t^a)") {
    const double step = 1e-5;
    for (double alpha : {0.4, 0.6, 0.9})
        for (double lambda : {0.5, 1.5}) {
            const KernelParams kp{{alpha, alpha}, lambda};
            for (int i = 0; i <= 24; ++i) {
                const double t = 0.1 + (5.0 - 0.1) * i / 24.0;
                auto e1 = [&](double s) {
                    return mittag_leffler(alpha, 1.0, -lambda * std::pow(s, alpha));
                };
                const double fd = (e1(t + step) - e1(t - step)) / (2.0 * step);
                const double exact = -lambda * ml_kernel(kp, t);
                CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
            }
        }
}

TEST_CASE("E_{a,1}(-l t^a) is non-increasing and stays in (0, 1]") {
    for (double alpha : {0.4, 0.6, 0.9}) {
        const double lambda = 1.5;
        double prev = 1.0 + 1e-15;
        for (int i = 0; i <= 1000; ++i) {
            const double t = 10.0 * i / 1000.0;
            const double v = mittag_leffler(alpha, 1.0, -lambda * std::pow(t, alpha));
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-14);
            prev = v;
        }
    }
}

TEST_CASE("kernel reduces to the exponential at alpha = 1") {
    CHECK(ml_kernel({{1.0, 1.0}, 2.0}, 0.5) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("kernel vanishes at t = 0 for beta > 1 and is singular for beta < 1") {
    CHECK(ml_kernel({{0.6, 1.6}, 1.5}, 0.0) == 0.0);
    CHECK_THROWS_AS(ml_kernel({{0.6, 0.6}, 1.5}, 0.0), singular_evaluation_error);
    CHECK_THROWS_AS(ml_kernel({{0.6, 0.6}, 1.5}, -0.1), domain_error);
}

TEST_CASE("kernel value against the series oracle") {
    const double alpha = 0.6, lambda = 1.5, t = 0.25;
    const auto ref = ml_series_reference(alpha, alpha, -lambda * std::pow(t, alpha));
    REQUIRE(ref.has_value());
    CHECK(ml_kernel({{alpha, alpha}, lambda}, t) ==
          doctest::Approx(std::pow(t, alpha - 1.0) * *ref).epsilon(1e-13));
}

TEST_CASE("monomial convolution closed forms") {
    const KernelParams kp{{0.6, 0.6}, 1.3};
    // r = 0 and r = 1 reduce to the first and second kernel antiderivatives
    for (double t : {0.4, 1.7}) {
        CHECK(convolve_monomial(kp, 0.0, t) ==
              doctest::Approx(ml_kernel({{0.6, 1.6}, 1.3}, t)).epsilon(1e-14));
        CHECK(convolve_monomial(kp, 1.0, t) ==
              doctest::Approx(ml_kernel({{0.6, 2.6}, 1.3}, t)).epsilon(1e-14));
    }
    // alpha = 1: int_0^1 exp(-(1-s)) ds = 1 - exp(-1)
    CHECK(convolve_monomial({{1.0, 1.0}, 1.0}, 0.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
    CHECK_THROWS_AS(convolve_monomial(kp, -1.0, 1.0), domain_error);
}

TEST_CASE("monomial convolution agrees with mapped quadrature") {
    for (double alpha : {0.4, 0.6, 0.9})
        for (double r : {0.0, 0.6, 1.0, 2.2})
            for (double t : {0.7, 1.3}) {
                const KernelParams kp{{alpha, alpha}, 1.5};
                const double exact = convolve_monomial(kp, r, t);
                const double quad = convolution_quadrature_reference(kp, r, t);
                CHECK(quad == doctest::Approx(exact).epsilon(1e-8));
            }
}

TEST_CASE("kernel integral drop") {
    const KernelParams kp1{{1.0, 1.0}, 2.0};
    CHECK(ml_kernel_integral(kp1, 0.3, 0.3) == 0.0);
    CHECK(ml_kernel_integral(kp1, 0.0, 1.0) ==
          doctest::Approx(0.5 * (1.0 - std::exp(-2.0))).epsilon(1e-14));
    CHECK_THROWS_AS(ml_kernel_integral(kp1, 1.0, 0.5), domain_error);

    // cross-check against direct quadrature of the kernel on [0.3, 0.7]
    const KernelParams kp{{0.6, 0.6}, 1.5};
    const double drop = ml_kernel_integral(kp, 0.3, 0.7);
    CHECK(drop >= 0.0);
    const double quad = colecole::mapped_integrate(
        [&](double s) { return ml_kernel(kp, s); }, colecole::SingularMap{0.3, 0.7, 0},
        64);
    CHECK(drop == doctest::Approx(quad).epsilon(1e-10));
}

TEST_SUITE_END();
