#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "perilib/error.hpp"
#include "perilib/kepler.hpp"

using namespace perilib;
using std::numbers::pi;

TEST_SUITE("kepler") {
TEST_CASE("circular orbit is the identity") {
    CHECK(solve_kepler(0.0, 1.2).xi == doctest::Approx(1.2).epsilon(1e-15));
}

TEST_CASE("apocenter is a fixed point") {
    CHECK(std::abs(solve_kepler(0.5, pi).xi - pi) < 1e-14);
}

TEST_CASE("high eccentricity matches bisection") {
    const double xi = solve_kepler(0.9, 1.0).xi;
    CHECK(std::abs(xi - oracle::kepler(0.9, 1.0)) < 1e-13);
    CHECK(std::abs(xi - 1.8620866868745323) < 1e-13);  // frozen reference
}

TEST_CASE("residual below 1e-13 on a dense grid") {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double e = 0.99 * i / 99.0;
        for (int j = 0; j < 100; ++j) {
            const double ell = 2.0 * pi * j / 100.0;
            const auto s = solve_kepler(e, ell);
            worst = std::max(worst, std::abs(s.xi - e * std::sin(s.xi) - ell));
        }
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("odd symmetry about pi") {
    auto g = oracle::rng(11);
    for (int i = 0; i < 200; ++i) {
        const double e = oracle::uniform(g, 0.0, 0.99);
        const double ell = oracle::uniform(g, 0.01, 2.0 * pi - 0.01);
        const double a = solve_kepler(e, 2.0 * pi - ell).xi;
        const double b = 2.0 * pi - solve_kepler(e, ell).xi;
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("eccentricity outside [0, 1) is rejected") {
    CHECK_THROWS_AS(solve_kepler(1.0, 0.3), DomainError);
    CHECK_THROWS_AS(solve_kepler(-0.1, 0.3), DomainError);
}

TEST_CASE("zero-eccentricity form") {
    CHECK(std::abs(solve_kepler_zero_ecc_form(pi).xi - pi) < 1e-14);
    const double xi = solve_kepler_zero_ecc_form(pi / 2).xi;
    CHECK(std::abs(xi - 2.3098814600100573) < 1e-13);  // frozen reference
    CHECK(std::abs(xi - oracle::kepler_zero_ecc(pi / 2)) < 1e-12);
    const double edge = solve_kepler_zero_ecc_form(2.0 * pi - 1.0).xi;
    CHECK(1.0 - std::cos(edge) > 0.0);
}

TEST_CASE("zero-eccentricity form agrees with bisection on the real strip") {
    const double eps0 = 0.25;
    const double lo = 2.0 * std::sqrt(eps0), hi = 2.0 * pi - 2.0 * std::sqrt(eps0);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = lo + (hi - lo) * i / 400.0;
        worst = std::max(worst, std::abs(solve_kepler_zero_ecc_form(x).xi - oracle::kepler_zero_ecc(x)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("complex argument solves the equation and reduces to the real case") {
    const double eps0 = 0.25;
    const std::complex<double> x(2.0, 0.4);
    const auto s = solve_kepler_zero_ecc_form(x, kKeplerTol, eps0);
    CHECK(std::abs(s.xi - std::sin(s.xi) - x) < 1e-13);
    const auto r = solve_kepler_zero_ecc_form(std::complex<double>(2.0, 0.0), kKeplerTol, eps0);
    CHECK(std::abs(r.xi.real() - solve_kepler_zero_ecc_form(2.0).xi) < 1e-13);
    CHECK(std::abs(r.xi.imag()) < 1e-14);
    CHECK_THROWS_AS(solve_kepler_zero_ecc_form(std::complex<double>(2.0, 0.6), kKeplerTol, eps0), DomainError);
}

TEST_CASE("c0 estimate is positive and grid-stable") {
    CHECK(estimate_c0(0.5, 64) > 0.0);
    const double a = estimate_c0(0.25, 64), b = estimate_c0(0.25, 128);
    CHECK(std::abs(a - b) / b < 0.05);
    for (double e0 : {0.1, 0.9}) {
        const double c = estimate_c0(e0, 64);
        CHECK(std::isfinite(c));
        CHECK(c > 0.0);
    }
}
}
