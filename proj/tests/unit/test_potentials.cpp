#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "perilib/coords.hpp"
#include "perilib/error.hpp"
#include "perilib/potentials.hpp"

using namespace perilib;
using std::numbers::pi;

TEST_SUITE("potentials") {
TEST_CASE("rho and p in degenerate configurations") {
    for (double ell : {0.3, 2.0, 5.0}) {
        const RhoP a = rho_p(1.0, 1.0, ell, 0.0);
        CHECK(a.rho == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(a.p == doctest::Approx(std::cos(ell)).epsilon(1e-14));
    }
    const RhoP b = rho_p(1.0, 0.0, 0.0, 1.1);
    CHECK(std::abs(b.rho) < 1e-15);
}

TEST_CASE("rho and p match a symbol-by-symbol recomputation") {
    auto g = oracle::rng(17);
    for (int i = 0; i < 50; ++i) {
        const double L = 1.2, G = oracle::uniform(g, -1.19, 1.19), ell = oracle::uniform(g, 0, 2 * pi),
                     gg = oracle::uniform(g, -pi, pi);
        const double e = std::sqrt(1.0 - G * G / (L * L));
        const double xi = oracle::kepler(e, ell);
        const double rho = 1.0 - e * std::cos(xi);
        const double p = (std::cos(xi) - e) * std::cos(gg) - (G / L) * std::sin(xi) * std::sin(gg);
        const RhoP r = rho_p(L, G, ell, gg);
        CHECK(std::abs(r.rho - rho) < 1e-12);
        CHECK(std::abs(r.p - p) < 1e-12);
    }
}

TEST_CASE("u_hat special values") {
    CHECK(u_hat(0.0, 1.0, 0.4, 0.9) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(u_hat(0.25, 1.0, 0.0, 0.0) - oracle::f_at_one(0.25)) < 1e-10);
    CHECK(std::abs(oracle::f_at_one(0.25) - 1.6568542494923802) < 1e-15);  // frozen reference
}

TEST_CASE("u_hat is converged at the default node count") {
    auto g = oracle::rng(19);
    for (int i = 0; i < 10; ++i) {
        const double G = oracle::uniform(g, -0.9, 0.9), gg = oracle::uniform(g, -pi, pi);
        const double a = u_hat(0.3, 1.0, G, gg, {256});
        const double b = u_hat(0.3, 1.0, G, gg, {512});
        CHECK(std::abs(a - b) < 1e-12);
    }
}

TEST_CASE("e_hat anchor values and evenness") {
    CHECK(e_hat(0.3, 1.0, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(e_hat(0.3, 1.0, 0.0, pi) == doctest::Approx(-1.0));
    CHECK(e_hat(0.3, 1.0, 1.0, 2.1) == doctest::Approx(0.3).epsilon(1e-15));
    auto g = oracle::rng(23);
    for (int i = 0; i < 100; ++i) {
        const double G = oracle::uniform(g, -1, 1), gg = oracle::uniform(g, -pi, pi);
        CHECK(e_hat(0.2, 1.0, -G, gg) == e_hat(0.2, 1.0, G, gg));
        CHECK(e_hat(0.2, 1.0, G, -gg) == doctest::Approx(e_hat(0.2, 1.0, G, gg)).epsilon(1e-15));
    }
}

TEST_CASE("e_hat in action-angle variables") {
    CHECK(e_hat_aa(0.3, 1.0, 1.0, 0.5) == doctest::Approx(1.0));
    CHECK(e_hat_aa(0.3, 1.0, 0.0, 0.0) == doctest::Approx(0.3));
    auto g = oracle::rng(29);
    for (int i = 0; i < 100; ++i) {
        const double Gcal = (i % 2 ? 1 : -1) * oracle::uniform(g, 0.05, 0.99), gamma = oracle::uniform(g, -pi, pi);
        const auto p = gg_forward(1.0, Gcal, gamma);
        CHECK(std::abs(e_hat_aa(0.3, 1.0, Gcal, gamma) - e_hat(0.3, 1.0, p.G, p.g)) < 1e-12);
    }
}

TEST_CASE("F at eps = 0 and at t = 1") {
    CHECK(f_eps(0.0, 0.7) == 1.0);
    const double h = 1e-4;
    CHECK(f_eps_jet(0.0, 0.7).d_eps ==
          doctest::Approx((oracle::f_direct(h, 0.7) - oracle::f_direct(-h, 0.7)) / (2 * h)).epsilon(1e-6));
    CHECK(f_eps_at_one(0.0) == 1.0);
    CHECK(std::abs(f_eps(0.25, 1.0) - 1.6568542494923802) < 1e-10);
    for (double e : {0.1, 0.2, 0.3, 0.4}) {
        CHECK(std::abs(f_eps(e, 1.0) - oracle::f_at_one(e)) < 1e-10);
        CHECK(std::abs(f_eps_at_one(e) - oracle::f_at_one(e)) < 1e-13);
    }
}

TEST_CASE("F matches a direct fine-grid average") {
    for (double e : {-0.4, -0.1, 0.2, 0.45}) {
        for (double t : {-0.8, 0.0, 0.6}) {
            CHECK(std::abs(f_eps(e, t) - oracle::f_direct(e, t)) < 1e-10);
        }
    }
}

TEST_CASE("F is even under (eps, t) -> (-eps, -t)") {
    auto g = oracle::rng(31);
    for (int i = 0; i < 50; ++i) {
        const double e = oracle::uniform(g, -0.45, 0.45), t = oracle::uniform(g, -1, 1);
        CHECK(std::abs(f_eps(-e, -t) - f_eps(e, t)) < 1e-13);
    }
}

TEST_CASE("dF/dt") {
    CHECK(f_eps_derivative(0.0, 0.4) == 0.0);
    const double h = 1e-5;
    const double fd = (f_eps(0.25, h) - f_eps(0.25, -h)) / (2 * h);
    CHECK(std::abs(f_eps_derivative(0.25, 0.0) - fd) < 1e-7);
    for (double e : {0.05, 0.25, 0.45}) {
        for (double t : {-0.9, 0.0, 0.9}) CHECK(f_eps_derivative(e, t) > 0.0);
    }
    const auto j = f_eps_jet(0.3, 0.2);
    CHECK(j.value == doctest::Approx(f_eps(0.3, 0.2)).epsilon(1e-15));
    CHECK(j.minus_one == doctest::Approx(j.value - 1.0).epsilon(1e-12));
    CHECK(j.d_eps == doctest::Approx((f_eps(0.3 + h, 0.2) - f_eps(0.3 - h, 0.2)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("singular locus") {
    CHECK(singularity_t(0.25) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(singularity_t(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    for (double e : {0.05, 0.2, 0.4, 0.5}) CHECK(singularity_t(e) >= 1.0);
    for (double e : {0.05, 0.2, 0.4}) CHECK(singularity_t(e) > 1.0 + 1e-4);
    auto g = oracle::rng(37);
    for (int i = 0; i < 100; ++i) {
        const double e = oracle::uniform(g, 0.0, 0.5);
        const double v = e_hat(e, 1.0, oracle::uniform(g, -1, 1), oracle::uniform(g, -pi, pi));
        CHECK(std::abs(v) <= 1.0 + e);
    }
    CHECK_THROWS_AS(f_eps(0.25, 1.25), SingularityError);
    CHECK_THROWS_AS(f_eps(0.6, 0.0), DomainError);
}

TEST_CASE("renormalization identity") {
    CHECK(check_renorm_identity(0.0, 1.0, 20, {}, 1).max_residual < 1e-15);
    for (double e : {0.3, -0.3}) {
        const RenormCheck c = check_renorm_identity(e, 1.0, 100, {256}, 42);
        CHECK(c.samples == 100);
        CHECK(c.max_residual < 1e-8);
    }
    CHECK_THROWS_AS(check_renorm_identity(0.6, 1.0, 10, {}, 1), DomainError);
}

TEST_CASE("renormalization check is deterministic in the seed") {
    const auto a = check_renorm_identity(0.25, 1.0, 30, {}, 9);
    const auto b = check_renorm_identity(0.25, 1.0, 30, {}, 9);
    CHECK(a.max_residual == b.max_residual);
}

TEST_CASE("U and E Poisson commute") {
    const BracketCheck c = check_bracket_commutation(0.3, 1.0, 50, 1e-5, {256}, 5);
    CHECK(c.samples == 50);
    CHECK(c.max_abs < 1e-6);
}

TEST_CASE("quadrature node-count validation") {
    CHECK_THROWS_AS(validate(QuadratureSpec{31}), DomainError);
    CHECK_THROWS_AS(validate(QuadratureSpec{16}), DomainError);
    CHECK_NOTHROW(validate(QuadratureSpec{64}));
}
}
