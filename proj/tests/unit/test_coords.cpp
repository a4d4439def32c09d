#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "perilib/coords.hpp"
#include "perilib/error.hpp"

using namespace perilib;
using std::numbers::pi;

namespace {
double angle_diff(double a, double b) { return std::remainder(a - b, 2.0 * pi); }
}  // namespace

TEST_SUITE("coords") {
TEST_CASE("mass parameters for equal masses in the Jacobi frame") {
    const MassParams m = derive_mass_params(1.0, 1.0, Frame::jacobi);
    CHECK(m.beta == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(m.beta_bar == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(m.gamma_scale == doctest::Approx(16.0 / 3.0).epsilon(1e-15));
    CHECK(m.beta_star(HamiltonianIndex::H1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(m.beta_upper(HamiltonianIndex::H1) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("beta_bar / beta equals mu and beta_* < beta^* in both frames") {
    auto g = oracle::rng(3);
    for (Frame f : {Frame::jacobi, Frame::m0centric}) {
        for (int i = 0; i < 50; ++i) {
            const double mu = oracle::uniform(g, 0.01, 10.0), kappa = oracle::uniform(g, 0.01, 10.0);
            const MassParams m = derive_mass_params(mu, kappa, f);
            CHECK(m.beta_bar / m.beta == doctest::Approx(mu).epsilon(1e-14));
            for (HamiltonianIndex h : {HamiltonianIndex::H1, HamiltonianIndex::H2}) {
                CHECK(m.beta_star(h) < m.beta_upper(h));
            }
        }
    }
    CHECK_THROWS_AS(derive_mass_params(0.0, 1.0, Frame::jacobi), DomainError);
    CHECK_THROWS_AS(derive_mass_params(1.0, -1.0, Frame::jacobi), DomainError);
}

TEST_CASE("frame names parse and print") {
    CHECK(parse_frame("jacobi") == Frame::jacobi);
    CHECK(parse_frame("m0centric") == Frame::m0centric);
    CHECK(to_string(Frame::jacobi) == "jacobi");
    CHECK_THROWS_AS(parse_frame("heliocentric"), DomainError);
}

TEST_CASE("gg_forward anchor points") {
    auto p = gg_forward(1.0, 1.0, 0.7);
    CHECK(std::abs(p.G) < 1e-15);
    CHECK(std::abs(p.g) < 1e-15);
    p = gg_forward(1.0, 0.5, 0.0);
    CHECK(p.G == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(std::abs(p.g) < 1e-15);
    p = gg_forward(1.0, -0.5, 0.0);
    CHECK(p.G == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(p.g == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("gg_inverse anchor points") {
    auto c = gg_inverse(1.3, 0.0, 0.0, ChartBranch::near_zero);
    CHECK(c.Gcal == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(c.gamma == 0.0);
    c = gg_inverse(1.0, std::sqrt(3.0) / 2.0, pi, ChartBranch::near_pi);
    CHECK(c.Gcal == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(std::abs(angle_diff(c.gamma, 0.0)) < 1e-14);
    CHECK_THROWS_AS(gg_inverse(1.0, 0.2, pi, ChartBranch::near_zero), DomainError);
}

TEST_CASE("gg round trip on random chart points") {
    auto g = oracle::rng(5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double L = oracle::uniform(g, 0.5, 2.0);
        const double Gcal = (i % 2 ? 1.0 : -1.0) * oracle::uniform(g, 0.05, 0.999) * L;
        const double gamma = oracle::uniform(g, -pi, pi);
        const auto p = gg_forward(L, Gcal, gamma);
        const auto c = gg_inverse(L, p.G, p.g, Gcal > 0 ? ChartBranch::near_zero : ChartBranch::near_pi);
        worst = std::max({worst, std::abs(c.Gcal - Gcal), std::abs(angle_diff(c.gamma, gamma))});
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("gg_forward is canonical") {
    auto g = oracle::rng(7);
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const double L = 1.0;
        const double Gcal = (i % 2 ? 1.0 : -1.0) * oracle::uniform(g, 0.1, 0.95);
        const double gamma = oracle::uniform(g, -1.2, 1.2);
        const auto a = gg_forward(L, Gcal + h, gamma), b = gg_forward(L, Gcal - h, gamma);
        const auto c = gg_forward(L, Gcal, gamma + h), d = gg_forward(L, Gcal, gamma - h);
        const double GG = (a.G - b.G) / (2 * h), gG = angle_diff(a.g, b.g) / (2 * h);
        const double Gy = (c.G - d.G) / (2 * h), gy = angle_diff(c.g, d.g) / (2 * h);
        CHECK(std::abs(GG * gy - Gy * gG - 1.0) < 1e-8);
    }
}

TEST_CASE("gg_forward approaches the manifold points as |Gcal| -> Lambda") {
    for (double gamma : {-2.0, 0.3, 1.4}) {
        auto p = gg_forward(1.0, 1.0 - 1e-8, gamma);
        CHECK(std::hypot(p.G, angle_diff(p.g, 0.0)) < 1e-3);
        p = gg_forward(1.0, -1.0 + 1e-8, gamma);
        CHECK(std::hypot(p.G, angle_diff(p.g, pi)) < 1e-3);
    }
}

TEST_CASE("rr_forward at the apocenter and at x = pi/2") {
    const auto p = rr_forward(1.3, 0.8, pi);
    CHECK(std::abs(p.R) < 1e-14);
    CHECK(p.r == doctest::Approx(2.0 * 0.8 * 0.8 / std::pow(1.3, 3)).epsilon(1e-14));
    const double xi = oracle::kepler_zero_ecc(pi / 2);
    const auto q = rr_forward(1.0, 1.0, pi / 2);
    CHECK(std::abs(q.r - (1.0 - std::cos(xi))) < 1e-12);
    CHECK(std::abs(q.r - 1.6736120291832148) < 1e-12);  // frozen reference
    CHECK(q.R > 0.0);
}

TEST_CASE("rr_forward satisfies the radial energy identity") {
    auto g = oracle::rng(9);
    for (int i = 0; i < 50; ++i) {
        const double m0 = oracle::uniform(g, 0.5, 2.0), y = oracle::uniform(g, 0.2, 5.0);
        const double x = oracle::uniform(g, 0.3, 2.0 * pi - 0.3);
        const auto p = rr_forward(m0, y, x);
        const double lhs = p.R * p.R / (2.0 * m0) - m0 * m0 / p.r;
        const double rhs = -std::pow(m0, 5) / (2.0 * y * y);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    }
}

TEST_CASE("rr_inverse undoes rr_forward") {
    auto g = oracle::rng(13);
    for (int i = 0; i < 50; ++i) {
        const double y = oracle::uniform(g, 0.5, 3.0), x = oracle::uniform(g, 0.4, 2.0 * pi - 0.4);
        const auto p = rr_forward(1.0, y, x);
        const auto q = rr_inverse(1.0, p.R, p.r);
        CHECK(std::abs(q.y - y) < 1e-10 * y);
        CHECK(std::abs(q.x - x) < 1e-10);
    }
    CHECK_THROWS_AS(rr_forward(1.0, -1.0, 1.0), DomainError);
}

TEST_CASE("rr_forward jet matches finite differences") {
    const double y = 1.7, x = 2.2, h = 1e-6;
    const auto j = rr_forward_jet(1.0, y, x);
    CHECK(j.dr_dy == doctest::Approx((rr_forward(1.0, y + h, x).r - rr_forward(1.0, y - h, x).r) / (2 * h)).epsilon(1e-7));
    CHECK(j.dr_dx == doctest::Approx((rr_forward(1.0, y, x + h).r - rr_forward(1.0, y, x - h).r) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("orbital elements") {
    auto o = orbital_elements(1.0, 1.0, 1.0);
    CHECK(o.a == doctest::Approx(1.0));
    CHECK(std::abs(o.e) < 1e-15);
    o = orbital_elements(1.0, 1.0, 0.0);
    CHECK(o.e == doctest::Approx(1.0));
    o = orbital_elements(1.0, 2.0, 1.0);
    CHECK(o.a == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(o.e == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
}

TEST_CASE("to_secular composes both charts") {
    const ActionAngleState s{0.6, 0.4, 1.5, 2.5};
    const auto sec = to_secular(1.0, 1.0, s);
    const auto gg = gg_forward(1.0, s.Gcal, s.gamma);
    const auto rr = rr_forward(1.0, s.y, s.x);
    CHECK(sec.G == gg.G);
    CHECK(sec.g == gg.g);
    CHECK(sec.R == rr.R);
    CHECK(sec.r == rr.r);
}
}
