#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "perilib/error.hpp"
#include "perilib/normal_form.hpp"
#include "perilib/tf_series.hpp"

using namespace perilib;
using std::numbers::pi;

namespace {
const TFShape kShape{1, 0, 6, 0};

ChebGrid grid1(int nodes = 12) { return make_grid(1, {0.5, 2.0, 1.0}, {1.0, 3.0, 2.0}, nodes); }

TFSeries build(const std::function<cdouble(double I, double phi, double y, double x)>& f, TFShape shape = kShape,
               ChebGrid g = grid1()) {
    return tf_build([&](const TFPoint& p) { return f(p.I[0], p.phi[0], p.y, p.x); }, shape, g);
}

double max_err(const TFSeries& s, const std::function<cdouble(double, double, double, double)>& f, int seed) {
    auto g = oracle::rng(seed);
    double e = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double I = oracle::uniform(g, 0.5, 1.0), phi = oracle::uniform(g, 0, 2 * pi),
                     y = oracle::uniform(g, 2.0, 3.0), x = oracle::uniform(g, 1.0, 2.0);
        e = std::max(e, std::abs(s.evaluate({I}, {phi}, {}, {}, y, x) - f(I, phi, y, x)));
    }
    return e;
}

// Low-degree random trigonometric polynomial in phi with polynomial coefficients.
std::function<cdouble(double, double, double, double)> random_poly(int seed) {
    auto g = oracle::rng(seed);
    std::vector<double> c;
    for (int i = 0; i < 8; ++i) c.push_back(oracle::uniform(g, -1, 1));
    return [c](double I, double phi, double y, double x) -> cdouble {
        return c[0] * I * y + c[1] * std::cos(phi) * x + c[2] * std::sin(2 * phi) * I * I + c[3] * y * x +
               c[4] * std::cos(phi) * I + c[5] * x * x + c[6] * std::sin(phi) * y + c[7];
    };
}
}  // namespace

TEST_SUITE("tf_series") {
TEST_CASE("constants occupy the zero mode") {
    const TFSeries s = build([](double, double, double, double) { return cdouble(1.0); });
    REQUIRE(s.coeffs.size() == 1);
    const auto& v = s.coeffs.begin()->second;
    CHECK(s.coeffs.begin()->first.is_average());
    for (const auto& c : v) CHECK(std::abs(c - 1.0) < 1e-14);
}

TEST_CASE("cos phi splits into k = +-1 with weight 1/2") {
    const TFSeries s = build([](double, double phi, double, double) { return cdouble(std::cos(phi)); });
    CHECK(s.coeffs.size() == 2);
    for (int k : {-1, 1}) {
        const auto* v = s.find(ModeKey{{k}, {}, {}});
        REQUIRE(v);
        for (const auto& c : *v) CHECK(std::abs(c - 0.5) < 1e-14);
    }
    const auto split = tf_average_split(s);
    CHECK(tf_sup(split.avg) == 0.0);
    CHECK(tf_sup(split.osc - s) == 0.0);
}

TEST_CASE("angle-free series is its own average") {
    const TFSeries s = build([](double I, double, double y, double) { return cdouble(I * y); });
    const auto split = tf_average_split(s);
    CHECK(tf_sup(split.osc) == 0.0);
    CHECK(tf_sup(split.avg - s) == 0.0);
}

TEST_CASE("evaluation reproduces the sampled function") {
    const auto f = random_poly(1);
    CHECK(max_err(build(f), f, 2) < 1e-12);
}

TEST_CASE("desk-scale perturbation survives resampling") {
    const DeskModelSpec spec = default_desk_model();
    const DeskModel m = build_desk_model(spec);
    auto g = oracle::rng(3);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < 30; ++i) {
        const int a = static_cast<int>(oracle::uniform(g, 0, spec.nodes - 0.01));
        const int b = static_cast<int>(oracle::uniform(g, 0, spec.nodes - 0.01));
        const int c = static_cast<int>(oracle::uniform(g, 0, spec.nodes - 0.01));
        const double I = m.f.grid.node(0, a), y = m.f.grid.node(1, b), x = m.f.grid.node(2, c);
        const double gamma = oracle::uniform(g, -pi, pi);
        const double exact = perturbation_f(spec.ham, {I, gamma, y, x}, spec.quad);
        worst = std::max(worst, std::abs(m.f.evaluate({I}, {gamma}, {}, {}, y, x).real() - exact));
        scale = std::max(scale, std::abs(exact));
    }
    CHECK(worst < 1e-8 * scale);
}

TEST_CASE("norm of a single mode") {
    TFSeries s = tf_zero(kShape, grid1());
    auto& v = s.at(ModeKey{{1}, {}, {}});
    for (auto& c : v) c = cdouble(0.3, -0.4);
    const NormWeights w{0.1, 0.7, 0.5, 0.1, 0.1};
    CHECK(tf_norm(s, w) == doctest::Approx(0.5 * std::exp(0.7)).epsilon(1e-14));
    CHECK(tf_norm(tf_zero(kShape, grid1()), w) == 0.0);
    CHECK(tf_norm_complex(s, w) == doctest::Approx(tf_norm(s, w)).epsilon(1e-12));
}

TEST_CASE("triangle inequality on random pairs") {
    const NormWeights w{0.1, 1.0, 0.5, 0.1, 0.1};
    for (int i = 0; i < 10; ++i) {
        const TFSeries a = build(random_poly(10 + i)), b = build(random_poly(30 + i));
        CHECK(tf_norm(a + b, w) <= tf_norm(a, w) + tf_norm(b, w) + 1e-14);
        CHECK(tf_norm_complex(a + b, w) <= tf_norm_complex(a, w) + tf_norm_complex(b, w) + 1e-12);
    }
}

TEST_CASE("products are dealiased") {
    const TFSeries c = build([](double, double phi, double, double) { return cdouble(std::cos(phi)); });
    const TFSeries x = build([](double, double, double, double x) { return cdouble(x * x * x); });
    const auto f = [](double, double phi, double, double x) { return cdouble(std::cos(phi) * std::cos(phi) * x * x * x); };
    CHECK(max_err(tf_multiply(tf_multiply(c, c), x), f, 4) < 1e-12);
}

TEST_CASE("derivatives") {
    const auto f = [](double I, double phi, double y, double x) { return cdouble(I * I * std::sin(phi) * y * std::exp(x)); };
    const TFSeries s = build(f);
    CHECK(max_err(d_action(s, 0), [](double I, double phi, double y, double x) { return cdouble(2 * I * std::sin(phi) * y * std::exp(x)); }, 5) < 1e-9);
    CHECK(max_err(d_angle(s, 0), [](double I, double phi, double y, double x) { return cdouble(I * I * std::cos(phi) * y * std::exp(x)); }, 6) < 1e-10);
    CHECK(max_err(d_y(s), [](double I, double phi, double, double x) { return cdouble(I * I * std::sin(phi) * std::exp(x)); }, 7) < 1e-10);
    CHECK(max_err(d_x(s), f, 8) < 1e-9);
}

TEST_CASE("canonical bracket of the action with an angle function") {
    const TFSeries I = build([](double I, double, double, double) { return cdouble(I); });
    const TFSeries s = build([](double, double phi, double, double) { return cdouble(std::sin(phi)); });
    const auto expect = [](double, double phi, double, double) { return cdouble(std::cos(phi)); };
    CHECK(max_err(poisson_bracket(I, s), expect, 9) < 1e-12);
    const TFSeries y = build([](double, double, double y, double) { return cdouble(y); });
    const TFSeries x = build([](double, double, double, double x) { return cdouble(x); });
    CHECK(max_err(poisson_bracket(y, x), [](double, double, double, double) { return cdouble(1.0); }, 10) < 1e-12);
}

TEST_CASE("Jacobi identity on random low-degree triples") {
    const TFShape wide{1, 0, 8, 0};
    for (int t = 0; t < 3; ++t) {
        const TFSeries a = build(random_poly(50 + t), wide), b = build(random_poly(60 + t), wide),
                       c = build(random_poly(70 + t), wide);
        const TFSeries j = poisson_bracket(a, poisson_bracket(b, c)) + poisson_bracket(b, poisson_bracket(c, a)) +
                           poisson_bracket(c, poisson_bracket(a, b));
        CHECK(tf_sup(j) < 1e-8);
    }
}

TEST_CASE("p, q monomials") {
    const TFShape shape{1, 1, 2, 3};
    const ChebGrid g = grid1(8);
    const TFSeries s = tf_build(
        [](const TFPoint& p) { return p.p[0] * p.q[0] * std::cos(p.phi[0]) + p.p[0] * p.p[0] * p.y; }, shape, g);
    const cdouble pv(0.3, 0.1), qv(-0.2, 0.05);
    const cdouble expect = pv * qv * std::cos(0.4) + pv * pv * 2.5;
    CHECK(std::abs(s.evaluate({0.7}, {0.4}, {pv}, {qv}, 2.5, 1.5) - expect) < 1e-12);
    const TFSeries p = tf_build([](const TFPoint& pt) { return pt.p[0]; }, shape, g);
    const TFSeries q = tf_build([](const TFPoint& pt) { return pt.q[0]; }, shape, g);
    const auto one = poisson_bracket(p, q);
    const auto* v = one.find(one.zero_key());
    REQUIRE(v);
    for (const auto& c : *v) CHECK(std::abs(c - 1.0) < 1e-12);
    CHECK(std::abs(d_p(s, 0).evaluate({0.7}, {0.4}, {pv}, {qv}, 2.5, 1.5) - (qv * std::cos(0.4) + 2.0 * pv * 2.5)) < 1e-12);
    CHECK(std::abs(d_q(s, 0).evaluate({0.7}, {0.4}, {pv}, {qv}, 2.5, 1.5) - pv * std::cos(0.4)) < 1e-12);
}

TEST_CASE("JSON round trip") {
    const TFSeries s = build(random_poly(80));
    const TFSeries r = tf_from_json(tf_to_json(s));
    CHECK(r.shape == s.shape);
    CHECK(r.grid == s.grid);
    REQUIRE(r.coeffs.size() == s.coeffs.size());
    for (const auto& [k, v] : s.coeffs) {
        const auto* w = r.find(k);
        REQUIRE(w);
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs((*w)[i] - v[i]) <= 1e-15 * std::abs(v[i]));
    }
    CHECK_THROWS_AS(tf_from_json("{\"format\": \"other\"}"), DomainError);
    CHECK_THROWS_AS(tf_from_json("not json"), DomainError);
}

TEST_CASE("incompatible grids are rejected") {
    const TFSeries a = build(random_poly(1));
    const TFSeries b = build(random_poly(1), kShape, grid1(10));
    CHECK_THROWS_AS(a + b, DomainError);
}
}
