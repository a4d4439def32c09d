#include "perilib/kepler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "perilib/error.hpp"

namespace perilib {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Newton on a monotone function with a bracketing fallback.
template <class F, class DF>
KeplerSolution newton_bracketed(F f, DF df, double lo, double hi, double x, double tol,
                                int max_iter) {
    x = std::clamp(x, lo, hi);
    for (int it = 1; it <= max_iter; ++it) {
        const double fx = f(x);
        if (std::abs(fx) <= tol) return {x, std::abs(fx), it};
        if (fx < 0.0) lo = x; else hi = x;
        const double d = df(x);
        double xn = d > 0.0 ? x - fx / d : lo;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (xn == x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
            return {xn, std::abs(f(xn)), it};
        }
        x = xn;
    }
    throw ConvergenceError("Kepler solver did not converge in " + std::to_string(max_iter) +
                           " iterations");
}

}  // namespace

KeplerSolution solve_kepler(double e, double ell, double tol, int max_iter) {
    if (!(e >= 0.0 && e < 1.0)) throw DomainError("solve_kepler: eccentricity must lie in [0,1)");
    if (!(tol > 0.0)) throw DomainError("solve_kepler: tol must be positive");
    if (!std::isfinite(ell)) throw DomainError("solve_kepler: non-finite mean anomaly");

    const double m = std::remainder(ell, kTwoPi);
    const double offset = ell - m;
    const double sgn = m < 0.0 ? -1.0 : 1.0;
    const double ma = std::abs(m);

    auto f = [&](double xi) { return xi - e * std::sin(xi) - ma; };
    auto df = [&](double xi) { return 1.0 - e * std::cos(xi); };
    KeplerSolution s = newton_bracketed(f, df, ma, std::min(kPi, ma + e),
                                        ma + e * std::sin(ma), tol, max_iter);
    s.xi = offset + sgn * s.xi;
    s.residual = std::abs(s.xi - e * std::sin(s.xi) - ell);
    return s;
}

KeplerSolution solve_kepler_zero_ecc_form(double x, double tol, int max_iter) {
    if (!(tol > 0.0)) throw DomainError("solve_kepler_zero_ecc_form: tol must be positive");
    if (!std::isfinite(x)) throw DomainError("solve_kepler_zero_ecc_form: non-finite argument");

    const double m = std::remainder(x - kPi, kTwoPi) + kPi;  // [0, 2pi]
    const double offset = x - m;
    const bool upper = m > kPi;
    const double ma = upper ? kTwoPi - m : m;  // [0, pi]

    auto f = [&](double s) { return s - std::sin(s) - ma; };
    auto df = [&](double s) { return 1.0 - std::cos(s); };
    const double guess = std::min(std::cbrt(6.0 * ma), kPi);
    KeplerSolution s = newton_bracketed(f, df, ma, std::min(kPi, ma + 1.0), guess, tol,
                                        max_iter + 60);
    s.xi = offset + (upper ? kTwoPi - s.xi : s.xi);
    s.residual = std::abs(s.xi - std::sin(s.xi) - x);
    return s;
}

ComplexKeplerSolution solve_kepler_zero_ecc_form(std::complex<double> x, double tol,
                                                 double strip_eps0) {
    if (strip_eps0 > 0.0) {
        const double w = std::sqrt(strip_eps0);
        if (std::abs(x.imag()) > w * (1.0 + 1e-12) ||
            std::abs(x.real() - kPi) > (kPi - 2.0 * w) * (1.0 + 1e-12)) {
            throw DomainError("solve_kepler_zero_ecc_form: argument outside the admissible strip");
        }
    }
    if (!(x.real() > 0.0 && x.real() < kTwoPi)) {
        throw DomainError("solve_kepler_zero_ecc_form: Re x must lie in (0, 2pi)");
    }

    const KeplerSolution base = solve_kepler_zero_ecc_form(x.real(), tol);
    std::complex<double> s(base.xi, 0.0);
    int iters = base.iterations;
    const int segments = std::max(1, static_cast<int>(std::ceil(16.0 * std::abs(x.imag()))));
    for (int k = 1; k <= segments; ++k) {
        const std::complex<double> z(x.real(), x.imag() * k / segments);
        bool ok = false;
        for (int it = 0; it < kKeplerMaxIter; ++it) {
            ++iters;
            const std::complex<double> d = 1.0 - std::cos(s);
            if (std::abs(d) < 1e-300) break;
            const std::complex<double> step = (s - std::sin(s) - z) / d;
            s -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s)) ||
                std::abs(s - std::sin(s) - z) <= 1e-15 * std::max(1.0, std::abs(z))) {
                ok = true;
                break;
            }
        }
        if (!ok) throw ConvergenceError("complex Kepler continuation failed");
    }
    return {s, std::abs(s - std::sin(s) - x), iters};
}

double estimate_c0(double eps0, int grid_n) {
    if (!(eps0 > 0.0 && eps0 < 1.0)) throw DomainError("estimate_c0: eps0 must lie in (0,1)");
    if (grid_n < 16) throw DomainError("estimate_c0: grid_n must be at least 16");
    const double w = std::sqrt(eps0);
    const double re_lo = 2.0 * w;
    const double re_hi = kTwoPi - 2.0 * w;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        const double re = re_lo + (re_hi - re_lo) * i / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            const double im = -w + 2.0 * w * j / (grid_n - 1);
            const auto sol = solve_kepler_zero_ecc_form({re, im}, kKeplerTol, eps0);
            best = std::min(best, std::abs(1.0 - std::cos(sol.xi)) / eps0);
        }
    }
    return best;
}

}  // namespace perilib
