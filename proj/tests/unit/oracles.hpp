#pragma once

#include <cmath>
#include <functional>
#include <random>

// Independent reference computations used as test oracles.
namespace oracle {

// Root of a monotone increasing function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-15) {
    double flo = f(lo);
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double kepler(double e, double ell) {
    return bisect([&](double x) { return x - e * std::sin(x) - ell; }, ell - e - 1e-3, ell + e + 1e-3);
}

inline double kepler_zero_ecc(double x) {
    return bisect([&](double z) { return z - std::sin(z) - x; }, x - 1.0 - 1e-3, x + 1.0 + 1e-3);
}

// 2 / (sqrt(1 - 2 eps) (1 + sqrt(1 - 2 eps))), the closed value of F at t = 1.
inline double f_at_one(double eps) {
    const double s = std::sqrt(1.0 - 2.0 * eps);
    return 2.0 / (s * (1.0 + s));
}

// Direct midpoint-rule average over xi of the F integrand, fine enough for 1e-10.
inline double f_direct(double eps, double t, int n = 20000) {
    const double pi = 3.14159265358979323846;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double xi = 2.0 * pi * (i + 0.5) / n;
        const double c = 1.0 - std::cos(xi);
        sum += c / std::sqrt(1.0 - 2.0 * eps * c * t + eps * eps * c * c);
    }
    return sum / n;
}

inline std::mt19937_64 rng(unsigned long long seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

}  // namespace oracle
