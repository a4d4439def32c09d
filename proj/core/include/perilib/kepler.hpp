#pragma once

#include <complex>

namespace perilib {

struct KeplerSolution {
    double xi = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

struct ComplexKeplerSolution {
    std::complex<double> xi;
    double residual = 0.0;
    int iterations = 0;
};

inline constexpr double kKeplerTol = 1e-14;
inline constexpr int kKeplerMaxIter = 50;

// xi - e sin xi = ell, 0 <= e < 1.
KeplerSolution solve_kepler(double e, double ell, double tol = kKeplerTol,
                            int max_iter = kKeplerMaxIter);

// xi' - sin xi' = x on the real line (radial Kepler problem).
KeplerSolution solve_kepler_zero_ecc_form(double x, double tol = kKeplerTol,
                                          int max_iter = kKeplerMaxIter);

// Complex argument. When strip_eps0 > 0 the argument must lie in
// |Im x| <= sqrt(eps0), |Re x - pi| <= pi - 2 sqrt(eps0).
ComplexKeplerSolution solve_kepler_zero_ecc_form(std::complex<double> x,
                                                 double tol = kKeplerTol,
                                                 double strip_eps0 = 0.0);

// min |1 - cos xi'(x)| / eps0 over a grid_n x grid_n grid of the strip.
double estimate_c0(double eps0, int grid_n);

}  // namespace perilib
