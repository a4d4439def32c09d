#pragma once

#include <complex>
#include <vector>

namespace perilib::cheb {

using cdouble = std::complex<double>;

// Dense row-major matrix.
template <class T>
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<T> a;
    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c) {}
    T& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    const T& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

// Chebyshev-Gauss-Lobatto nodes on [-1, 1] in ascending order.
std::vector<double> cgl_nodes(int n);

// Nodal values -> Chebyshev coefficients (n x n).
Matrix<double> values_to_coeffs(int n);
// Coefficients (n of them) -> values at the given points in [-1, 1].
Matrix<double> coeffs_to_values(const std::vector<double>& points, int n);
Matrix<cdouble> coeffs_to_values(const std::vector<cdouble>& points, int n);
// Nodal values on n nodes -> values at the given points (interpolation).
Matrix<double> interpolation_matrix(const std::vector<double>& points, int n);
// Spectral differentiation on [-1, 1] (n x n, nodal).
Matrix<double> diff_matrix(int n);
// Nodal n -> nodal m (m >= n), exact for the degree n-1 interpolant.
Matrix<double> prolong_matrix(int n, int m);
// Nodal m -> nodal n, keeping the n lowest Chebyshev modes.
Matrix<double> restrict_matrix(int m, int n);

// Clenshaw-Curtis nodes and weights on [-1, 1].
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature clenshaw_curtis(int n);

template <class T>
T clenshaw(const std::vector<T>& c, T u);

// Dealiased product length: ceil(3n/2) + 1.
int padded_size(int n);

}  // namespace perilib::cheb
