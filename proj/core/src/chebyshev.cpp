#include "perilib/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "perilib/error.hpp"

namespace perilib::cheb {

namespace {

constexpr double kPi = std::numbers::pi;

void check_n(int n) {
    if (n < 2) throw DomainError("Chebyshev grid needs at least 2 nodes");
}

// Angle of ascending node i: x_i = cos(theta_i).
double theta(int i, int n) { return kPi * (n - 1 - i) / (n - 1); }

template <class T>
Matrix<T> eval_matrix(const std::vector<T>& pts, int n) {
    Matrix<T> E(static_cast<int>(pts.size()), n);
    for (int m = 0; m < E.rows; ++m) {
        T t0 = T(1.0), t1 = pts[m];
        for (int k = 0; k < n; ++k) {
            if (k == 0) {
                E(m, k) = t0;
            } else if (k == 1) {
                E(m, k) = t1;
            } else {
                const T t2 = T(2.0) * pts[m] * t1 - t0;
                t0 = t1;
                t1 = t2;
                E(m, k) = t2;
            }
        }
    }
    return E;
}

Matrix<double> matmul(const Matrix<double>& A, const Matrix<double>& B) {
    Matrix<double> C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            const double a = A(i, k);
            for (int j = 0; j < B.cols; ++j) C(i, j) += a * B(k, j);
        }
    return C;
}

}  // namespace

std::vector<double> cgl_nodes(int n) {
    check_n(n);
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = std::cos(theta(i, n));
    if (n % 2 == 1) x[n / 2] = 0.0;
    return x;
}

Matrix<double> values_to_coeffs(int n) {
    check_n(n);
    Matrix<double> C(n, n);
    const double N = n - 1;
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const double end = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            C(k, i) = 2.0 / N * end * std::cos(k * theta(i, n));
        }
        if (k == 0 || k == n - 1)
            for (int i = 0; i < n; ++i) C(k, i) *= 0.5;
    }
    return C;
}

Matrix<double> coeffs_to_values(const std::vector<double>& points, int n) { return eval_matrix(points, n); }

Matrix<cdouble> coeffs_to_values(const std::vector<cdouble>& points, int n) { return eval_matrix(points, n); }

Matrix<double> interpolation_matrix(const std::vector<double>& points, int n) {
    return matmul(coeffs_to_values(points, n), values_to_coeffs(n));
}

Matrix<double> diff_matrix(int n) {
    check_n(n);
    // derivative of the coefficient series: c'_{k-1} = c'_{k+1} + 2 k c_k, c'_0 halved
    Matrix<double> Dc(n, n);
    for (int col = 0; col < n; ++col) {
        std::vector<double> c(n, 0.0), d(n + 1, 0.0);
        c[col] = 1.0;
        for (int k = n - 1; k >= 1; --k) d[k - 1] = d[k + 1] + 2.0 * k * c[k];
        d[0] *= 0.5;
        for (int k = 0; k < n; ++k) Dc(k, col) = d[k];
    }
    const auto x = cgl_nodes(n);
    return matmul(matmul(coeffs_to_values(x, n), Dc), values_to_coeffs(n));
}

Matrix<double> prolong_matrix(int n, int m) {
    return matmul(coeffs_to_values(cgl_nodes(m), n), values_to_coeffs(n));
}

Matrix<double> restrict_matrix(int m, int n) {
    const Matrix<double> C = values_to_coeffs(m);
    Matrix<double> Ct(n, m);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < m; ++i) Ct(k, i) = C(k, i);
    return matmul(coeffs_to_values(cgl_nodes(n), n), Ct);
}

Quadrature clenshaw_curtis(int n) {
    check_n(n);
    Quadrature q;
    q.nodes = cgl_nodes(n);
    q.weights.assign(n, 0.0);
    const int N = n - 1;
    // w_i = (c_i / N) (1 - sum_{k=1}^{N/2} b_k cos(2 k theta_i) / (4 k^2 - 1))
    for (int i = 0; i < n; ++i) {
        const double th = theta(i, n);
        double s = 0.0;
        for (int k = 1; k <= N / 2; ++k) {
            const double b = (2 * k == N) ? 1.0 : 2.0;
            s += b * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
        }
        const double c = (i == 0 || i == N) ? 1.0 : 2.0;
        q.weights[i] = c / N * (1.0 - s);
    }
    return q;
}

template <class T>
T clenshaw(const std::vector<T>& c, T u) {
    T b1 = T(0.0), b2 = T(0.0);
    for (int k = static_cast<int>(c.size()) - 1; k >= 1; --k) {
        const T b0 = T(2.0) * u * b1 - b2 + c[k];
        b2 = b1;
        b1 = b0;
    }
    return (c.empty() ? T(0.0) : c[0]) + u * b1 - b2;
}

template double clenshaw<double>(const std::vector<double>&, double);
template cdouble clenshaw<cdouble>(const std::vector<cdouble>&, cdouble);

int padded_size(int n) { return (3 * n + 1) / 2 + 1; }

}  // namespace perilib::cheb
