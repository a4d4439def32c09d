#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "perilib/chebyshev.hpp"

namespace perilib {

using cdouble = std::complex<double>;

// Tensor Chebyshev grid over the (I_1..I_n, y, x) box; x varies fastest.
struct ChebGrid {
    std::vector<int> n;
    std::vector<double> lo;
    std::vector<double> hi;

    int dims() const { return static_cast<int>(n.size()); }
    std::size_t size() const;
    // Physical coordinate of node i along axis d.
    double node(int d, int i) const;
    std::vector<double> nodes(int d) const;
    bool operator==(const ChebGrid& o) const { return n == o.n && lo == o.lo && hi == o.hi; }
};

ChebGrid make_grid(int n_actions, const std::vector<double>& lo, const std::vector<double>& hi, int nodes = 16);

struct TFShape {
    int n_angles = 1;
    int m_pq = 0;
    int fourier_cutoff = 8;  // max |k_i|
    int pq_degree = 4;       // max |h| + |j|
    bool operator==(const TFShape& o) const {
        return n_angles == o.n_angles && m_pq == o.m_pq && fourier_cutoff == o.fourier_cutoff &&
               pq_degree == o.pq_degree;
    }
};

struct ModeKey {
    std::vector<int> k;
    std::vector<int> h;
    std::vector<int> j;
    auto operator<=>(const ModeKey&) const = default;
    bool is_average() const;  // k = 0 and h = j
};

// f = sum_K f_K(I, y, x) e^{i k.phi} p^h q^j with f_K tabulated on a shared grid.
struct TFSeries {
    TFShape shape;
    ChebGrid grid;
    std::map<ModeKey, std::vector<cdouble>> coeffs;

    bool admits(const ModeKey& key) const;
    const std::vector<cdouble>* find(const ModeKey& key) const;
    std::vector<cdouble>& at(const ModeKey& key);  // inserts zeros when absent
    ModeKey zero_key() const;
    // Point value at real coordinates.
    cdouble evaluate(const std::vector<double>& I, const std::vector<double>& phi, const std::vector<cdouble>& p,
                     const std::vector<cdouble>& q, double y, double x) const;
};

TFSeries tf_zero(const TFShape& shape, const ChebGrid& grid);

struct TFPoint {
    std::vector<double> I;
    std::vector<double> phi;
    std::vector<cdouble> p;
    std::vector<cdouble> q;
    double y = 0.0;
    double x = 0.0;
};

struct BuildOptions {
    int angle_samples = 0;     // per angle; 0 selects 4 * cutoff + 4
    double pq_radius = 0.5;    // Cauchy circle radius for the (p, q) Taylor coefficients
    double relative_drop = 1e-13;  // discard modes below this fraction of the largest one
};

TFSeries tf_build(const std::function<cdouble(const TFPoint&)>& f, const TFShape& shape, const ChebGrid& grid,
                  const BuildOptions& opt = {});

struct NormWeights {
    double rho = 0.1;    // I
    double s = 1.0;      // angles
    double delta = 0.5;  // (p, q)
    double r = 0.1;      // y
    double xi = 0.1;     // x
    void validate() const;
    NormWeights scaled(double f) const { return {rho * f, s * f, delta * f, r * f, xi * f}; }
};

struct SplitSeries {
    TFSeries avg;
    TFSeries osc;
};
SplitSeries tf_average_split(const TFSeries& f);

// sum_K sup_grid |f_K| e^{s |k|_1} delta^{|h| + |j|}
double tf_norm(const TFSeries& f, const NormWeights& w);
// Same with the sup over the grid shifted by +-i (rho, r, xi) in (I, y, x).
double tf_norm_complex(const TFSeries& f, const NormWeights& w);
double tf_sup(const TFSeries& f);  // max over modes of sup |f_K|

TFSeries operator+(const TFSeries& a, const TFSeries& b);
TFSeries operator-(const TFSeries& a, const TFSeries& b);
TFSeries operator*(cdouble c, const TFSeries& a);
TFSeries& operator+=(TFSeries& a, const TFSeries& b);

// Dealiased product truncated to the shape.
TFSeries tf_multiply(const TFSeries& a, const TFSeries& b);
TFSeries poisson_bracket(const TFSeries& f, const TFSeries& g);

// Partials, spectral in (I, y, x) and exact in angles and (p, q).
TFSeries d_action(const TFSeries& f, int i);
TFSeries d_angle(const TFSeries& f, int i);
TFSeries d_y(const TFSeries& f);
TFSeries d_x(const TFSeries& f);
TFSeries d_p(const TFSeries& f, int l);
TFSeries d_q(const TFSeries& f, int l);

// Functions of (I, y, x) only, as k = 0, h = j = 0 series.
TFSeries tf_from_grid_function(const std::function<double(const std::vector<double>& I, double y, double x)>& f,
                               const TFShape& shape, const ChebGrid& grid);

std::string tf_to_json(const TFSeries& f, int indent = -1);
TFSeries tf_from_json(const std::string& text);

}  // namespace perilib
