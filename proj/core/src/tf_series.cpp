#include "perilib/tf_series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "json.hpp"
#include "perilib/error.hpp"

namespace perilib {

namespace {

constexpr double kPi = std::numbers::pi;
using cheb::Matrix;

template <class M>
std::vector<cdouble> apply_axis(const std::vector<cdouble>& in, const std::vector<int>& shape, int axis, const M& mat) {
    std::size_t outer = 1, inner = 1;
    for (int d = 0; d < axis; ++d) outer *= shape[d];
    for (int d = axis + 1; d < static_cast<int>(shape.size()); ++d) inner *= shape[d];
    const int n = shape[axis];
    const int rows = mat.rows;
    std::vector<cdouble> out(outer * rows * inner);
    for (std::size_t o = 0; o < outer; ++o) {
        for (int r = 0; r < rows; ++r) {
            cdouble* dst = &out[(o * rows + r) * inner];
            for (int c = 0; c < n; ++c) {
                const auto m = mat(r, c);
                if (m == decltype(m)(0)) continue;
                const cdouble* src = &in[(o * n + c) * inner];
                for (std::size_t i = 0; i < inner; ++i) dst[i] += m * src[i];
            }
        }
    }
    return out;
}

struct Ops {
    Matrix<double> D;
    Matrix<double> up;
    Matrix<double> down;
    Matrix<double> to_coeffs;
};

const Ops& ops(int n) {
    thread_local std::map<int, Ops> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Ops o;
    const int m = cheb::padded_size(n);
    o.D = cheb::diff_matrix(n);
    o.up = cheb::prolong_matrix(n, m);
    o.down = cheb::restrict_matrix(m, n);
    o.to_coeffs = cheb::values_to_coeffs(n);
    return cache.emplace(n, std::move(o)).first->second;
}

void require_compatible(const TFSeries& a, const TFSeries& b) {
    if (!(a.grid == b.grid)) throw DomainError("series live on incompatible boxes or grids");
    if (!(a.shape == b.shape)) throw DomainError("series have incompatible truncation shapes");
}

ModeKey add_keys(const ModeKey& a, const ModeKey& b) {
    ModeKey r = a;
    for (std::size_t i = 0; i < r.k.size(); ++i) r.k[i] += b.k[i];
    for (std::size_t i = 0; i < r.h.size(); ++i) r.h[i] += b.h[i];
    for (std::size_t i = 0; i < r.j.size(); ++i) r.j[i] += b.j[i];
    return r;
}

int k_l1(const ModeKey& key) {
    int s = 0;
    for (int v : key.k) s += std::abs(v);
    return s;
}

int pq_deg(const ModeKey& key) {
    return std::accumulate(key.h.begin(), key.h.end(), 0) + std::accumulate(key.j.begin(), key.j.end(), 0);
}

double sup_abs(const std::vector<cdouble>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

std::vector<int> padded_shape(const ChebGrid& g) {
    std::vector<int> s(g.n);
    for (auto& v : s) v = cheb::padded_size(v);
    return s;
}

std::vector<cdouble> to_padded(const std::vector<cdouble>& v, const ChebGrid& g) {
    std::vector<int> shape = g.n;
    std::vector<cdouble> out = v;
    for (int d = 0; d < g.dims(); ++d) {
        out = apply_axis(out, shape, d, ops(g.n[d]).up);
        shape[d] = cheb::padded_size(g.n[d]);
    }
    return out;
}

std::vector<cdouble> from_padded(const std::vector<cdouble>& v, const ChebGrid& g) {
    std::vector<int> shape = padded_shape(g);
    std::vector<cdouble> out = v;
    for (int d = 0; d < g.dims(); ++d) {
        out = apply_axis(out, shape, d, ops(g.n[d]).down);
        shape[d] = g.n[d];
    }
    return out;
}

using ModeMap = std::map<ModeKey, std::vector<cdouble>>;

ModeMap padded(const TFSeries& s) {
    ModeMap out;
    for (const auto& [k, v] : s.coeffs) out.emplace(k, to_padded(v, s.grid));
    return out;
}

void accumulate_products(ModeMap& acc, const ModeMap& A, const ModeMap& B, double sign, const TFSeries& ref) {
    std::size_t size = 1;
    for (int v : padded_shape(ref.grid)) size *= v;
    for (const auto& [ka, va] : A) {
        for (const auto& [kb, vb] : B) {
            const ModeKey key = add_keys(ka, kb);
            if (!ref.admits(key)) continue;
            auto it = acc.find(key);
            if (it == acc.end()) it = acc.emplace(key, std::vector<cdouble>(size)).first;
            auto& dst = it->second;
            for (std::size_t i = 0; i < size; ++i) dst[i] += sign * va[i] * vb[i];
        }
    }
}

TFSeries finish(const ModeMap& acc, const TFSeries& ref) {
    TFSeries out = tf_zero(ref.shape, ref.grid);
    for (const auto& [k, v] : acc) out.coeffs.emplace(k, from_padded(v, ref.grid));
    return out;
}

TFSeries d_axis(const TFSeries& f, int axis) {
    TFSeries out = tf_zero(f.shape, f.grid);
    const double scale = 2.0 / (f.grid.hi[axis] - f.grid.lo[axis]);
    const Matrix<double>& D = ops(f.grid.n[axis]).D;
    for (const auto& [k, v] : f.coeffs) {
        auto d = apply_axis(v, f.grid.n, axis, D);
        for (auto& c : d) c *= scale;
        out.coeffs.emplace(k, std::move(d));
    }
    return out;
}

std::vector<std::vector<int>> all_k(int n, int cutoff) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < n; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out)
            for (int k = -cutoff; k <= cutoff; ++k) {
                auto w = v;
                w.push_back(k);
                next.push_back(std::move(w));
            }
        out = std::move(next);
    }
    return out;
}

// Exponent vectors of length len with total degree <= deg.
std::vector<std::vector<int>> all_exponents(int len, int deg) {
    std::vector<std::vector<int>> out{{}};
    for (int i = 0; i < len; ++i) {
        std::vector<std::vector<int>> next;
        for (const auto& v : out) {
            const int used = std::accumulate(v.begin(), v.end(), 0);
            for (int e = 0; e + used <= deg; ++e) {
                auto w = v;
                w.push_back(e);
                next.push_back(std::move(w));
            }
        }
        out = std::move(next);
    }
    return out;
}

// Values of a tabulated coefficient at one physical point.
cdouble interpolate(const std::vector<cdouble>& v, const ChebGrid& g, const std::vector<double>& pt) {
    std::vector<int> shape = g.n;
    std::vector<cdouble> cur = v;
    for (int d = 0; d < g.dims(); ++d) {
        const double u = (2.0 * pt[d] - g.lo[d] - g.hi[d]) / (g.hi[d] - g.lo[d]);
        cur = apply_axis(cur, shape, d, cheb::interpolation_matrix({u}, g.n[d]));
        shape[d] = 1;
    }
    return cur[0];
}

}  // namespace

std::size_t ChebGrid::size() const {
    std::size_t s = 1;
    for (int v : n) s *= static_cast<std::size_t>(v);
    return s;
}

double ChebGrid::node(int d, int i) const {
    const double u = cheb::cgl_nodes(n[d])[i];
    return 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * u;
}

std::vector<double> ChebGrid::nodes(int d) const {
    const auto u = cheb::cgl_nodes(n[d]);
    std::vector<double> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = 0.5 * (lo[d] + hi[d]) + 0.5 * (hi[d] - lo[d]) * u[i];
    return out;
}

ChebGrid make_grid(int n_actions, const std::vector<double>& lo, const std::vector<double>& hi, int nodes) {
    const std::size_t dims = static_cast<std::size_t>(n_actions) + 2;
    if (lo.size() != dims || hi.size() != dims) throw DomainError("grid box must list (I..., y, x) bounds");
    for (std::size_t d = 0; d < dims; ++d)
        if (!(hi[d] > lo[d])) throw DomainError("grid box bounds must satisfy lo < hi");
    if (nodes < 2) throw DomainError("grid needs at least 2 nodes per dimension");
    ChebGrid g;
    g.n.assign(dims, nodes);
    g.lo = lo;
    g.hi = hi;
    return g;
}

bool ModeKey::is_average() const {
    return std::all_of(k.begin(), k.end(), [](int v) { return v == 0; }) && h == j;
}

bool TFSeries::admits(const ModeKey& key) const {
    if (static_cast<int>(key.k.size()) != shape.n_angles) return false;
    if (static_cast<int>(key.h.size()) != shape.m_pq || static_cast<int>(key.j.size()) != shape.m_pq) return false;
    for (int v : key.k)
        if (std::abs(v) > shape.fourier_cutoff) return false;
    for (int v : key.h)
        if (v < 0) return false;
    for (int v : key.j)
        if (v < 0) return false;
    return pq_deg(key) <= shape.pq_degree;
}

const std::vector<cdouble>* TFSeries::find(const ModeKey& key) const {
    auto it = coeffs.find(key);
    return it == coeffs.end() ? nullptr : &it->second;
}

std::vector<cdouble>& TFSeries::at(const ModeKey& key) {
    if (!admits(key)) throw DomainError("mode outside the series truncation");
    auto it = coeffs.find(key);
    if (it == coeffs.end()) it = coeffs.emplace(key, std::vector<cdouble>(grid.size())).first;
    return it->second;
}

ModeKey TFSeries::zero_key() const {
    return {std::vector<int>(shape.n_angles, 0), std::vector<int>(shape.m_pq, 0), std::vector<int>(shape.m_pq, 0)};
}

cdouble TFSeries::evaluate(const std::vector<double>& I, const std::vector<double>& phi, const std::vector<cdouble>& p,
                           const std::vector<cdouble>& q, double y, double x) const {
    std::vector<double> pt = I;
    pt.push_back(y);
    pt.push_back(x);
    cdouble sum = 0.0;
    for (const auto& [key, v] : coeffs) {
        double arg = 0.0;
        for (std::size_t i = 0; i < key.k.size(); ++i) arg += key.k[i] * phi[i];
        cdouble mono = std::polar(1.0, arg);
        for (std::size_t l = 0; l < key.h.size(); ++l) mono *= std::pow(p[l], key.h[l]) * std::pow(q[l], key.j[l]);
        sum += mono * interpolate(v, grid, pt);
    }
    return sum;
}

TFSeries tf_zero(const TFShape& shape, const ChebGrid& grid) {
    if (shape.n_angles < 0 || shape.m_pq < 0 || shape.fourier_cutoff < 0 || shape.pq_degree < 0) {
        throw DomainError("series shape entries must be non-negative");
    }
    if (grid.dims() != shape.n_angles + 2) throw DomainError("grid dimension must equal n_angles + 2");
    TFSeries s;
    s.shape = shape;
    s.grid = grid;
    return s;
}

TFSeries tf_build(const std::function<cdouble(const TFPoint&)>& f, const TFShape& shape, const ChebGrid& grid,
                  const BuildOptions& opt) {
    TFSeries out = tf_zero(shape, grid);
    const int n = shape.n_angles;
    const int m = shape.m_pq;
    const int M = opt.angle_samples > 0 ? opt.angle_samples : 4 * shape.fourier_cutoff + 4;
    const int S = 2 * shape.pq_degree + 2;
    const auto ks = all_k(n, shape.fourier_cutoff);
    const auto exps = all_exponents(2 * m, shape.pq_degree);

    // sample index -> (angles, p, q)
    std::size_t n_samples = 1;
    for (int i = 0; i < n; ++i) n_samples *= M;
    for (int i = 0; i < 2 * m; ++i) n_samples *= S;
    std::vector<std::vector<double>> ang(n_samples, std::vector<double>(n));
    std::vector<std::vector<double>> circ(n_samples, std::vector<double>(2 * m));
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::size_t r = s;
        for (int i = 2 * m - 1; i >= 0; --i) {
            circ[s][i] = 2.0 * kPi * static_cast<double>(r % S) / S;
            r /= S;
        }
        for (int i = n - 1; i >= 0; --i) {
            ang[s][i] = 2.0 * kPi * static_cast<double>(r % M) / M;
            r /= M;
        }
    }
    struct Target {
        ModeKey key;
        std::vector<cdouble> phase;  // conj basis / normalisation per sample
    };
    std::vector<Target> targets;
    for (const auto& k : ks) {
        for (const auto& e : exps) {
            Target t;
            t.key.k = k;
            t.key.h.assign(e.begin(), e.begin() + m);
            t.key.j.assign(e.begin() + m, e.end());
            t.phase.resize(n_samples);
            double radial = 1.0;
            for (int l = 0; l < 2 * m; ++l) radial *= std::pow(opt.pq_radius, e[l]);
            for (std::size_t s = 0; s < n_samples; ++s) {
                double arg = 0.0;
                for (int i = 0; i < n; ++i) arg += k[i] * ang[s][i];
                for (int l = 0; l < 2 * m; ++l) arg += e[l] * circ[s][l];
                t.phase[s] = std::polar(1.0 / (static_cast<double>(n_samples) * radial), -arg);
            }
            targets.push_back(std::move(t));
        }
    }
    std::vector<std::vector<cdouble>> tab(targets.size(), std::vector<cdouble>(grid.size()));
    std::vector<std::vector<double>> axes(grid.dims());
    for (int d = 0; d < grid.dims(); ++d) axes[d] = grid.nodes(d);
    std::vector<cdouble> vals(n_samples);
    TFPoint pt;
    pt.I.resize(n);
    pt.p.resize(m);
    pt.q.resize(m);
    for (std::size_t node = 0; node < grid.size(); ++node) {
        std::size_t r = node;
        std::vector<int> idx(grid.dims());
        for (int d = grid.dims() - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(r % grid.n[d]);
            r /= grid.n[d];
        }
        for (int i = 0; i < n; ++i) pt.I[i] = axes[i][idx[i]];
        pt.y = axes[n][idx[n]];
        pt.x = axes[n + 1][idx[n + 1]];
        for (std::size_t s = 0; s < n_samples; ++s) {
            pt.phi = ang[s];
            for (int l = 0; l < m; ++l) {
                pt.p[l] = std::polar(opt.pq_radius, circ[s][l]);
                pt.q[l] = std::polar(opt.pq_radius, circ[s][m + l]);
            }
            const cdouble v = f(pt);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                throw DomainError("tf_build: evaluator returned a non-finite value at a sampling node");
            }
            vals[s] = v;
        }
        for (std::size_t t = 0; t < targets.size(); ++t) {
            cdouble acc = 0.0;
            for (std::size_t s = 0; s < n_samples; ++s) acc += targets[t].phase[s] * vals[s];
            tab[t][node] = acc;
        }
    }
    double biggest = 0.0;
    std::vector<double> sups(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        sups[t] = sup_abs(tab[t]);
        biggest = std::max(biggest, sups[t]);
    }
    for (std::size_t t = 0; t < targets.size(); ++t) {
        if (sups[t] > opt.relative_drop * biggest && sups[t] > 0.0) {
            out.coeffs.emplace(targets[t].key, std::move(tab[t]));
        }
    }
    return out;
}

void NormWeights::validate() const {
    if (!(rho > 0.0 && s > 0.0 && delta > 0.0 && r > 0.0 && xi > 0.0)) {
        throw DomainError("norm weights must be strictly positive");
    }
}

SplitSeries tf_average_split(const TFSeries& f) {
    SplitSeries out{tf_zero(f.shape, f.grid), tf_zero(f.shape, f.grid)};
    for (const auto& [k, v] : f.coeffs) (k.is_average() ? out.avg : out.osc).coeffs.emplace(k, v);
    return out;
}

double tf_sup(const TFSeries& f) {
    double m = 0.0;
    for (const auto& [k, v] : f.coeffs) m = std::max(m, sup_abs(v));
    return m;
}

double tf_norm(const TFSeries& f, const NormWeights& w) {
    w.validate();
    double s = 0.0;
    for (const auto& [k, v] : f.coeffs) s += sup_abs(v) * std::exp(w.s * k_l1(k)) * std::pow(w.delta, pq_deg(k));
    return s;
}

double tf_norm_complex(const TFSeries& f, const NormWeights& w) {
    w.validate();
    const int n = f.shape.n_angles;
    std::vector<Matrix<cdouble>> mats;
    for (int d = 0; d < f.grid.dims(); ++d) {
        const double width = d < n ? w.rho : (d == n ? w.r : w.xi);
        const double im = 2.0 * width / (f.grid.hi[d] - f.grid.lo[d]);
        const auto u = cheb::cgl_nodes(f.grid.n[d]);
        std::vector<cdouble> pts;
        for (double v : u) pts.emplace_back(v, im);
        for (double v : u) pts.emplace_back(v, -im);
        const auto E = cheb::coeffs_to_values(pts, f.grid.n[d]);
        const auto& C = ops(f.grid.n[d]).to_coeffs;
        Matrix<cdouble> M(E.rows, C.cols);
        for (int i = 0; i < E.rows; ++i)
            for (int k = 0; k < E.cols; ++k)
                for (int j = 0; j < C.cols; ++j) M(i, j) += E(i, k) * C(k, j);
        mats.push_back(std::move(M));
    }
    double s = 0.0;
    for (const auto& [k, v] : f.coeffs) {
        std::vector<int> shape = f.grid.n;
        std::vector<cdouble> cur = v;
        for (int d = 0; d < f.grid.dims(); ++d) {
            cur = apply_axis(cur, shape, d, mats[d]);
            shape[d] = mats[d].rows;
        }
        s += std::max(sup_abs(cur), sup_abs(v)) * std::exp(w.s * k_l1(k)) * std::pow(w.delta, pq_deg(k));
    }
    return s;
}

TFSeries& operator+=(TFSeries& a, const TFSeries& b) {
    require_compatible(a, b);
    for (const auto& [k, v] : b.coeffs) {
        auto it = a.coeffs.find(k);
        if (it == a.coeffs.end()) {
            a.coeffs.emplace(k, v);
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) it->second[i] += v[i];
        }
    }
    return a;
}

TFSeries operator+(const TFSeries& a, const TFSeries& b) {
    TFSeries r = a;
    r += b;
    return r;
}

TFSeries operator*(cdouble c, const TFSeries& a) {
    TFSeries r = a;
    for (auto& [k, v] : r.coeffs)
        for (auto& x : v) x *= c;
    return r;
}

TFSeries operator-(const TFSeries& a, const TFSeries& b) { return a + cdouble(-1.0) * b; }

TFSeries tf_multiply(const TFSeries& a, const TFSeries& b) {
    require_compatible(a, b);
    ModeMap acc;
    accumulate_products(acc, padded(a), padded(b), 1.0, a);
    return finish(acc, a);
}

TFSeries d_action(const TFSeries& f, int i) {
    if (i < 0 || i >= f.shape.n_angles) throw DomainError("action index out of range");
    return d_axis(f, i);
}

TFSeries d_y(const TFSeries& f) { return d_axis(f, f.shape.n_angles); }

TFSeries d_x(const TFSeries& f) { return d_axis(f, f.shape.n_angles + 1); }

TFSeries d_angle(const TFSeries& f, int i) {
    if (i < 0 || i >= f.shape.n_angles) throw DomainError("angle index out of range");
    TFSeries out = tf_zero(f.shape, f.grid);
    for (const auto& [k, v] : f.coeffs) {
        if (k.k[i] == 0) continue;
        const cdouble c(0.0, k.k[i]);
        auto w = v;
        for (auto& x : w) x *= c;
        out.coeffs.emplace(k, std::move(w));
    }
    return out;
}

TFSeries d_p(const TFSeries& f, int l) {
    if (l < 0 || l >= f.shape.m_pq) throw DomainError("pq index out of range");
    TFSeries out = tf_zero(f.shape, f.grid);
    for (const auto& [k, v] : f.coeffs) {
        if (k.h[l] == 0) continue;
        ModeKey nk = k;
        nk.h[l] -= 1;
        auto w = v;
        for (auto& x : w) x *= static_cast<double>(k.h[l]);
        out.coeffs.emplace(nk, std::move(w));
    }
    return out;
}

TFSeries d_q(const TFSeries& f, int l) {
    if (l < 0 || l >= f.shape.m_pq) throw DomainError("pq index out of range");
    TFSeries out = tf_zero(f.shape, f.grid);
    for (const auto& [k, v] : f.coeffs) {
        if (k.j[l] == 0) continue;
        ModeKey nk = k;
        nk.j[l] -= 1;
        auto w = v;
        for (auto& x : w) x *= static_cast<double>(k.j[l]);
        out.coeffs.emplace(nk, std::move(w));
    }
    return out;
}

TFSeries poisson_bracket(const TFSeries& f, const TFSeries& g) {
    require_compatible(f, g);
    ModeMap acc;
    for (int i = 0; i < f.shape.n_angles; ++i) {
        accumulate_products(acc, padded(d_action(f, i)), padded(d_angle(g, i)), 1.0, f);
        accumulate_products(acc, padded(d_action(g, i)), padded(d_angle(f, i)), -1.0, f);
    }
    for (int l = 0; l < f.shape.m_pq; ++l) {
        accumulate_products(acc, padded(d_p(f, l)), padded(d_q(g, l)), 1.0, f);
        accumulate_products(acc, padded(d_p(g, l)), padded(d_q(f, l)), -1.0, f);
    }
    accumulate_products(acc, padded(d_y(f)), padded(d_x(g)), 1.0, f);
    accumulate_products(acc, padded(d_y(g)), padded(d_x(f)), -1.0, f);
    return finish(acc, f);
}

TFSeries tf_from_grid_function(const std::function<double(const std::vector<double>&, double, double)>& f,
                               const TFShape& shape, const ChebGrid& grid) {
    TFSeries out = tf_zero(shape, grid);
    auto& v = out.at(out.zero_key());
    const int n = shape.n_angles;
    std::vector<std::vector<double>> axes(grid.dims());
    for (int d = 0; d < grid.dims(); ++d) axes[d] = grid.nodes(d);
    std::vector<double> I(n);
    for (std::size_t node = 0; node < grid.size(); ++node) {
        std::size_t r = node;
        std::vector<int> idx(grid.dims());
        for (int d = grid.dims() - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(r % grid.n[d]);
            r /= grid.n[d];
        }
        for (int i = 0; i < n; ++i) I[i] = axes[i][idx[i]];
        v[node] = f(I, axes[n][idx[n]], axes[n + 1][idx[n + 1]]);
    }
    return out;
}

std::string tf_to_json(const TFSeries& f, int indent) {
    nlohmann::json j;
    j["format"] = "perilib.tfseries";
    j["version"] = 1;
    j["shape"] = {{"n_angles", f.shape.n_angles},
                  {"m_pq", f.shape.m_pq},
                  {"fourier_cutoff", f.shape.fourier_cutoff},
                  {"pq_degree", f.shape.pq_degree}};
    j["grid"] = {{"n", f.grid.n}, {"lo", f.grid.lo}, {"hi", f.grid.hi}, {"order", "row-major, x fastest"}};
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& [k, v] : f.coeffs) {
        std::vector<double> re(v.size()), im(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            re[i] = v[i].real();
            im[i] = v[i].imag();
        }
        modes.push_back({{"k", k.k}, {"h", k.h}, {"j", k.j}, {"re", re}, {"im", im}});
    }
    j["modes"] = std::move(modes);
    return j.dump(indent);
}

TFSeries tf_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("format").get<std::string>() != "perilib.tfseries") throw DomainError("not a serialized series");
        TFShape shape;
        shape.n_angles = j.at("shape").at("n_angles").get<int>();
        shape.m_pq = j.at("shape").at("m_pq").get<int>();
        shape.fourier_cutoff = j.at("shape").at("fourier_cutoff").get<int>();
        shape.pq_degree = j.at("shape").at("pq_degree").get<int>();
        ChebGrid grid;
        grid.n = j.at("grid").at("n").get<std::vector<int>>();
        grid.lo = j.at("grid").at("lo").get<std::vector<double>>();
        grid.hi = j.at("grid").at("hi").get<std::vector<double>>();
        TFSeries out = tf_zero(shape, grid);
        for (const auto& m : j.at("modes")) {
            ModeKey key{m.at("k").get<std::vector<int>>(), m.at("h").get<std::vector<int>>(),
                        m.at("j").get<std::vector<int>>()};
            const auto re = m.at("re").get<std::vector<double>>();
            const auto im = m.at("im").get<std::vector<double>>();
            if (re.size() != grid.size() || im.size() != grid.size()) {
                throw DomainError("serialized coefficient array has the wrong length");
            }
            auto& v = out.at(key);
            for (std::size_t i = 0; i < re.size(); ++i) v[i] = {re[i], im[i]};
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("malformed series JSON: ") + e.what());
    }
}

}  // namespace perilib
