#include "perilib/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "perilib/error.hpp"

namespace perilib {

namespace {

struct NodeFreq {
    std::vector<double> wI;
    std::vector<double> wJ;
    double wy = 0.0;
};

// Frequencies at every (I, y) line of the grid; index = line (x stripped).
std::vector<NodeFreq> tabulate(const ChebGrid& g, const TFShape& shape, const FrequencyData& freq) {
    if (!freq.omega_y) throw DomainError("frequency data must provide omega_y");
    const int n = shape.n_angles;
    std::size_t lines = 1;
    for (int d = 0; d <= n; ++d) lines *= g.n[d];
    std::vector<std::vector<double>> axes(n + 1);
    for (int d = 0; d <= n; ++d) axes[d] = g.nodes(d);
    std::vector<NodeFreq> out(lines);
    std::vector<double> I(n);
    for (std::size_t L = 0; L < lines; ++L) {
        std::size_t r = L;
        std::vector<int> idx(n + 1);
        for (int d = n; d >= 0; --d) {
            idx[d] = static_cast<int>(r % g.n[d]);
            r /= g.n[d];
        }
        for (int i = 0; i < n; ++i) I[i] = axes[i][idx[i]];
        const double y = axes[n][idx[n]];
        NodeFreq& nf = out[L];
        nf.wI = freq.omega_I ? freq.omega_I(I, y) : std::vector<double>(n, 0.0);
        nf.wJ = freq.omega_J ? freq.omega_J(I, y) : std::vector<double>(shape.m_pq, 0.0);
        nf.wy = freq.omega_y(I, y);
        if (static_cast<int>(nf.wI.size()) != n || static_cast<int>(nf.wJ.size()) != shape.m_pq) {
            throw DomainError("frequency vectors have the wrong length");
        }
        if (!(std::abs(nf.wy) > 1e-300) || !std::isfinite(nf.wy)) {
            throw SingularityError("omega_y vanishes on the box");
        }
    }
    return out;
}

cdouble lambda(const ModeKey& k, const NodeFreq& nf) {
    double re = 0.0, im = 0.0;
    for (std::size_t l = 0; l < k.h.size(); ++l) re += (k.j[l] - k.h[l]) * nf.wJ[l];
    for (std::size_t i = 0; i < k.k.size(); ++i) im += k.k[i] * nf.wI[i];
    return {re, im};
}

}  // namespace

TFSeries nqp_primitive(const TFSeries& f_osc, const FrequencyData& freq, const NqpOptions& opt) {
    for (const auto& [k, v] : f_osc.coeffs) {
        if (k.is_average()) {
            for (const auto& c : v)
                if (c != cdouble(0.0)) throw DomainError("nqp_primitive: input has a non-zero average part");
        }
    }
    const ChebGrid& g = f_osc.grid;
    const int n = f_osc.shape.n_angles;
    const int ax = n + 1;
    const int nx = g.n[ax];
    if (!(opt.x0 >= g.lo[ax] && opt.x0 <= g.hi[ax])) {
        throw DomainError("nqp_primitive: base point x0 lies outside the x-range of the grid");
    }
    if (opt.quad_points < 2) throw DomainError("nqp_primitive: quad_points must be at least 2");
    const auto nf = tabulate(g, f_osc.shape, freq);
    const auto xs = g.nodes(ax);
    const auto cc = cheb::clenshaw_curtis(opt.quad_points);
    const int Q = opt.quad_points;

    struct NodeRule {
        std::vector<double> offset;  // tau_q - x_m
        std::vector<double> weight;
        cheb::Matrix<double> interp;  // Q x nx
    };
    std::vector<NodeRule> rules(nx);
    for (int m = 0; m < nx; ++m) {
        const double half = 0.5 * (xs[m] - opt.x0);
        std::vector<double> u(Q);
        rules[m].offset.resize(Q);
        rules[m].weight.resize(Q);
        for (int q = 0; q < Q; ++q) {
            const double tau = opt.x0 + half * (1.0 + cc.nodes[q]);
            u[q] = std::clamp((2.0 * tau - g.lo[ax] - g.hi[ax]) / (g.hi[ax] - g.lo[ax]), -1.0, 1.0);
            rules[m].offset[q] = tau - xs[m];
            rules[m].weight[q] = half * cc.weights[q];
        }
        rules[m].interp = cheb::interpolation_matrix(u, nx);
    }

    TFSeries out = tf_zero(f_osc.shape, g);
    std::vector<cdouble> vals(Q);
    for (const auto& [key, f] : f_osc.coeffs) {
        std::vector<cdouble> phi(f.size());
        for (std::size_t L = 0; L < nf.size(); ++L) {
            const cdouble lam = lambda(key, nf[L]);
            const double wy = nf[L].wy;
            const cdouble* line = &f[L * nx];
            for (int m = 0; m < nx; ++m) {
                const NodeRule& R = rules[m];
                cdouble acc = 0.0;
                for (int q = 0; q < Q; ++q) {
                    cdouble v = 0.0;
                    for (int i = 0; i < nx; ++i) v += R.interp(q, i) * line[i];
                    acc += R.weight[q] * std::exp(lam * (R.offset[q] / wy)) * v;
                }
                phi[L * nx + m] = acc / wy;
            }
        }
        out.coeffs.emplace(key, std::move(phi));
    }
    return out;
}

double homological_residual(const TFSeries& phi, const TFSeries& f_osc, const FrequencyData& freq) {
    const auto nf = tabulate(phi.grid, phi.shape, freq);
    const int nx = phi.grid.n[phi.shape.n_angles + 1];
    const TFSeries dphi = d_x(phi);
    double worst = 0.0;
    for (const auto& [key, f] : f_osc.coeffs) {
        const auto* p = phi.find(key);
        const auto* dp = dphi.find(key);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const NodeFreq& q = nf[i / nx];
            const cdouble lhs = p ? q.wy * (*dp)[i] + lambda(key, q) * (*p)[i] : cdouble(0.0);
            worst = std::max(worst, std::abs(lhs - f[i]));
        }
    }
    for (const auto& [key, p] : phi.coeffs) {
        if (f_osc.find(key)) continue;
        const auto& dp = *dphi.find(key);
        for (std::size_t i = 0; i < p.size(); ++i) {
            const NodeFreq& q = nf[i / nx];
            worst = std::max(worst, std::abs(q.wy * dp[i] + lambda(key, q) * p[i]));
        }
    }
    return worst;
}

double contraction_scale(const NormWeights& w, int m_pq) {
    double d = std::min(w.rho * w.s, w.r * w.xi);
    if (m_pq > 0) d = std::min(d, w.delta * w.delta);
    return d;
}

TFSeries lie_transform(const TFSeries& H, const TFSeries& phi, const LieOptions& opt, LieReport* report) {
    LieReport rep;
    const double d = contraction_scale(opt.weights, phi.shape.m_pq);
    rep.contraction = opt.c_bar * tf_norm(phi, opt.weights) / d;
    if (!(rep.contraction < 1.0)) {
        throw ContractionError("lie_transform: contraction factor " + std::to_string(rep.contraction) +
                                   " is not below 1",
                               rep.contraction, 0);
    }
    TFSeries sum = H;
    TFSeries term = H;
    const double base = tf_norm(H, opt.weights);
    double prev = base;
    rep.term_norms.push_back(base);
    for (int j = 1; j <= opt.max_order && prev > 0.0; ++j) {
        term = (1.0 / j) * poisson_bracket(phi, term);
        const double nt = tf_norm(term, opt.weights);
        sum += term;
        rep.terms = j;
        rep.term_norms.push_back(nt);
        rep.ratio = nt / prev;
        prev = nt;
        if (nt <= opt.rel_tol * base) break;
    }
    rep.tail_bound = rep.ratio < 1.0 ? prev * rep.ratio / (1.0 - rep.ratio) : std::numeric_limits<double>::infinity();
    if (prev == 0.0) rep.tail_bound = 0.0;
    if (report) *report = rep;
    return sum;
}

NormWeights schedule_weights(const NormWeights& w0, int j, int N) {
    if (N <= 0 || j <= 0) return w0;
    const double f = 2.0 / 3.0 - static_cast<double>(j - 1) / (3.0 * N);
    return w0.scaled(f);
}

NormalFormResult normal_form_steps(const TFSeries& f, const FrequencyData& freq, int N, const NormalFormOptions& opt) {
    if (N < 0) throw DomainError("normal_form_steps: N must be non-negative");
    opt.weights.validate();
    NormalFormResult res;
    TFSeries fj = f;
    TFSeries g = tf_zero(f.shape, f.grid);
    for (int j = 1; j <= N; ++j) {
        StepRecord rec;
        rec.step = j;
        rec.weights = schedule_weights(opt.weights, j, N);
        const SplitSeries sp = tf_average_split(fj);
        rec.f_norm = tf_norm(fj, rec.weights);
        rec.f_osc_norm = tf_norm(sp.osc, rec.weights);
        rec.f_avg_norm = tf_norm(sp.avg, rec.weights);

        const TFSeries phi = nqp_primitive(sp.osc, freq, opt.nqp);
        rec.phi_norm = tf_norm(phi, rec.weights);
        rec.homological_residual = homological_residual(phi, sp.osc, freq);
        rec.contraction = opt.lie.c_bar * rec.phi_norm / contraction_scale(rec.weights, f.shape.m_pq);
        if (!(rec.contraction < 1.0)) {
            throw ContractionError("normal_form_steps: contraction lost at step " + std::to_string(j) +
                                       " (factor " + std::to_string(rec.contraction) + ")",
                                   rec.contraction, j);
        }
        // f_{j+1} = sum_{i>=1} L^i (f + g) / i! - sum_{i>=1} L^i f_osc / (i+1)!
        TFSeries next = tf_zero(f.shape, f.grid);
        TFSeries a = fj + g;
        TFSeries b = sp.osc;
        const double base = std::max(tf_norm(a, rec.weights), tf_norm(b, rec.weights));
        double last_a = base, ratio = 0.0;
        for (int i = 1; i <= opt.lie.max_order; ++i) {
            a = (1.0 / i) * poisson_bracket(phi, a);
            b = (1.0 / i) * poisson_bracket(phi, b);
            next += a;
            next += (-1.0 / (i + 1)) * b;
            rec.lie_terms = i;
            const double na = tf_norm(a, rec.weights);
            const double nb = tf_norm(b, rec.weights);
            ratio = last_a > 0.0 ? na / last_a : 0.0;
            last_a = na;
            if (std::max(na, nb) <= opt.lie.rel_tol * base) break;
        }
        rec.tail_bound = ratio < 1.0 ? last_a * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
        res.steps.push_back(rec);
        g += sp.avg;
        fj = std::move(next);
    }
    StepRecord last;
    last.step = N + 1;
    last.weights = schedule_weights(opt.weights, N + 1, N);
    const SplitSeries sp = tf_average_split(fj);
    last.f_norm = tf_norm(fj, last.weights);
    last.f_osc_norm = tf_norm(sp.osc, last.weights);
    last.f_avg_norm = tf_norm(sp.avg, last.weights);
    res.steps.push_back(last);
    res.g_star = std::move(g);
    res.f_star = std::move(fj);
    return res;
}

DeskModelSpec default_desk_model() {
    DeskModelSpec s;
    s.ham.index = HamiltonianIndex::H2;
    s.ham.m0 = 1.0;
    s.ham.Lambda = 1.0;
    s.ham.masses = derive_mass_params(1.0, 0.1, Frame::m0centric);
    return s;
}

DeskModel build_desk_model(const DeskModelSpec& spec) {
    validate(spec.ham);
    if (spec.shape.n_angles != 1 || spec.shape.m_pq != 0) throw DomainError("desk model has one angle and no (p, q)");
    const ChebGrid grid = make_grid(1, {spec.Gcal_lo, spec.y_lo, spec.x_lo}, {spec.Gcal_hi, spec.y_hi, spec.x_hi},
                                    spec.nodes);
    const HamiltonianSpec ham = spec.ham;
    const QuadratureSpec quad = spec.quad;
    const double m05 = std::pow(ham.m0, 5);
    DeskModel out;
    out.f = tf_build(
        [&](const TFPoint& p) {
            return cdouble(perturbation_f(ham, {p.I[0], p.phi[0], p.y, p.x}, quad), 0.0);
        },
        spec.shape, grid);
    out.h = tf_from_grid_function([m05](const std::vector<double>&, double y, double) { return -m05 / (2.0 * y * y); },
                                  spec.shape, grid);
    out.freq.omega_I = [](const std::vector<double>&, double) { return std::vector<double>{0.0}; };
    out.freq.omega_y = [m05](const std::vector<double>&, double y) { return m05 / (y * y * y); };
    return out;
}

}  // namespace perilib
