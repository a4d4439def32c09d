#include "perilib/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "perilib/error.hpp"
#include "perilib/kepler.hpp"

namespace perilib {

namespace {

constexpr double kPi = std::numbers::pi;

thread_local std::uint64_t tl_fhat_count = 0;

struct Nodes {
    int n = 0;
    std::vector<double> c;  // cos xi_i
    std::vector<double> s;  // sin xi_i
};

const Nodes& nodes(int n) {
    thread_local Nodes cache;
    if (cache.n != n) {
        cache.n = n;
        cache.c.resize(n);
        cache.s.resize(n);
        for (int i = 0; i < n; ++i) {
            const double xi = 2.0 * kPi * i / n;
            cache.c[i] = std::cos(xi);
            cache.s[i] = std::sin(xi);
        }
        // exact values at the symmetry nodes
        cache.c[0] = 1.0;
        cache.s[0] = 0.0;
        cache.c[n / 2] = -1.0;
        cache.s[n / 2] = 0.0;
    }
    return cache;
}

void check_lambda_g(double Lambda, double G) {
    if (!(Lambda > 0.0)) throw DomainError("Lambda must be positive");
    if (std::abs(G) > Lambda * (1.0 + 1e-15)) throw DomainError("|G| exceeds Lambda");
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void validate(const QuadratureSpec& q) {
    if (q.n_nodes < 32 || q.n_nodes % 2 != 0) {
        throw DomainError("quadrature n_nodes must be even and at least 32");
    }
}

RhoP rho_p(double Lambda, double G, double ell, double g) {
    check_lambda_g(Lambda, G);
    const double q = G / Lambda;
    const double e = std::sqrt(std::max(0.0, 1.0 - q * q));
    const double xi = e < 1.0 ? solve_kepler(e, ell).xi : solve_kepler_zero_ecc_form(ell).xi;
    RhoP out;
    out.rho = 1.0 - e * std::cos(xi);
    out.p = (std::cos(xi) - e) * std::cos(g) - q * std::sin(xi) * std::sin(g);
    return out;
}

double u_hat(double eps, double Lambda, double G, double g, const QuadratureSpec& quad) {
    validate(quad);
    check_lambda_g(Lambda, G);
    if (eps == 0.0) return 1.0;  // mean of 1 - e cos xi
    const Nodes& nd = nodes(quad.n_nodes);
    const double q = G / Lambda;
    const double e = std::sqrt(std::max(0.0, 1.0 - q * q));
    const double cg = std::cos(g);
    const double sg = std::sin(g);
    double sum = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < quad.n_nodes; ++i) {
        const double rho = 1.0 - e * nd.c[i];
        const double p = (nd.c[i] - e) * cg - q * nd.s[i] * sg;
        const double d = 1.0 + 2.0 * eps * p + eps * eps * rho * rho;
        dmin = std::min(dmin, d);
        sum += rho / std::sqrt(std::max(d, 0.0));
    }
    if (dmin < kRadicandGuard) {
        throw SingularityError("u_hat: radicand " + fmt(dmin) + " below guard near the singular locus");
    }
    return sum / quad.n_nodes;
}

double e_hat(double eps, double Lambda, double G, double g) {
    check_lambda_g(Lambda, G);
    const double q = G / Lambda;
    return std::sqrt(std::max(0.0, 1.0 - q * q)) * std::cos(g) + eps * q * q;
}

double e_hat_aa(double eps, double Lambda, double Gcal, double gamma) {
    check_lambda_g(Lambda, Gcal);
    const double q = Gcal / Lambda;
    const double c = std::cos(gamma);
    return q + eps * (1.0 - q * q) * c * c;
}

namespace {

constexpr double kRefineBelow = 1e-2;
constexpr int kMaxRefinedNodes = 1 << 18;

struct Sweep {
    FHatJet jet;
    double dmin = 0.0;
};

Sweep f_sweep(double eps, double t, int n) {
    const Nodes& nd = nodes(n);
    double v = 0.0, m1 = 0.0, dt = 0.0, de = 0.0;
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double c = 1.0 - nd.c[i];
        const double one_minus_d = eps * c * (2.0 * t - eps * c);
        const double d = 1.0 - one_minus_d;
        dmin = std::min(dmin, d);
        if (d <= 0.0) continue;
        const double sd = std::sqrt(d);
        const double inv3 = 1.0 / (d * sd);
        v += c / sd;
        m1 += c * one_minus_d / (sd * (1.0 + sd));
        dt += eps * c * c * inv3;
        de += c * (c * t - eps * c * c) * inv3;
    }
    return {{v / n, m1 / n, dt / n, de / n}, dmin};
}

}  // namespace

FHatJet f_eps_jet(double eps, double t, const QuadratureSpec& quad) {
    validate(quad);
    if (!(std::abs(eps) < 0.5)) {
        throw DomainError("f_eps: requires |eps| < 1/2, got eps = " + fmt(eps));
    }
    if (!std::isfinite(t)) throw DomainError("f_eps: non-finite t");
    ++tl_fhat_count;
    // eps = 0: the integrand is 1 - cos xi, with mean 1 and d/deps mean (1 - cos xi)^2 t = 3t/2.
    if (eps == 0.0) return {1.0, 0.0, 0.0, 1.5 * t};
    auto guard = [&](double dmin) {
        if (dmin < kRadicandGuard) {
            throw SingularityError("f_eps: radicand " + fmt(dmin) + " below guard (eps = " + fmt(eps) +
                                   ", t = " + fmt(t) + ", singular t = " +
                                   (eps != 0.0 ? fmt(eps + 0.25 / eps) : std::string("inf")) + ")");
        }
    };
    Sweep s = f_sweep(eps, t, quad.n_nodes);
    guard(s.dmin);
    // Near the singular locus the integrand peaks on a width ~ sqrt(dmin); refine until converged.
    if (s.dmin >= kRefineBelow) return s.jet;
    for (int n = 2 * quad.n_nodes; n <= kMaxRefinedNodes; n *= 2) {
        const Sweep f = f_sweep(eps, t, n);
        guard(f.dmin);
        const bool done = std::abs(f.jet.value - s.jet.value) <= 2e-12 * std::abs(f.jet.value) &&
                          std::abs(f.jet.d_t - s.jet.d_t) <= 1e-9 * std::abs(f.jet.d_t);
        s = f;
        if (done) return s.jet;
    }
    throw SingularityError("f_eps: quadrature unresolved near the singular locus (radicand " + fmt(s.dmin) +
                           ", eps = " + fmt(eps) + ", t = " + fmt(t) + ")");
}

double f_eps(double eps, double t, const QuadratureSpec& quad) { return f_eps_jet(eps, t, quad).value; }

double f_eps_derivative(double eps, double t, const QuadratureSpec& quad) {
    return f_eps_jet(eps, t, quad).d_t;
}

double f_eps_at_one(double eps) {
    if (!(eps < 0.5)) throw DomainError("f_eps_at_one: requires eps < 1/2");
    const double s = std::sqrt(1.0 - 2.0 * eps);
    return 2.0 / (s * (1.0 + s));
}

double singularity_t(double eps) {
    if (eps == 0.0) throw DomainError("singularity_t: eps must be nonzero");
    return eps + 0.25 / eps;
}

std::uint64_t fhat_evaluation_count() { return tl_fhat_count; }

RenormCheck check_renorm_identity(double eps, double Lambda, int sample_n,
                                  const QuadratureSpec& quad, std::uint64_t seed) {
    if (!(std::abs(eps) < 0.5)) {
        throw DomainError("renormalization identity requires |eps| < 1/2, got eps = " + fmt(eps));
    }
    if (sample_n <= 0) throw DomainError("sample_n must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uG(-Lambda, Lambda);
    std::uniform_real_distribution<double> ug(-kPi, kPi);
    RenormCheck out;
    while (out.samples < sample_n) {
        const double G = uG(rng);
        const double g = ug(rng);
        try {
            const double lhs = u_hat(eps, Lambda, G, g, quad);
            const double rhs = f_eps(eps, e_hat(eps, Lambda, G, g), quad);
            out.max_residual = std::max(out.max_residual, std::abs(lhs - rhs));
            ++out.samples;
        } catch (const SingularityError&) {
            if (++out.rejected > 100 * sample_n) throw;
        }
    }
    return out;
}

double bracket_u_e(double eps, double Lambda, double G, double g, double h,
                   const QuadratureSpec& quad) {
    const double uG = (u_hat(eps, Lambda, G + h, g, quad) - u_hat(eps, Lambda, G - h, g, quad)) / (2 * h);
    const double ug = (u_hat(eps, Lambda, G, g + h, quad) - u_hat(eps, Lambda, G, g - h, quad)) / (2 * h);
    const double eG = (e_hat(eps, Lambda, G + h, g) - e_hat(eps, Lambda, G - h, g)) / (2 * h);
    const double eg = (e_hat(eps, Lambda, G, g + h) - e_hat(eps, Lambda, G, g - h)) / (2 * h);
    return uG * eg - ug * eG;
}

BracketCheck check_bracket_commutation(double eps, double Lambda, int sample_n, double h,
                                       const QuadratureSpec& quad, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uG(-0.95 * Lambda, 0.95 * Lambda);
    std::uniform_real_distribution<double> ug(-kPi, kPi);
    BracketCheck out;
    for (int i = 0; i < sample_n; ++i) {
        const double G = uG(rng);
        const double g = ug(rng);
        out.max_abs = std::max(out.max_abs, std::abs(bracket_u_e(eps, Lambda, G, g, h, quad)));
        ++out.samples;
    }
    return out;
}

}  // namespace perilib
