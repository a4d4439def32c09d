#include "perilib/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "perilib/error.hpp"

namespace perilib {

namespace {

struct Branch {
    double w = 0.0;  // weight
    double c = 0.0;  // eps_i = c * a / r
};

struct Branches {
    std::array<Branch, 2> b{};
    int n = 0;
    double w_direct = 0.0;  // weight of the bare -m0^2/r term (H2)
};

Branches branches(const HamiltonianSpec& s) {
    const double b = s.masses.beta;
    const double bb = s.masses.beta_bar;
    Branches out;
    if (s.index == HamiltonianIndex::H1) {
        out.b[0] = {bb / (b + bb), b};
        out.b[1] = {b / (b + bb), -bb};
        out.n = 2;
    } else {
        out.b[0] = {bb / (b + bb), b + bb};
        out.n = 1;
        out.w_direct = b / (b + bb);
    }
    return out;
}

struct EJet {
    double t = 0.0;
    double du = 0.0;
    double dv = 0.0;
    double deps = 0.0;
};

struct PotentialSum {
    double Q = 0.0;   // sum w_i (F_i - 1)
    double Qu = 0.0;
    double Qv = 0.0;
    double Qr = 0.0;  // explicit r-dependence through eps_i
};

template <class EFn>
PotentialSum potential_sum(const HamiltonianSpec& spec, double r, EFn efn, const QuadratureSpec& quad) {
    const Branches br = branches(spec);
    const double eps = spec.a() / r;
    PotentialSum out;
    for (int i = 0; i < br.n; ++i) {
        const double ei = br.b[i].c * eps;
        if (!(std::abs(ei) < 0.5)) {
            throw SingularityError("Hamiltonian branch eps = " + std::to_string(ei) +
                                   " violates |eps| < 1/2 (r too close to the branch radius)");
        }
        const EJet e = efn(ei);
        const FHatJet f = f_eps_jet(ei, e.t, quad);
        const double w = br.b[i].w;
        out.Q += w * f.minus_one;
        out.Qu += w * f.d_t * e.du;
        out.Qv += w * f.d_t * e.dv;
        out.Qr += w * (f.d_eps + f.d_t * e.deps) * (-ei / r);
    }
    return out;
}

EJet e_secular(double eps, double Lambda, double G, double g, bool derivs) {
    const double q = G / Lambda;
    const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
    EJet e;
    e.t = s * std::cos(g) + eps * q * q;
    e.dv = -s * std::sin(g);
    e.deps = q * q;
    if (derivs) {
        if (!(s > 0.0)) throw DomainError("gradient: |G| = Lambda is outside the secular chart");
        e.du = (G / (Lambda * Lambda)) * (2.0 * eps - std::cos(g) / s);
    }
    return e;
}

EJet e_action_angle(double eps, double Lambda, double Gc, double gamma) {
    const double q = Gc / Lambda;
    const double c = std::cos(gamma);
    const double one_q2 = 1.0 - q * q;
    EJet e;
    e.t = q + eps * one_q2 * c * c;
    e.du = 1.0 / Lambda - 2.0 * eps * q * c * c / Lambda;
    e.dv = -eps * one_q2 * std::sin(2.0 * gamma);
    e.deps = one_q2 * c * c;
    return e;
}

void check_r(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("radius must be positive and finite");
}

Vec4 analytic_secular(const HamiltonianSpec& spec, const SecularState& s, const QuadratureSpec& quad) {
    check_r(s.r);
    if (std::abs(s.G) > spec.Lambda) throw DomainError("|G| exceeds Lambda");
    const double m0 = spec.m0;
    const double L = spec.Lambda;
    const PotentialSum P = potential_sum(
        spec, s.r, [&](double e) { return e_secular(e, L, s.G, s.g, true); }, quad);
    const double k = m0 * m0 / s.r;
    const double r2 = s.r * s.r;
    Vec4 d;
    d[0] = s.R / m0;
    d[1] = s.G / (m0 * r2) - k * P.Qu;
    d[2] = -s.G * s.G / (m0 * r2 * s.r) + k / s.r * (1.0 + P.Q) - k * P.Qr;
    d[3] = -k * P.Qv;
    return d;
}

struct AaParts {
    double f = 0.0;
    double f_G = 0.0;
    double f_gamma = 0.0;
    double f_r = 0.0;
    RrJet rr;
};

AaParts aa_parts(const HamiltonianSpec& spec, const ActionAngleState& s, const QuadratureSpec& quad) {
    AaParts out;
    out.rr = rr_forward_jet(spec.m0, s.y, s.x);
    const double r = out.rr.r;
    check_r(r);
    const double m0 = spec.m0;
    const double L = spec.Lambda;
    const PotentialSum P = potential_sum(
        spec, r, [&](double e) { return e_action_angle(e, L, s.Gcal, s.gamma); }, quad);
    const double c = std::cos(s.gamma);
    const double w = L * L - s.Gcal * s.Gcal;
    const double r2 = r * r;
    const double k = m0 * m0 / r;
    const double cent = w * c * c / (2.0 * m0 * r2);
    out.f = cent - k * P.Q;
    out.f_G = -s.Gcal * c * c / (m0 * r2) - k * P.Qu;
    out.f_gamma = -w * std::sin(2.0 * s.gamma) / (2.0 * m0 * r2) - k * P.Qv;
    out.f_r = -2.0 * cent / r + k / r * P.Q - k * P.Qr;
    return out;
}

Vec4 analytic_action_angle(const HamiltonianSpec& spec, const ActionAngleState& s,
                           const QuadratureSpec& quad) {
    const AaParts p = aa_parts(spec, s, quad);
    const double m0 = spec.m0;
    Vec4 d;
    d[0] = p.f_G;
    d[1] = p.f_gamma;
    d[2] = std::pow(m0, 5) / (s.y * s.y * s.y) + p.f_r * p.rr.dr_dy;
    d[3] = p.f_r * p.rr.dr_dx;
    return d;
}

}  // namespace

void validate(const HamiltonianSpec& spec) {
    if (!(spec.m0 > 0.0) || !(spec.Lambda > 0.0)) throw DomainError("m0 and Lambda must be positive");
    if (!(spec.masses.beta > 0.0) || !(spec.masses.beta_bar > 0.0)) {
        throw DomainError("mass parameters not initialised");
    }
}

double admissible_radius(const HamiltonianSpec& spec) {
    const Branches br = branches(spec);
    double c = 0.0;
    for (int i = 0; i < br.n; ++i) c = std::max(c, std::abs(br.b[i].c));
    return 2.0 * c * spec.a();
}

double branch_radius(const HamiltonianSpec& spec) {
    const double b = spec.masses.beta;
    const double bb = spec.masses.beta_bar;
    return 2.0 * (spec.index == HamiltonianIndex::H1 ? b : b + bb) * spec.a();
}

double h_secular(const HamiltonianSpec& spec, const SecularState& s, const QuadratureSpec& quad) {
    check_r(s.r);
    if (std::abs(s.G) > spec.Lambda) throw DomainError("|G| exceeds Lambda");
    const double m0 = spec.m0;
    const double L = spec.Lambda;
    const PotentialSum P = potential_sum(
        spec, s.r, [&](double e) { return e_secular(e, L, s.G, s.g, false); }, quad);
    return s.R * s.R / (2.0 * m0) + s.G * s.G / (2.0 * m0 * s.r * s.r) - m0 * m0 / s.r * (1.0 + P.Q);
}

double perturbation_f(const HamiltonianSpec& spec, const ActionAngleState& s, const QuadratureSpec& quad) {
    return aa_parts(spec, s, quad).f;
}

double h_action_angle(const HamiltonianSpec& spec, const ActionAngleState& s, const QuadratureSpec& quad) {
    return -std::pow(spec.m0, 5) / (2.0 * s.y * s.y) + perturbation_f(spec, s, quad);
}

double v_radial(const HamiltonianSpec& spec, double r) {
    const double rb = branch_radius(spec);
    if (!(r > (1.0 + 1e-9) * rb)) {
        throw SingularityError("v_radial: r at or below the branch-point radius " + std::to_string(rb));
    }
    const double m02 = spec.m0 * spec.m0;
    const double b = spec.masses.beta;
    const double bb = spec.masses.beta_bar;
    const double a = spec.a();
    const double sr = std::sqrt(r);
    auto term = [&](double shift) {
        const double q = std::sqrt(r - shift);
        return 2.0 * m02 / (q * (sr + q));
    };
    if (spec.index == HamiltonianIndex::H1) {
        return -bb / (b + bb) * term(2.0 * b * a) - b / (b + bb) * term(-2.0 * bb * a);
    }
    return -bb / (b + bb) * term(2.0 * (b + bb) * a) - b / (b + bb) * m02 / r;
}

double energy(const HamiltonianSpec& spec, const Vec4& state, Chart chart, const QuadratureSpec& quad) {
    return chart == Chart::secular ? h_secular(spec, secular_from(state), quad)
                                   : h_action_angle(spec, action_angle_from(state), quad);
}

Vec4 gradient(const HamiltonianSpec& spec, const Vec4& state, Chart chart, GradientMethod method,
              double h_fd, const QuadratureSpec& quad) {
    if (method == GradientMethod::analytic) {
        return chart == Chart::secular ? analytic_secular(spec, secular_from(state), quad)
                                       : analytic_action_angle(spec, action_angle_from(state), quad);
    }
    if (!(h_fd > 0.0)) throw DomainError("gradient: h_fd must be positive");
    Vec4 d{};
    for (int i = 0; i < 4; ++i) {
        const double h = h_fd * std::max(1.0, std::abs(state[i]));
        Vec4 p = state, m = state;
        p[i] += h;
        m[i] -= h;
        try {
            d[i] = (energy(spec, p, chart, quad) - energy(spec, m, chart, quad)) / (2.0 * h);
        } catch (const Error& e) {
            throw DomainError(std::string("gradient: finite-difference stencil leaves the chart domain: ") +
                              e.what());
        }
    }
    return d;
}

Vec4 hamilton_rhs(const HamiltonianSpec& spec, const Vec4& state, Chart chart, const QuadratureSpec& quad) {
    const Vec4 d = gradient(spec, state, chart, GradientMethod::analytic, 0.0, quad);
    if (chart == Chart::secular) {
        // (R, G, r, g): pairs (R, r) and (G, g)
        return {-d[2], -d[3], d[0], d[1]};
    }
    // (Gcal, gamma, y, x): pairs (Gcal, gamma) and (y, x)
    return {-d[1], d[0], -d[3], d[2]};
}

}  // namespace perilib
