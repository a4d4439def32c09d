#include "perilib/coords.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "perilib/error.hpp"
#include "perilib/kepler.hpp"

namespace perilib {

Frame parse_frame(std::string_view s) {
    if (s == "jacobi") return Frame::jacobi;
    if (s == "m0centric" || s == "m0-centric") return Frame::m0centric;
    throw DomainError("unknown frame '" + std::string(s) + "' (expected jacobi or m0centric)");
}

std::string_view to_string(Frame f) { return f == Frame::jacobi ? "jacobi" : "m0centric"; }

MassParams derive_mass_params(double mu, double kappa, Frame frame) {
    if (!(mu > 0.0) || !(kappa > 0.0) || !std::isfinite(mu) || !std::isfinite(kappa)) {
        throw DomainError("derive_mass_params: mass ratios must be positive and finite");
    }
    MassParams m;
    m.mu = mu;
    m.kappa = kappa;
    m.frame = frame;
    const double k2 = kappa * kappa;
    const double k3 = k2 * kappa;
    const double mu2 = mu * mu;
    const double mu3 = mu2 * mu;
    if (frame == Frame::jacobi) {
        const double den = 1.0 + mu + kappa;
        m.beta = k2 * (1.0 + mu) * (1.0 + mu) / (mu2 * den);
        m.gamma_scale = k3 * std::pow(1.0 + mu, 4) / (mu3 * den);
    } else {
        const double den = 1.0 + kappa;
        m.beta = k2 * (1.0 + mu) / (mu2 * den);
        m.gamma_scale = k3 * std::pow(1.0 + mu, 3) / (mu3 * den);
    }
    m.beta_bar = mu * m.beta;
    const double b = m.beta;
    const double bb = m.beta_bar;
    m.beta_star_i[0] = b * bb / (b + bb);
    m.beta_upper_i[0] = std::max(b, bb);
    m.beta_star_i[1] = bb;
    m.beta_upper_i[1] = b + bb;
    return m;
}

GgPoint gg_forward(double Lambda, double Gcal, double gamma) {
    if (!(Lambda > 0.0)) throw DomainError("gg_forward: Lambda must be positive");
    if (Gcal == 0.0) throw DomainError("gg_forward: branch undefined at Gcal = 0");
    if (std::abs(Gcal) > Lambda) throw DomainError("gg_forward: |Gcal| exceeds Lambda");
    const double q = Gcal / Lambda;
    const double s = std::sqrt(std::max(0.0, 1.0 - q * q));
    GgPoint out;
    out.G = Lambda * s * std::cos(gamma);
    out.g = -std::atan(s / q * std::sin(gamma)) + (Gcal < 0.0 ? std::numbers::pi : 0.0);
    return out;
}

GcalGamma gg_inverse(double Lambda, double G, double g, ChartBranch branch) {
    if (!(Lambda > 0.0)) throw DomainError("gg_inverse: Lambda must be positive");
    if (std::abs(G) > Lambda) throw DomainError("gg_inverse: |G| exceeds Lambda");
    const double cg = std::cos(g);
    if (branch == ChartBranch::near_zero ? !(cg > 0.0) : !(cg < 0.0)) {
        throw DomainError("gg_inverse: point outside the chart of the requested branch");
    }
    const double q = G / Lambda;
    GcalGamma out;
    out.Gcal = Lambda * std::sqrt(std::max(0.0, 1.0 - q * q)) * cg;
    const double sn = -out.Gcal * std::tan(g);
    out.gamma = (sn == 0.0 && G == 0.0) ? 0.0 : std::atan2(sn, G);
    return out;
}

RrJet rr_forward_jet(double m0, double y, double x) {
    if (!(m0 > 0.0)) throw DomainError("rr_forward: m0 must be positive");
    if (!(y > 0.0)) throw DomainError("rr_forward: y must be positive");
    const KeplerSolution ks = solve_kepler_zero_ecc_form(x);
    const double c = 1.0 - std::cos(ks.xi);
    if (!(c > 1e-14)) throw SingularityError("rr_forward: collision (cos xi' = 1)");
    const double m03 = m0 * m0 * m0;
    RrJet j;
    j.xi = ks.xi;
    j.r = y * y / m03 * c;
    j.R = m03 / y * std::sin(ks.xi) / c;
    j.dr_dy = 2.0 * j.r / y;
    j.dr_dx = y * y / m03 * std::sin(ks.xi) / c;
    return j;
}

RrPoint rr_forward(double m0, double y, double x) {
    const RrJet j = rr_forward_jet(m0, y, x);
    return {j.R, j.r};
}

YxPoint rr_inverse(double m0, double R, double r) {
    if (!(m0 > 0.0) || !(r > 0.0)) throw DomainError("rr_inverse: m0 and r must be positive");
    const double energy = R * R / (2.0 * m0) - m0 * m0 / r;
    if (!(energy < 0.0)) throw DomainError("rr_inverse: radial energy must be negative");
    const double m03 = m0 * m0 * m0;
    YxPoint out;
    out.y = std::sqrt(std::pow(m0, 5) / (-2.0 * energy));
    const double cosxi = std::clamp(1.0 - r * m03 / (out.y * out.y), -1.0, 1.0);
    double xi = std::acos(cosxi);
    if (R < 0.0) xi = 2.0 * std::numbers::pi - xi;
    out.x = xi - std::sin(xi);
    return out;
}

OrbitalElements orbital_elements(double m0, double Lambda, double G) {
    if (!(m0 > 0.0) || !(Lambda > 0.0)) throw DomainError("orbital_elements: m0, Lambda must be positive");
    if (std::abs(G) > Lambda) throw DomainError("orbital_elements: |G| exceeds Lambda");
    const double q = G / Lambda;
    return {Lambda * Lambda / (m0 * m0 * m0), std::sqrt(std::max(0.0, 1.0 - q * q))};
}

SecularState to_secular(double m0, double Lambda, const ActionAngleState& s) {
    const GgPoint gg = gg_forward(Lambda, s.Gcal, s.gamma);
    const RrPoint rr = rr_forward(m0, s.y, s.x);
    return {rr.R, gg.G, rr.r, gg.g};
}

}  // namespace perilib
