#include "perilib/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "perilib/error.hpp"
#include "perilib/kepler.hpp"

namespace perilib {

namespace {

constexpr double kPi = std::numbers::pi;

Inequality make(std::string label, double lhs, double rhs, Relation rel) {
    Inequality q;
    q.label = std::move(label);
    q.lhs = lhs;
    q.rhs = rhs;
    q.relation = rel;
    q.holds = rel == Relation::less ? lhs < rhs : lhs <= rhs;
    return q;
}

double c0_or_nan(double eps0, int grid) {
    if (!(eps0 > 0.0 && eps0 < 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return estimate_c0(eps0, grid);
}

// beta^* / beta_*, independent of kappa.
double upper_over_lower(double mu, Frame frame, HamiltonianIndex index) {
    const MassParams m = derive_mass_params(mu, 1.0, frame);
    return m.beta_upper(index) / m.beta_star(index);
}

double solve_kappa(double beta, double mu, Frame frame) {
    const double mu2 = mu * mu;
    // A k^2 - beta mu^2 k - beta mu^2 C = 0
    const double A = frame == Frame::jacobi ? (1.0 + mu) * (1.0 + mu) : 1.0 + mu;
    const double C = frame == Frame::jacobi ? 1.0 + mu : 1.0;
    const double b = beta * mu2;
    return (b + std::sqrt(b * b + 4.0 * A * b * C)) / (2.0 * A);
}

}  // namespace

TheoremReport check_theorem_main1(const HamiltonianSpec& spec, const TheoremInputs& in,
                                  const SurrogateConstants& k) {
    TheoremReport rep;
    rep.inputs = in;
    rep.constants = k;
    const double L = spec.Lambda;
    const double a = spec.a();
    const double m0 = spec.m0;
    const double bs = spec.beta_star();
    const double bu = spec.beta_upper();
    const double am = in.alpha_minus;
    const double ap = in.alpha_plus;
    const double e0 = in.eps0;
    const double Cs = k.C_lower;
    const double CS = k.C_upper;
    const double c0 = c0_or_nan(e0, in.c0_grid);
    rep.c0 = c0;
    rep.C_star_literal = 16.0 * std::cosh(in.s0) * std::cosh(in.s0);

    const double rho = ap / am;
    const double rho32 = std::pow(rho, 1.5);
    const double root_a_am = std::sqrt(a / am);
    const double term1 = bs * L / (c0 * c0 * e0 * e0 * in.delta * in.s0) * root_a_am;
    const double term2 = bs / (c0 * c0 * std::pow(e0, 2.5)) * (a / am);
    rep.inv_N0 = Cs * std::max(term1, term2) * rho32;
    rep.N0 = 1.0 / rep.inv_N0;
    const double rhs_N0 = c0 * c0 * e0 * e0 * am * am / (2.0 * ap * ap);
    const double two_pow = std::exp(-rep.N0 * std::numbers::ln2);

    const double eta1 = ap * ap / (bs * std::sqrt(am * am * am * a));
    const double eta2 = ap * ap / (c0 * c0 * std::pow(e0, 2.5) * am * am) * root_a_am;
    const double eta3 = ap * ap / (c0 * c0 * e0 * e0 * am * am) * L / (in.s0 * in.delta) * two_pow;
    rep.eta = Cs * std::max({eta1, eta2, eta3});
    rep.T_estimate = L * ap * ap * ap / (bs * m0 * m0 * a) * 3.0 * kPi / rep.eta;

    auto& v = rep.inequalities;
    v.push_back(make("N0.1: 0 < eps0", 0.0, e0, Relation::less));
    v.push_back(make("N0.1: eps0 < 1", e0, 1.0, Relation::less));
    v.push_back(make("N0.2: 0 < delta", 0.0, in.delta, Relation::less));
    v.push_back(make("N0.2: delta <= Lambda/4", in.delta, L / 4.0, Relation::less_equal));
    v.push_back(make("N0.3/Kepineq: 4 beta^* a / (c0 alpha_- eps0) < 1", 4.0 * bu * a / (c0 * am * e0), 1.0,
                     Relation::less));
    v.push_back(make("N0.4: C^* delta / (beta_* Lambda) <= 1", CS * in.delta / (bs * L), 1.0,
                     Relation::less_equal));
    v.push_back(make("N0.5: 1/N0 < c0^2 eps0^2 alpha_-^2 / (2 alpha_+^2)", rep.inv_N0, rhs_N0, Relation::less));
    v.push_back(make("yx: alpha_- < alpha_+/4", am, ap / 4.0, Relation::less));
    v.push_back(make("ass1: C^* delta / Lambda < 1", CS * in.delta / L, 1.0, Relation::less));
    v.push_back(make("N < N0", in.N, rep.N0, Relation::less));
    v.push_back(make("last-cond: eta < 1", rep.eta, 1.0, Relation::less));
    rep.pass = std::all_of(v.begin(), v.end(), [](const Inequality& q) { return q.holds; });
    return rep;
}

RemarkParameters construct_remark_parameters(const RemarkChoice& ch, const SurrogateConstants& k) {
    const double L = ch.Lambda;
    if (!(ch.eps0 > 0.0 && ch.eps0 < 1.0)) throw DomainError("remark chain: eps0 must lie in (0,1)");
    if (!(ch.delta > 0.0) || !(ch.delta <= L / 4.0)) throw DomainError("remark chain: need 0 < delta <= Lambda/4");
    if (!(k.C_upper * ch.delta / L < 1.0)) throw DomainError("remark chain: C^* delta / Lambda must be below 1");
    if (!(ch.margin > 1.0)) throw DomainError("remark chain: margin must exceed 1");
    if (!(ch.mu > 0.0) || !(ch.m0 > 0.0) || !(L > 0.0)) throw DomainError("remark chain: masses must be positive");

    const double e0 = ch.eps0;
    const double M = ch.margin;
    const double Cs = k.C_lower;
    const double c0 = estimate_c0(e0, ch.c0_grid);
    const double rho = 256.0;
    const double rho2 = rho * rho;
    const double rho35 = std::pow(rho, 3.5);
    const double kb = upper_over_lower(ch.mu, ch.frame, ch.index);

    // beta_* = M_lo sqrt(alpha_-/a)
    const double M_lo = M * Cs * rho2;
    const double c02 = c0 * c0, c04 = c02 * c02;
    const double sA = std::max({M * Cs * rho2 / (c02 * std::pow(e0, 2.5)),
                                M * 2.0 * Cs * rho35 * M_lo / (c04 * std::pow(e0, 4.5)),
                                M * 4.0 * kb * M_lo / (c0 * e0),
                                M * k.C_upper * ch.delta / (L * M_lo)});
    const double beta_lo = M_lo * sA;
    const double s0 = M * 2.0 * Cs * rho35 * beta_lo * L / (c04 * std::pow(e0, 4) * ch.delta * sA);

    HamiltonianSpec spec;
    spec.index = ch.index;
    spec.m0 = ch.m0;
    spec.Lambda = L;
    const MassParams unit = derive_mass_params(ch.mu, 1.0, ch.frame);
    const double beta = beta_lo * unit.beta / unit.beta_star(ch.index);
    spec.masses = derive_mass_params(ch.mu, solve_kappa(beta, ch.mu, ch.frame), ch.frame);

    RemarkParameters out;
    out.spec = spec;
    const double a = spec.a();
    out.inputs.eps0 = e0;
    out.inputs.delta = ch.delta;
    out.inputs.s0 = s0;
    out.inputs.alpha_minus = sA * sA * a;
    out.inputs.alpha_plus = rho * out.inputs.alpha_minus;
    out.inputs.N = 1.0;
    out.inputs.c0_grid = ch.c0_grid;
    return out;
}

ActionAngleDomain domain_from(const HamiltonianSpec& spec, const TheoremInputs& in) {
    const double m03 = spec.m0 * spec.m0 * spec.m0;
    ActionAngleDomain d;
    d.Gcal_lo = spec.Lambda - in.delta;
    d.Gcal_hi = spec.Lambda;
    d.y_lo = 2.0 * std::sqrt(m03 * in.alpha_minus);
    d.y_hi = std::sqrt(m03 * in.alpha_plus);
    d.x_half_width = kPi - 2.0 * std::sqrt(in.eps0);
    return d;
}

ActionAngleState default_initial_state(const HamiltonianSpec& spec, const TheoremInputs& in) {
    const double m03 = spec.m0 * spec.m0 * spec.m0;
    return {spec.Lambda - in.delta / 4.0, 0.0, 2.5 * std::sqrt(m03 * in.alpha_minus), kPi};
}

LibrationRun run_libration_experiment(const HamiltonianSpec& spec, const TheoremReport& report,
                                      const ActionAngleState& s0, double budget, double turns,
                                      const StepControl& ctrl, const QuadratureSpec& quad) {
    if (!report.pass) throw DomainError("libration experiment requires a passing theorem report");
    const TheoremInputs& in = report.inputs;
    const double m03 = spec.m0 * spec.m0 * spec.m0;
    const double ylo = 2.0 * std::sqrt(m03 * in.alpha_minus);
    const double yhi = 0.5 * (std::sqrt(m03 * in.alpha_minus) + std::sqrt(m03 * in.alpha_plus));
    if (!(std::abs(s0.Gcal - spec.Lambda) <= in.delta / 2.0) || !(std::abs(s0.y) >= ylo && std::abs(s0.y) <= yhi) ||
        s0.x != kPi) {
        throw DomainError("initial state violates the initial-data window");
    }
    LibrationRun run;
    if (!(budget > 0.0)) {
        const double rate = hamilton_rhs(spec, to_vec(s0), Chart::action_angle, quad)[1];
        if (!(std::abs(rate) > 0.0)) throw SingularityError("initial gamma rate vanishes");
        budget = turns * 2.0 * kPi / std::abs(rate);
    }
    run.duration = std::min(report.T_estimate, budget);
    const ActionAngleDomain dom = domain_from(spec, in);
    run.trajectory = integrate(spec, s0, run.duration, ctrl, quad, &dom);
    run.summary = run.trajectory.states.size() >= 10 ? detect_libration(run.trajectory)
                                                      : measure_libration(run.trajectory);
    run.collision_radius = 2.0 * spec.beta_upper() * spec.a();
    run.min_radius = std::numeric_limits<double>::infinity();
    for (const auto& v : run.trajectory.states) {
        run.min_radius = std::min(run.min_radius, rr_forward(spec.m0, v[2], v[3]).r);
    }
    run.exceeds_2pi = run.summary.winding >= 2.0 * kPi;
    run.exceeds_3pi = run.summary.winding >= 3.0 * kPi;
    return run;
}

}  // namespace perilib
