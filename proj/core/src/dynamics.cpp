#include "perilib/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include "perilib/error.hpp"

namespace perilib {

namespace {

Trajectory wrap(Chart chart, const HamiltonianSpec& spec, OdeSolution&& sol) {
    Trajectory t;
    t.chart = chart;
    t.m0 = spec.m0;
    t.Lambda = spec.Lambda;
    t.times = std::move(sol.times);
    t.states = std::move(sol.states);
    t.energies = std::move(sol.energies);
    t.events = std::move(sol.events);
    t.domain_exit = sol.domain_exit;
    t.max_energy_drift = sol.max_energy_drift;
    t.rejected_steps = sol.rejected_steps;
    return t;
}

OdeProblem problem(const HamiltonianSpec& spec, Chart chart, const QuadratureSpec& quad) {
    OdeProblem p;
    p.rhs = [spec, chart, quad](const Vec4& s) { return hamilton_rhs(spec, s, chart, quad); };
    p.energy = [spec, chart, quad](const Vec4& s) { return energy(spec, s, chart, quad); };
    const double L = spec.Lambda;
    p.squeeze = [chart, L](const Vec4& s) { return squeeze_coordinate(chart, L, s); };
    p.winding_angle = [chart, L](const Vec4& s) { return gamma_coordinate(chart, L, s); };
    p.angle_is_lifted = chart == Chart::action_angle;
    return p;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

bool ActionAngleDomain::contains(const ActionAngleState& s) const {
    return s.Gcal > Gcal_lo && s.Gcal <= Gcal_hi && s.y > y_lo && s.y < y_hi &&
           std::abs(s.x - std::numbers::pi) <= x_half_width;
}

Trajectory integrate(const HamiltonianSpec& spec, const SecularState& s0, double T, const StepControl& ctrl,
                     const QuadratureSpec& quad) {
    validate(spec);
    return wrap(Chart::secular, spec, integrate_ode(problem(spec, Chart::secular, quad), to_vec(s0), T, ctrl));
}

Trajectory integrate(const HamiltonianSpec& spec, const ActionAngleState& s0, double T, const StepControl& ctrl,
                     const QuadratureSpec& quad, const ActionAngleDomain* domain) {
    validate(spec);
    OdeProblem p = problem(spec, Chart::action_angle, quad);
    if (domain) {
        const ActionAngleDomain d = *domain;
        p.inside = [d](const Vec4& s) { return d.contains(action_angle_from(s)); };
    }
    return wrap(Chart::action_angle, spec, integrate_ode(p, to_vec(s0), T, ctrl));
}

double squeeze_coordinate(Chart chart, double Lambda, const Vec4& s) {
    if (chart == Chart::secular) return s[1];
    const double w = Lambda * Lambda - s[0] * s[0];
    return std::sqrt(std::max(0.0, w)) * std::cos(s[1]);
}

double gamma_coordinate(Chart chart, double Lambda, const Vec4& s) {
    if (chart == Chart::action_angle) return s[1];
    const double G = std::clamp(s[1], -Lambda, Lambda);
    const double cg = std::cos(s[3]);
    if (cg > 0.0) return gg_inverse(Lambda, G, s[3], ChartBranch::near_zero).gamma;
    if (cg < 0.0) return gg_inverse(Lambda, G, s[3], ChartBranch::near_pi).gamma;
    return std::atan2(-Lambda * std::sin(s[3]), G);
}

double gcal_coordinate(Chart chart, double Lambda, const Vec4& s) {
    if (chart == Chart::action_angle) return s[0];
    const double G = std::clamp(s[1], -Lambda, Lambda);
    return Lambda * std::sqrt(std::max(0.0, 1.0 - (G / Lambda) * (G / Lambda))) * std::cos(s[3]);
}

LibrationSummary measure_libration(const Trajectory& traj) {
    LibrationSummary out;
    if (traj.states.empty()) return out;
    const double L = traj.Lambda;
    double prev_raw = gamma_coordinate(traj.chart, L, traj.states[0]);
    double unwrapped = prev_raw;
    const double start = prev_raw;
    const double gcal0 = gcal_coordinate(traj.chart, L, traj.states[0]);
    auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
    int last = sgn(squeeze_coordinate(traj.chart, L, traj.states[0]));
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const Vec4& s = traj.states[i];
        const double raw = gamma_coordinate(traj.chart, L, s);
        const double d = traj.chart == Chart::action_angle ? raw - prev_raw : wrap_to_pi(raw - prev_raw);
        unwrapped += d;
        out.total_variation += std::abs(d);
        prev_raw = raw;
        const int sg = sgn(squeeze_coordinate(traj.chart, L, s));
        if (sg != 0) {
            if (last != 0 && sg != last) ++out.squeezes;
            last = sg;
        }
        out.Gcal_drift = std::max(out.Gcal_drift, std::abs(gcal_coordinate(traj.chart, L, s) - gcal0));
    }
    out.winding = std::abs(unwrapped - start);
    return out;
}

LibrationSummary detect_libration(const Trajectory& traj) {
    if (traj.states.size() < 10) {
        throw DomainError("detect_libration: trajectory has fewer than 10 samples");
    }
    return measure_libration(traj);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) os << "# " << line << '\n';
    os << (traj.chart == Chart::secular ? "t,R,G,r,g,energy" : "t,Gcal,gamma,y,x,energy") << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Vec4& s = traj.states[i];
        os << num(traj.times[i]) << ',' << num(s[0]) << ',' << num(s[1]) << ',' << num(s[2]) << ','
           << num(s[3]) << ',' << num(traj.energies[i]) << '\n';
    }
    for (const auto& e : traj.events) os << "# event," << num(e.t) << ',' << to_string(e.kind) << '\n';
}

}  // namespace perilib
