#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "perilib/hamiltonians.hpp"
#include "perilib/integrator.hpp"

namespace perilib {

struct Trajectory {
    Chart chart = Chart::secular;
    double m0 = 1.0;
    double Lambda = 1.0;
    std::vector<double> times;
    std::vector<Vec4> states;
    std::vector<double> energies;
    std::vector<TrajectoryEvent> events;
    bool domain_exit = false;
    double max_energy_drift = 0.0;
    long rejected_steps = 0;
};

// Box D = G x T x Y x X of the action-angle chart.
struct ActionAngleDomain {
    double Gcal_lo = 0.0;
    double Gcal_hi = 0.0;
    double y_lo = 0.0;
    double y_hi = 0.0;
    double x_half_width = 0.0;  // |x - pi| <= x_half_width

    bool contains(const ActionAngleState& s) const;
};

Trajectory integrate(const HamiltonianSpec& spec, const SecularState& s0, double T,
                     const StepControl& ctrl = {}, const QuadratureSpec& quad = {});
Trajectory integrate(const HamiltonianSpec& spec, const ActionAngleState& s0, double T,
                     const StepControl& ctrl = {}, const QuadratureSpec& quad = {},
                     const ActionAngleDomain* domain = nullptr);

// G, gamma and Gcal read off either chart.
double squeeze_coordinate(Chart chart, double Lambda, const Vec4& s);
double gamma_coordinate(Chart chart, double Lambda, const Vec4& s);
double gcal_coordinate(Chart chart, double Lambda, const Vec4& s);

struct LibrationSummary {
    double winding = 0.0;          // |gamma(end) - gamma(0)|, unwrapped
    double total_variation = 0.0;  // sum of |increments| of unwrapped gamma
    int squeezes = 0;              // sign changes of G
    double Gcal_drift = 0.0;       // max |Gcal(t) - Gcal(0)|
};

LibrationSummary detect_libration(const Trajectory& traj);
// Same measurement without the minimum-length requirement.
LibrationSummary measure_libration(const Trajectory& traj);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<std::string>& preamble = {});

}  // namespace perilib
