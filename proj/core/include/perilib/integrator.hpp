#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "perilib/hamiltonians.hpp"

namespace perilib {

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-10;
    double h_init = 0.0;  // 0 selects a starting step automatically
    double h_max = std::numeric_limits<double>::infinity();
    double energy_tol = 1e-8;
    long max_steps = 5'000'000;
};

enum class EventKind { squeeze, winding_2pi, domain_exit };
std::string to_string(EventKind k);

struct TrajectoryEvent {
    double t = 0.0;
    EventKind kind = EventKind::squeeze;
};

using StateFn = std::function<double(const Vec4&)>;

struct OdeProblem {
    std::function<Vec4(const Vec4&)> rhs;  // autonomous
    StateFn energy;                        // optional
    StateFn squeeze;                       // optional: sign changes are squeezes
    StateFn winding_angle;                 // optional: events at every 2pi of net turning
    bool angle_is_lifted = false;          // winding_angle is continuous rather than mod 2pi
    std::function<bool(const Vec4&)> inside;  // optional domain predicate
};

struct OdeSolution {
    std::vector<double> times;
    std::vector<Vec4> states;
    std::vector<double> energies;
    std::vector<TrajectoryEvent> events;
    bool domain_exit = false;
    double max_energy_drift = 0.0;  // relative
    long rejected_steps = 0;
};

// Dormand-Prince 5(4) with error control, event location by bisection on re-stepped
// sub-intervals, and guard trips treated as step rejections.
OdeSolution integrate_ode(const OdeProblem& prob, const Vec4& y0, double T, const StepControl& ctrl);

double wrap_to_pi(double a);

}  // namespace perilib
