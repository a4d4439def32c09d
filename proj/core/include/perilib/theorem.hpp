#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "perilib/dynamics.hpp"
#include "perilib/hamiltonians.hpp"

namespace perilib {

// Stand-ins for the existential constants of the libration theorem. Not rigorous.
struct SurrogateConstants {
    double C_upper = 10.0;  // C^*
    double C_lower = 2.0;   // C_*
    double c_star = 1.0;
    double c_circ = 1.0;
};

struct TheoremInputs {
    double eps0 = 0.5;
    double delta = 0.05;
    double s0 = 1.0;
    double alpha_minus = 1.0;
    double alpha_plus = 4.0;
    double N = 1.0;
    int c0_grid = 64;
};

enum class Relation { less, less_equal };

struct Inequality {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    Relation relation = Relation::less;
    bool holds = false;
};

struct TheoremReport {
    std::vector<Inequality> inequalities;
    bool pass = false;
    double c0 = 0.0;
    double inv_N0 = 0.0;  // 1 / N0
    double N0 = 0.0;
    double eta = 0.0;
    double T_estimate = 0.0;
    double C_star_literal = 0.0;  // 16 cosh^2(s0), informational
    TheoremInputs inputs;
    SurrogateConstants constants;
};

TheoremReport check_theorem_main1(const HamiltonianSpec& spec, const TheoremInputs& in,
                                  const SurrogateConstants& k = {});

struct RemarkChoice {
    double m0 = 1.0;
    double Lambda = 1.0;
    double mu = 1.0;
    Frame frame = Frame::m0centric;
    HamiltonianIndex index = HamiltonianIndex::H2;
    double eps0 = 0.5;
    double delta = 0.05;
    double margin = 4.0;  // every scaling inequality holds with this factor to spare
    int c0_grid = 64;
};

struct RemarkParameters {
    HamiltonianSpec spec;
    TheoremInputs inputs;
};

// Builds (kappa, s0, alpha_-, alpha_+) along the scaling chain with explicit margins.
RemarkParameters construct_remark_parameters(const RemarkChoice& choice, const SurrogateConstants& k = {});

ActionAngleDomain domain_from(const HamiltonianSpec& spec, const TheoremInputs& in);
// Gcal = Lambda - delta/4, gamma = 0, y = 2.5 sqrt(m0^3 alpha_-), x = pi.
ActionAngleState default_initial_state(const HamiltonianSpec& spec, const TheoremInputs& in);

struct LibrationRun {
    Trajectory trajectory;
    LibrationSummary summary;
    double duration = 0.0;
    double min_radius = 0.0;
    double collision_radius = 0.0;  // 2 beta^* a
    bool exceeds_2pi = false;
    bool exceeds_3pi = false;
};

// Integrates for min(T_estimate, budget). budget <= 0 selects `turns` revolutions of gamma
// at the initial rate.
LibrationRun run_libration_experiment(const HamiltonianSpec& spec, const TheoremReport& report,
                                      const ActionAngleState& s0, double budget = 0.0, double turns = 2.5,
                                      const StepControl& ctrl = {}, const QuadratureSpec& quad = {});

}  // namespace perilib
