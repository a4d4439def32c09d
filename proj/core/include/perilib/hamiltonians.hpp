#pragma once

#include <array>

#include "perilib/coords.hpp"
#include "perilib/potentials.hpp"

namespace perilib {

using Vec4 = std::array<double, 4>;

struct HamiltonianSpec {
    HamiltonianIndex index = HamiltonianIndex::H1;
    double m0 = 1.0;
    double Lambda = 1.0;
    MassParams masses;

    double a() const { return Lambda * Lambda / (m0 * m0 * m0); }
    double beta_star() const { return masses.beta_star(index); }
    double beta_upper() const { return masses.beta_upper(index); }
};

void validate(const HamiltonianSpec& spec);

enum class Chart { secular, action_angle };

// Radius below which some epsilon-branch leaves |eps| < 1/2.
double admissible_radius(const HamiltonianSpec& spec);
// Branch-point radius of V_i: 2 beta a (H1), 2 (beta + beta_bar) a (H2).
double branch_radius(const HamiltonianSpec& spec);

double h_secular(const HamiltonianSpec& spec, const SecularState& s, const QuadratureSpec& quad = {});
double h_action_angle(const HamiltonianSpec& spec, const ActionAngleState& s,
                      const QuadratureSpec& quad = {});
// The perturbation f = H - (-m0^5 / (2 y^2)) in the action-angle chart.
double perturbation_f(const HamiltonianSpec& spec, const ActionAngleState& s,
                      const QuadratureSpec& quad = {});
double v_radial(const HamiltonianSpec& spec, double r);

enum class GradientMethod { analytic, finite_difference };

// Partials in state order: (R, G, r, g) or (Gcal, gamma, y, x).
Vec4 gradient(const HamiltonianSpec& spec, const Vec4& state, Chart chart,
              GradientMethod method = GradientMethod::analytic, double h_fd = 1e-6,
              const QuadratureSpec& quad = {});

// Hamilton's equations in state order.
Vec4 hamilton_rhs(const HamiltonianSpec& spec, const Vec4& state, Chart chart,
                  const QuadratureSpec& quad = {});

double energy(const HamiltonianSpec& spec, const Vec4& state, Chart chart,
              const QuadratureSpec& quad = {});

inline Vec4 to_vec(const SecularState& s) { return {s.R, s.G, s.r, s.g}; }
inline Vec4 to_vec(const ActionAngleState& s) { return {s.Gcal, s.gamma, s.y, s.x}; }
inline SecularState secular_from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }
inline ActionAngleState action_angle_from(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

}  // namespace perilib
