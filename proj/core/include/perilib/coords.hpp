#pragma once

#include <string_view>

namespace perilib {

enum class Frame { jacobi, m0centric };
enum class HamiltonianIndex { H1 = 1, H2 = 2 };

Frame parse_frame(std::string_view s);
std::string_view to_string(Frame f);

struct MassParams {
    double mu = 0.0;
    double kappa = 0.0;
    Frame frame = Frame::jacobi;
    double gamma_scale = 0.0;
    double beta = 0.0;
    double beta_bar = 0.0;
    // beta_* and beta^* for i = 1 (index 0) and i = 2 (index 1).
    double beta_star_i[2] = {0.0, 0.0};
    double beta_upper_i[2] = {0.0, 0.0};

    double beta_star(HamiltonianIndex i) const { return beta_star_i[static_cast<int>(i) - 1]; }
    double beta_upper(HamiltonianIndex i) const { return beta_upper_i[static_cast<int>(i) - 1]; }
};

MassParams derive_mass_params(double mu, double kappa, Frame frame);

struct SecularState {
    double R = 0.0;
    double G = 0.0;
    double r = 1.0;
    double g = 0.0;
};

struct ActionAngleState {
    double Gcal = 0.0;
    double gamma = 0.0;
    double y = 1.0;
    double x = 0.0;
};

struct GgPoint {
    double G = 0.0;
    double g = 0.0;
};

struct GcalGamma {
    double Gcal = 0.0;
    double gamma = 0.0;
};

enum class ChartBranch { near_zero, near_pi };

GgPoint gg_forward(double Lambda, double Gcal, double gamma);
GcalGamma gg_inverse(double Lambda, double G, double g, ChartBranch branch);

struct RrPoint {
    double R = 0.0;
    double r = 0.0;
};

// Radial chart with derivatives of r used by the action-angle gradient.
struct RrJet {
    double R = 0.0;
    double r = 0.0;
    double xi = 0.0;     // xi'(x)
    double dr_dy = 0.0;
    double dr_dx = 0.0;
};

RrPoint rr_forward(double m0, double y, double x);
RrJet rr_forward_jet(double m0, double y, double x);
// Inverse on negative radial energy; x lands in (0, 2pi) with x > pi iff R < 0.
struct YxPoint {
    double y = 0.0;
    double x = 0.0;
};
YxPoint rr_inverse(double m0, double R, double r);

struct OrbitalElements {
    double a = 0.0;
    double e = 0.0;
};

OrbitalElements orbital_elements(double m0, double Lambda, double G);

SecularState to_secular(double m0, double Lambda, const ActionAngleState& s);

}  // namespace perilib
