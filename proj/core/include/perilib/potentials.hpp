#pragma once

#include <cstdint>

namespace perilib {

struct QuadratureSpec {
    int n_nodes = 256;  // even, >= 32; uniform periodic trapezoid
};

void validate(const QuadratureSpec& q);

inline constexpr double kRadicandGuard = 1e-10;

struct RhoP {
    double rho = 0.0;
    double p = 0.0;
};

// rho = 1 - e cos xi, p = (cos xi - e) cos g - (G/Lambda) sin xi sin g, xi(ell) from Kepler.
RhoP rho_p(double Lambda, double G, double ell, double g);

// (1/2pi) int dl / sqrt(1 + 2 eps p + eps^2 rho^2), evaluated in the eccentric anomaly.
double u_hat(double eps, double Lambda, double G, double g, const QuadratureSpec& quad = {});

double e_hat(double eps, double Lambda, double G, double g);
double e_hat_aa(double eps, double Lambda, double Gcal, double gamma);

// F_eps(t) = (1/2pi) int (1 - cos xi) / sqrt(1 - 2 eps (1 - cos xi) t + eps^2 (1 - cos xi)^2) dxi.
double f_eps(double eps, double t, const QuadratureSpec& quad = {});
double f_eps_at_one(double eps);
double f_eps_derivative(double eps, double t, const QuadratureSpec& quad = {});
double singularity_t(double eps);

// Value, partials and F - 1 (free of cancellation) from one quadrature sweep.
struct FHatJet {
    double value = 0.0;
    double minus_one = 0.0;
    double d_t = 0.0;
    double d_eps = 0.0;
};
FHatJet f_eps_jet(double eps, double t, const QuadratureSpec& quad = {});

// Number of F-hat quadrature sweeps performed by the calling thread.
std::uint64_t fhat_evaluation_count();

struct RenormCheck {
    double max_residual = 0.0;
    int samples = 0;
    int rejected = 0;
};

RenormCheck check_renorm_identity(double eps, double Lambda, int sample_n,
                                  const QuadratureSpec& quad, std::uint64_t seed);

// Canonical bracket {U, E} in (G, g) by central differences.
double bracket_u_e(double eps, double Lambda, double G, double g, double h,
                   const QuadratureSpec& quad = {});

struct BracketCheck {
    double max_abs = 0.0;
    int samples = 0;
};

BracketCheck check_bracket_commutation(double eps, double Lambda, int sample_n, double h,
                                       const QuadratureSpec& quad, std::uint64_t seed);

}  // namespace perilib
