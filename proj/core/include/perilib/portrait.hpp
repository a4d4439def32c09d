#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace perilib {

// Partials of E(G, g) = sqrt(1 - G^2/Lambda^2) cos g + eps G^2/Lambda^2.
struct EHatJet {
    double value = 0.0;
    double dG = 0.0;
    double dg = 0.0;
    double dGG = 0.0;
    double dGg = 0.0;
    double dgg = 0.0;
};
EHatJet e_hat_jet(double eps, double Lambda, double G, double g);

enum class EquilibriumKind { center, saddle };
std::string to_string(EquilibriumKind k);

struct EquilibriumReport {
    double g = 0.0;
    double G = 0.0;
    EquilibriumKind kind = EquilibriumKind::center;
    std::pair<std::complex<double>, std::complex<double>> eigenvalues;
};

// Newton from a grid_n x grid_n set of seeds on (g, G) in [-pi, pi) x (-Lambda, Lambda).
std::vector<EquilibriumReport> find_equilibria(double eps, double Lambda, int grid_n = 24);

struct Contour {
    double level = 0.0;
    std::vector<std::pair<double, double>> points;  // (g, G)
    bool closed = false;
};

struct PortraitGrid {
    int ng = 128;
    int nG = 128;
};

// Level sets of E on [-pi, pi] x [-Lambda, Lambda]. Levels are evenly spaced strictly inside
// the sampled range; the separatrix level E(0, 0) = 1 is added for eps > 1/2.
std::vector<Contour> phase_portrait(double eps, double Lambda, PortraitGrid grid = {}, int levels = 24);

// Level sets at explicit values.
std::vector<Contour> contour_levels(double eps, double Lambda, PortraitGrid grid,
                                    const std::vector<double>& levels);

// True when some contour spans the full g-range.
bool has_rotation(const std::vector<Contour>& contours, PortraitGrid grid);

void write_portrait_csv(std::ostream& os, const std::vector<Contour>& contours,
                        const std::vector<std::string>& preamble = {});

}  // namespace perilib
