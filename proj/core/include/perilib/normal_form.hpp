#pragma once

#include <functional>
#include <vector>

#include "perilib/hamiltonians.hpp"
#include "perilib/tf_series.hpp"

namespace perilib {

// Frequencies of h(I, J, y): omega_I = dh/dI, omega_J = dh/dJ, omega_y = dh/dy.
// Empty omega_I / omega_J callables mean identically zero.
struct FrequencyData {
    std::function<std::vector<double>(const std::vector<double>& I, double y)> omega_I;
    std::function<std::vector<double>(const std::vector<double>& I, double y)> omega_J;
    std::function<double(const std::vector<double>& I, double y)> omega_y;
};

struct NqpOptions {
    double x0 = 0.0;        // base point of the x-integration; must lie in the x-range of the grid
    int quad_points = 48;   // Clenshaw-Curtis points per node
};

// phi_K = (1/omega_y) int_{x0}^{x} f_K(tau) exp(lambda_K (tau - x) / omega_y) dtau,
// lambda_K = (j - h).omega_J + i k.omega_I.
TFSeries nqp_primitive(const TFSeries& f_osc, const FrequencyData& freq, const NqpOptions& opt = {});

// max over modes and nodes of |omega_y d_x phi_K + lambda_K phi_K - f_K|.
double homological_residual(const TFSeries& phi, const TFSeries& f_osc, const FrequencyData& freq);

// d in the contraction estimate: min{rho s, r xi} (and delta^2 when m > 0).
double contraction_scale(const NormWeights& w, int m_pq);

struct LieOptions {
    int max_order = 40;
    double rel_tol = 1e-16;  // stop when a term drops below rel_tol * ||H||
    double c_bar = 1.0;
    NormWeights weights;
};

struct LieReport {
    int terms = 0;
    double contraction = 0.0;   // c_bar ||phi|| / d
    double ratio = 0.0;         // last measured ||L^j H / j!|| / ||L^{j-1} H / (j-1)!||
    double tail_bound = 0.0;
    std::vector<double> term_norms;
};

// sum_{j <= max_order} L_phi^j H / j!, L_phi = {phi, .}.
TFSeries lie_transform(const TFSeries& H, const TFSeries& phi, const LieOptions& opt = {},
                       LieReport* report = nullptr);

struct NormalFormOptions {
    NormWeights weights;  // w_0; step j uses w_0 (2/3 - (j-1)/(3N))
    LieOptions lie;
    NqpOptions nqp;
};

struct StepRecord {
    int step = 0;
    NormWeights weights;
    double f_norm = 0.0;
    double f_osc_norm = 0.0;
    double f_avg_norm = 0.0;
    double phi_norm = 0.0;
    double contraction = 0.0;
    double homological_residual = 0.0;
    int lie_terms = 0;
    double tail_bound = 0.0;
};

struct NormalFormResult {
    TFSeries g_star;
    TFSeries f_star;
    std::vector<StepRecord> steps;  // N + 1 rows; the last one describes f_star
};

NormWeights schedule_weights(const NormWeights& w0, int j, int N);

NormalFormResult normal_form_steps(const TFSeries& f, const FrequencyData& freq, int N,
                                   const NormalFormOptions& opt = {});

struct DeskModelSpec {
    HamiltonianSpec ham;
    double Gcal_lo = 0.75;
    double Gcal_hi = 1.0;
    double y_lo = 4.0;
    double y_hi = 6.0;
    double x_lo = 2.141592653589793;
    double x_hi = 4.141592653589793;
    int nodes = 16;
    TFShape shape{1, 0, 8, 0};
    QuadratureSpec quad;
    NormWeights weights{0.2, 1.0, 0.5, 0.5, 0.5};
    double x0 = 3.141592653589793;  // centre of the x-range
};

DeskModelSpec default_desk_model();

struct DeskModel {
    TFSeries h;
    TFSeries f;
    FrequencyData freq;
};

DeskModel build_desk_model(const DeskModelSpec& spec);

}  // namespace perilib
