#include "perilib/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "perilib/error.hpp"

namespace perilib {

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Field {
    int ng = 0;
    int nG = 0;
    double Lambda = 1.0;
    std::vector<double> v;  // v[i * nG + j]
    double g(double i) const { return -kPi + 2.0 * kPi * i / (ng - 1); }
    double G(double j) const { return -Lambda + 2.0 * Lambda * j / (nG - 1); }
    double at(int i, int j) const { return v[static_cast<std::size_t>(i) * nG + j]; }
};

Field sample(double eps, double Lambda, PortraitGrid grid) {
    if (grid.ng < 64 || grid.nG < 64) throw DomainError("phase_portrait: grid resolution must be at least 64x64");
    if (!(Lambda > 0.0)) throw DomainError("phase_portrait: Lambda must be positive");
    Field f;
    f.ng = grid.ng;
    f.nG = grid.nG;
    f.Lambda = Lambda;
    f.v.resize(static_cast<std::size_t>(grid.ng) * grid.nG);
    for (int i = 0; i < grid.ng; ++i) {
        for (int j = 0; j < grid.nG; ++j) {
            const double q = std::clamp(f.G(j) / Lambda, -1.0, 1.0);
            f.v[static_cast<std::size_t>(i) * grid.nG + j] =
                std::sqrt(std::max(0.0, 1.0 - q * q)) * std::cos(f.g(i)) + eps * q * q;
        }
    }
    return f;
}

// Edge key: horizontal edges (i,j)-(i+1,j) have dir 0, vertical (i,j)-(i,j+1) dir 1.
std::int64_t edge_key(const Field& f, int i, int j, int dir) {
    return (static_cast<std::int64_t>(i) * f.nG + j) * 2 + dir;
}

struct Segment {
    std::int64_t a = 0;
    std::int64_t b = 0;
};

std::vector<Contour> extract(const Field& f, double level) {
    std::unordered_map<std::int64_t, std::pair<double, double>> point;
    std::vector<Segment> segs;
    auto above = [&](int i, int j) { return f.at(i, j) >= level; };
    auto crossing = [&](int i0, int j0, int i1, int j1, int dir, int ie, int je) {
        const std::int64_t k = edge_key(f, ie, je, dir);
        if (!point.count(k)) {
            const double va = f.at(i0, j0);
            const double vb = f.at(i1, j1);
            const double t = (level - va) / (vb - va);
            point[k] = {f.g(i0 + t * (i1 - i0)), f.G(j0 + t * (j1 - j0))};
        }
        return k;
    };
    for (int i = 0; i + 1 < f.ng; ++i) {
        for (int j = 0; j + 1 < f.nG; ++j) {
            const bool c0 = above(i, j), c1 = above(i + 1, j), c2 = above(i + 1, j + 1), c3 = above(i, j + 1);
            std::int64_t e[4] = {0, 0, 0, 0};
            bool cut[4] = {c0 != c1, c1 != c2, c3 != c2, c0 != c3};
            if (cut[0]) e[0] = crossing(i, j, i + 1, j, 0, i, j);
            if (cut[1]) e[1] = crossing(i + 1, j, i + 1, j + 1, 1, i + 1, j);
            if (cut[2]) e[2] = crossing(i, j + 1, i + 1, j + 1, 0, i, j + 1);
            if (cut[3]) e[3] = crossing(i, j, i, j + 1, 1, i, j);
            const int n = cut[0] + cut[1] + cut[2] + cut[3];
            if (n == 2) {
                std::int64_t ends[2];
                int m = 0;
                for (int s = 0; s < 4; ++s) if (cut[s]) ends[m++] = e[s];
                segs.push_back({ends[0], ends[1]});
            } else if (n == 4) {
                const double centre = 0.25 * (f.at(i, j) + f.at(i + 1, j) + f.at(i + 1, j + 1) + f.at(i, j + 1));
                if ((centre >= level) == c0) {
                    segs.push_back({e[0], e[1]});
                    segs.push_back({e[2], e[3]});
                } else {
                    segs.push_back({e[3], e[0]});
                    segs.push_back({e[1], e[2]});
                }
            }
        }
    }

    std::unordered_map<std::int64_t, std::vector<int>> at;
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        at[segs[s].a].push_back(s);
        at[segs[s].b].push_back(s);
    }
    std::vector<char> used(segs.size(), 0);
    auto other = [&](int s, std::int64_t k) { return segs[s].a == k ? segs[s].b : segs[s].a; };
    auto next_seg = [&](std::int64_t k) {
        for (int s : at[k]) if (!used[s]) return s;
        return -1;
    };
    auto walk = [&](std::int64_t start, Contour& c) {
        std::int64_t k = start;
        c.points.push_back(point[k]);
        for (int s = next_seg(k); s >= 0; s = next_seg(k)) {
            used[s] = 1;
            k = other(s, k);
            c.points.push_back(point[k]);
        }
        return k;
    };

    std::vector<Contour> out;
    // open chains start at an endpoint shared by a single segment
    for (const auto& [k, list] : at) {
        if (list.size() != 1 || used[list[0]]) continue;
        Contour c;
        c.level = level;
        walk(k, c);
        out.push_back(std::move(c));
    }
    for (int s = 0; s < static_cast<int>(segs.size()); ++s) {
        if (used[s]) continue;
        Contour c;
        c.level = level;
        const std::int64_t end = walk(segs[s].a, c);
        c.closed = end == segs[s].a;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace

EHatJet e_hat_jet(double eps, double Lambda, double G, double g) {
    const double q = G / Lambda;
    const double s2 = 1.0 - q * q;
    if (!(s2 > 0.0)) throw DomainError("e_hat_jet: |G| must be below Lambda");
    const double s = std::sqrt(s2);
    const double cg = std::cos(g), sg = std::sin(g);
    const double L2 = Lambda * Lambda;
    EHatJet j;
    j.value = s * cg + eps * q * q;
    j.dG = (G / L2) * (2.0 * eps - cg / s);
    j.dg = -s * sg;
    j.dGG = (2.0 * eps - cg / s) / L2 - G * G * cg / (L2 * L2 * s * s2);
    j.dGg = (G / L2) * sg / s;
    j.dgg = -s * cg;
    return j;
}

std::string to_string(EquilibriumKind k) { return k == EquilibriumKind::center ? "center" : "saddle"; }

std::vector<EquilibriumReport> find_equilibria(double eps, double Lambda, int grid_n) {
    if (!(eps > 0.0)) throw DomainError("find_equilibria: eps must be positive");
    if (std::abs(eps - 0.5) < 1e-9 || std::abs(eps - 1.0) < 1e-9) {
        throw DomainError("find_equilibria: eps is a transition value (1/2 or 1)");
    }
    if (!(Lambda > 0.0) || grid_n < 2) throw DomainError("find_equilibria: invalid Lambda or grid_n");
    std::vector<EquilibriumReport> out;
    const double gtol = 1e-13;
    for (int a = 0; a < grid_n; ++a) {
        for (int b = 0; b < grid_n; ++b) {
            double g = -kPi + 2.0 * kPi * a / grid_n;
            double G = Lambda * (-1.0 + 2.0 * (b + 0.5) / grid_n) * 0.98;
            bool converged = false, approached = false;
            for (int it = 0; it < 60; ++it) {
                const EHatJet J = e_hat_jet(eps, Lambda, G, g);
                const double res = std::hypot(J.dG * Lambda, J.dg);
                if (res < gtol) {
                    converged = true;
                    break;
                }
                if (res < 1e-6) approached = true;
                const double det = J.dGG * J.dgg - J.dGg * J.dGg;
                if (!(std::abs(det) > 1e-300)) break;
                const double dG = -(J.dgg * J.dG - J.dGg * J.dg) / det;
                const double dg = -(J.dGG * J.dg - J.dGg * J.dG) / det;
                G += dG;
                g = std::remainder(g + dg, 2.0 * kPi);
                if (!(std::abs(G) < Lambda * (1.0 - 1e-12))) break;
            }
            if (!converged) {
                if (approached && std::abs(G) < Lambda * (1.0 - 1e-6)) {
                    throw ConvergenceError("find_equilibria: Newton stalled near a candidate at g=" +
                                           num(g) + ", G=" + num(G));
                }
                continue;
            }
            if (std::abs(g + kPi) < 1e-12) g = kPi;
            const bool dup = std::any_of(out.begin(), out.end(), [&](const EquilibriumReport& e) {
                return std::abs(std::remainder(e.g - g, 2.0 * kPi)) < 1e-7 && std::abs(e.G - G) < 1e-7 * Lambda;
            });
            if (dup) continue;
            const EHatJet J = e_hat_jet(eps, Lambda, G, g);
            const double det = J.dGG * J.dgg - J.dGg * J.dGg;
            EquilibriumReport r;
            r.g = g;
            r.G = G;
            if (det > 0.0) {
                r.kind = EquilibriumKind::center;
                r.eigenvalues = {{0.0, std::sqrt(det)}, {0.0, -std::sqrt(det)}};
            } else {
                r.kind = EquilibriumKind::saddle;
                r.eigenvalues = {{std::sqrt(-det), 0.0}, {-std::sqrt(-det), 0.0}};
            }
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        return x.g != y.g ? x.g < y.g : x.G < y.G;
    });
    return out;
}

std::vector<Contour> contour_levels(double eps, double Lambda, PortraitGrid grid,
                                    const std::vector<double>& levels) {
    const Field f = sample(eps, Lambda, grid);
    std::vector<Contour> out;
    for (double L : levels) {
        auto cs = extract(f, L);
        out.insert(out.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
    }
    return out;
}

std::vector<Contour> phase_portrait(double eps, double Lambda, PortraitGrid grid, int levels) {
    if (levels < 1) throw DomainError("phase_portrait: levels must be positive");
    const Field f = sample(eps, Lambda, grid);
    const auto [lo, hi] = std::minmax_element(f.v.begin(), f.v.end());
    std::vector<double> ls;
    for (int k = 1; k <= levels; ++k) ls.push_back(*lo + (*hi - *lo) * k / (levels + 1));
    if (eps > 0.5) ls.push_back(1.0);
    std::sort(ls.begin(), ls.end());
    std::vector<Contour> out;
    for (double L : ls) {
        auto cs = extract(f, L);
        out.insert(out.end(), std::make_move_iterator(cs.begin()), std::make_move_iterator(cs.end()));
    }
    return out;
}

bool has_rotation(const std::vector<Contour>& contours, PortraitGrid grid) {
    const double dg = 2.0 * kPi / (grid.ng - 1);
    for (const auto& c : contours) {
        if (c.points.empty()) continue;
        const auto [mn, mx] = std::minmax_element(c.points.begin(), c.points.end(),
                                                  [](const auto& p, const auto& q) { return p.first < q.first; });
        if (mx->first - mn->first >= 2.0 * kPi - 2.0 * dg) return true;
    }
    return false;
}

void write_portrait_csv(std::ostream& os, const std::vector<Contour>& contours,
                        const std::vector<std::string>& preamble) {
    for (const auto& line : preamble) os << "# " << line << '\n';
    os << "level,g,G\n";
    for (std::size_t c = 0; c < contours.size(); ++c) {
        os << "# contour," << c << ',' << num(contours[c].level) << (contours[c].closed ? ",closed" : ",open")
           << '\n';
        for (const auto& [g, G] : contours[c].points) {
            os << num(contours[c].level) << ',' << num(g) << ',' << num(G) << '\n';
        }
    }
}

}  // namespace perilib
