#include "perilib/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "perilib/error.hpp"

namespace perilib {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Dormand-Prince tableau
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

struct Step {
    Vec4 y;
    Vec4 err;
    Vec4 k7;
};

Step dp_step(const std::function<Vec4(const Vec4&)>& f, const Vec4& y, const Vec4& k1, double h) {
    Vec4 t;
    auto comb = [&](std::initializer_list<std::pair<double, const Vec4*>> terms) {
        for (int i = 0; i < 4; ++i) {
            double s = 0.0;
            for (const auto& [c, k] : terms) s += c * (*k)[i];
            t[i] = y[i] + h * s;
        }
        return t;
    };
    const Vec4 k2 = f(comb({{a21, &k1}}));
    const Vec4 k3 = f(comb({{a31, &k1}, {a32, &k2}}));
    const Vec4 k4 = f(comb({{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec4 k5 = f(comb({{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec4 k6 = f(comb({{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    Step s;
    s.y = comb({{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    s.k7 = f(s.y);
    for (int i = 0; i < 4; ++i) {
        s.err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * s.k7[i]);
    }
    return s;
}

double error_norm(const Step& s, const Vec4& y, const StepControl& c) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double sc = c.atol + c.rtol * std::max(std::abs(y[i]), std::abs(s.y[i]));
        m = std::max(m, std::abs(s.err[i]) / sc);
    }
    return m;
}

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

std::string state_note(double t, const Vec4& y) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "; last good state at t=%.17g: (%.17g, %.17g, %.17g, %.17g)", t, y[0], y[1],
                  y[2], y[3]);
    return buf;
}

// Bisection for the root of phi(theta) on [0, 1] with phi(0), phi(1) of opposite signs.
template <class Phi>
double locate(Phi phi, double h, double t) {
    double lo = 0.0, hi = 1.0;
    const int slo = sgn(phi(lo));
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sgn(phi(mid)) == slo) lo = mid; else hi = mid;
        if ((hi - lo) * std::abs(h) <= 2e-16 * std::max(1.0, std::abs(t))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::string to_string(EventKind k) {
    switch (k) {
        case EventKind::squeeze: return "squeeze";
        case EventKind::winding_2pi: return "winding-2pi";
        case EventKind::domain_exit: return "domain-exit";
    }
    return "unknown";
}

double wrap_to_pi(double a) { return std::remainder(a, kTwoPi); }

OdeSolution integrate_ode(const OdeProblem& prob, const Vec4& y0, double T, const StepControl& ctrl) {
    if (!(T >= 0.0) || !std::isfinite(T)) throw DomainError("integration duration must be finite and non-negative");
    if (!(ctrl.rtol > 0.0) || !(ctrl.atol > 0.0)) throw DomainError("integrator tolerances must be positive");
    if (prob.inside && !prob.inside(y0)) throw DomainError("initial state outside the domain");

    OdeSolution out;
    double t = 0.0;
    Vec4 y = y0;
    Vec4 k1 = prob.rhs(y);
    const double E0 = prob.energy ? prob.energy(y) : 0.0;
    auto record = [&](double tt, const Vec4& yy) {
        out.times.push_back(tt);
        out.states.push_back(yy);
        if (prob.energy) {
            const double E = prob.energy(yy);
            out.energies.push_back(E);
            const double drift = std::abs(E - E0) / (E0 != 0.0 ? std::abs(E0) : 1.0);
            out.max_energy_drift = std::max(out.max_energy_drift, drift);
        } else {
            out.energies.push_back(0.0);
        }
    };
    record(t, y);
    if (T == 0.0) return out;

    int last_sign = prob.squeeze ? sgn(prob.squeeze(y)) : 0;
    double ang_raw = prob.winding_angle ? prob.winding_angle(y) : 0.0;
    double ang_unwrapped = ang_raw;
    const double ang_start = ang_raw;
    long windings = 0;

    double h = ctrl.h_init;
    if (!(h > 0.0)) {
        double ny = 0.0, nf = 0.0;
        for (int i = 0; i < 4; ++i) {
            const double sc = ctrl.atol + ctrl.rtol * std::abs(y[i]);
            ny = std::max(ny, std::abs(y[i]) / sc);
            nf = std::max(nf, std::abs(k1[i]) / sc);
        }
        h = (ny < 1e-5 || nf < 1e-5) ? 1e-6 * T : 0.01 * ny / nf;
        h = std::min(h, T);
    }
    h = std::min(h, ctrl.h_max);

    long steps = 0;
    while (T - t > 1e-15 * T) {
        if (++steps > ctrl.max_steps) throw ConvergenceError("integration exceeded max_steps" + state_note(t, y));
        h = std::min({h, T - t, ctrl.h_max});
        const double h_floor = 1e-14 * std::max(std::abs(t), T);

        Step st;
        bool guard = false;
        try {
            st = dp_step(prob.rhs, y, k1, h);
        } catch (const SingularityError&) {
            guard = true;
        } catch (const DomainError&) {
            guard = true;
        }
        double err = guard ? std::numeric_limits<double>::infinity() : error_norm(st, y, ctrl);
        if (guard || !std::isfinite(err)) {
            ++out.rejected_steps;
            h *= 0.25;
            if (h < h_floor) {
                out.domain_exit = true;
                out.events.push_back({t, EventKind::domain_exit});
                break;
            }
            continue;
        }
        if (err > 1.0) {
            ++out.rejected_steps;
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            if (h < h_floor) throw ConvergenceError("step-size underflow (singular approach)" + state_note(t, y));
            continue;
        }
        double dA = 0.0;
        if (prob.winding_angle) {
            const double diff = prob.winding_angle(st.y) - ang_raw;
            dA = prob.angle_is_lifted ? diff : wrap_to_pi(diff);
            if (std::abs(dA) > 0.5 * std::numbers::pi) {
                ++out.rejected_steps;
                h *= 0.5;
                continue;
            }
        }
        if (prob.inside && !prob.inside(st.y)) {
            out.domain_exit = true;
            out.events.push_back({t + h, EventKind::domain_exit});
            break;
        }

        // events inside the accepted step
        auto sub = [&](double theta) { return dp_step(prob.rhs, y, k1, theta * h).y; };
        if (prob.squeeze) {
            const int s1 = sgn(prob.squeeze(st.y));
            if (s1 != 0 && last_sign != 0 && s1 != last_sign) {
                const int s0 = last_sign;
                const double th = locate(
                    [&](double th_) {
                        if (th_ == 0.0) return static_cast<double>(s0);
                        return prob.squeeze(sub(th_));
                    },
                    h, t);
                out.events.push_back({t + th * h, EventKind::squeeze});
            }
            if (s1 != 0) last_sign = s1;
        }
        if (prob.winding_angle) {
            const double next = ang_unwrapped + dA;
            const long k = static_cast<long>(std::floor(std::abs(next - ang_start) / kTwoPi));
            if (k > windings) {
                const double target = kTwoPi * static_cast<double>(k);
                const double th = locate(
                    [&](double th_) {
                        if (th_ == 0.0) return std::abs(ang_unwrapped - ang_start) - target;
                        const double diff = prob.winding_angle(sub(th_)) - ang_raw;
                        const double a = ang_unwrapped + (prob.angle_is_lifted ? diff : wrap_to_pi(diff));
                        return std::abs(a - ang_start) - target;
                    },
                    h, t);
                out.events.push_back({t + th * h, EventKind::winding_2pi});
                windings = k;
            }
            ang_unwrapped = next;
            ang_raw = prob.winding_angle(st.y);
        }

        t += h;
        y = st.y;
        k1 = st.k7;
        record(t, y);
        h *= err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
    }
    return out;
}

}  // namespace perilib
