#ifndef PCMTES_ENGINE_RK4_HPP
#define PCMTES_ENGINE_RK4_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

#include <Eigen/Dense>

#include "pcmtes/errors.hpp"

namespace pcmtes {

using StateVector = Eigen::VectorXd;

struct Rk4Options {
    int substeps = 1;             // RK4 stages per dt, applied pro rata to shorter steps
    double event_tolerance = 0.01; // s, width of the bisection bracket around a crossing
};

struct Rk4StepResult {
    StateVector y;
    double h_taken = 0.0;
    std::vector<int> fired;  // indices into the event-margin vector
};

// One classical RK4 step of an autonomous system.
template <class Deriv>
StateVector rk4_step(Deriv&& f, const StateVector& y, double h) {
    const StateVector k1 = f(y);
    const StateVector k2 = f(StateVector(y + 0.5 * h * k1));
    const StateVector k3 = f(StateVector(y + 0.5 * h * k2));
    const StateVector k4 = f(StateVector(y + h * k3));
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

template <class Deriv>
StateVector rk4_advance(Deriv&& f, const StateVector& y, double h, int n) {
    StateVector out = y;
    const double hs = h / n;
    for (int i = 0; i < n; ++i) out = rk4_step(f, out, hs);
    return out;
}

namespace detail {

inline bool crossed(double before, double after) noexcept {
    if (before == 0.0) return false;
    return (before > 0.0) ? after <= 0.0 : after >= 0.0;
}

inline std::vector<int> crossings(const Eigen::VectorXd& g0, const Eigen::VectorXd& g1) {
    std::vector<int> out;
    for (Eigen::Index i = 0; i < g0.size(); ++i)
        if (crossed(g0[i], g1[i])) out.push_back(static_cast<int>(i));
    return out;
}

} // namespace detail

// Advances y by at most dt. When an event margin changes sign during the step,
// the crossing is bracketed by bisection to event_tolerance and the step ends
// at the upper end of the bracket, just past the crossing. The caller keeps
// calling until the full dt has been covered.
template <class Deriv, class Events>
    requires std::invocable<Events&, const StateVector&>
Rk4StepResult integrate_rk4(Deriv&& f, const StateVector& y0, double dt, Events&& events, const Rk4Options& opt = {}) {
    if (!(dt > 0.0)) throw DomainError("integrate_rk4: dt must be positive");
    const int n_full = std::max(1, opt.substeps);
    auto advance = [&](double h) {
        const int n = std::max(1, static_cast<int>(std::ceil(n_full * h / dt - 1e-9)));
        return rk4_advance(f, y0, h, n);
    };

    const Eigen::VectorXd g0 = events(y0);
    Rk4StepResult out;
    out.y = advance(dt);
    out.h_taken = dt;
    if (g0.size() == 0) return out;

    Eigen::VectorXd g1 = events(out.y);
    out.fired = detail::crossings(g0, g1);
    if (out.fired.empty() || dt <= opt.event_tolerance) return out;

    double lo = 0.0, hi = dt;
    StateVector y_hi = out.y;
    while (hi - lo > opt.event_tolerance) {
        const double mid = 0.5 * (lo + hi);
        StateVector y_mid = advance(mid);
        const Eigen::VectorXd g_mid = events(y_mid);
        if (detail::crossings(g0, g_mid).empty()) {
            lo = mid;
        } else {
            hi = mid;
            y_hi = std::move(y_mid);
            g1 = g_mid;
        }
    }
    out.y = std::move(y_hi);
    out.h_taken = hi;
    out.fired = detail::crossings(g0, g1);
    return out;
}

template <class Deriv>
StateVector integrate_rk4(Deriv&& f, const StateVector& y0, double dt, const Rk4Options& opt = {}) {
    return integrate_rk4(f, y0, dt, [](const StateVector&) { return Eigen::VectorXd(); }, opt).y;
}

} // namespace pcmtes

#endif
