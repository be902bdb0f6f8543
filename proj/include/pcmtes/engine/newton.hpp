#ifndef PCMTES_ENGINE_NEWTON_HPP
#define PCMTES_ENGINE_NEWTON_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "pcmtes/errors.hpp"

namespace pcmtes {

struct NewtonOptions {
    double rel_tol = 1e-8;
    int max_iter = 50;
    int max_halvings = 8;
    double scale = 1.0;  // convergence when max|residual| <= rel_tol * scale
};

struct NewtonResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
};

namespace detail {

inline bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

inline double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

} // namespace detail

// Damped Newton with a forward-difference Jacobian. A step is halved (up to
// max_halvings times) while it increases the residual or makes it non-finite.
template <class Residual>
NewtonResult newton_solve(Residual&& residual, Eigen::VectorXd guess, const NewtonOptions& opt = {}) {
    const Eigen::Index n = guess.size();
    NewtonResult out{std::move(guess), 0.0, 0};
    Eigen::VectorXd r = residual(out.x);
    if (!detail::all_finite(r)) throw SolverError("newton: residual not finite at the initial guess", HUGE_VAL, 0);
    out.residual_norm = detail::inf_norm(r);
    const double target = opt.rel_tol * opt.scale;

    Eigen::MatrixXd J(n, n);
    for (int it = 0; it < opt.max_iter; ++it) {
        if (out.residual_norm <= target) return out;
        out.iterations = it + 1;

        for (Eigen::Index j = 0; j < n; ++j) {
            const double h = 1e-7 * std::max(1.0, std::abs(out.x[j]));
            Eigen::VectorXd xp = out.x;
            xp[j] += h;
            Eigen::VectorXd rp = residual(xp);
            if (!detail::all_finite(rp)) {
                xp[j] = out.x[j] - h;
                rp = residual(xp);
                J.col(j) = (r - rp) / h;
            } else {
                J.col(j) = (rp - r) / h;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(J);
        if (!lu.isInvertible() || !J.allFinite())
            throw SolverError("newton: singular Jacobian", out.residual_norm, out.iterations);
        Eigen::VectorXd step = lu.solve(-r);

        double lambda = 1.0;
        Eigen::VectorXd x_new = out.x + step;
        Eigen::VectorXd r_new = residual(x_new);
        for (int k = 0; k < opt.max_halvings; ++k) {
            if (detail::all_finite(r_new) && detail::inf_norm(r_new) < out.residual_norm) break;
            lambda *= 0.5;
            x_new = out.x + lambda * step;
            r_new = residual(x_new);
        }
        if (!detail::all_finite(r_new))
            throw SolverError("newton: residual not finite after damping", out.residual_norm, out.iterations);
        out.x = std::move(x_new);
        r = std::move(r_new);
        out.residual_norm = detail::inf_norm(r);
    }
    if (out.residual_norm <= target) return out;
    throw SolverError("newton: no convergence after " + std::to_string(opt.max_iter) + " iterations",
                      out.residual_norm, out.iterations);
}

struct ScalarRoot {
    double x = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

// Newton on a scalar function known to change sign on [lo, hi]. Iterates that
// leave the current bracket are replaced by bisection, so the search always
// terminates. Convergence on |f| <= rel_tol * scale or a bracket narrower
// than x_tol.
template <class F>
ScalarRoot solve_bracketed(F&& f, double lo, double hi, double guess, const NewtonOptions& opt = {},
                           double x_tol = 1e-12) {
    double f_lo = f(lo), f_hi = f(hi);
    if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
        throw SolverError("bracketed solve: residual not finite at bracket ends", HUGE_VAL, 0);
    if (f_lo == 0.0) return {lo, 0.0, 0};
    if (f_hi == 0.0) return {hi, 0.0, 0};
    if ((f_lo > 0.0) == (f_hi > 0.0))
        throw SolverError("bracketed solve: no sign change", std::min(std::abs(f_lo), std::abs(f_hi)), 0);
    const double target = opt.rel_tol * opt.scale;
    const int budget = std::max(opt.max_iter, 200);

    double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
    double fx = f(x);
    for (int it = 1; it <= budget; ++it) {
        if (!std::isfinite(fx)) throw SolverError("bracketed solve: residual not finite", HUGE_VAL, it);
        if (std::abs(fx) <= target) return {x, fx, it};
        if ((fx > 0.0) == (f_lo > 0.0)) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
        if (hi - lo <= x_tol * std::max(1.0, std::abs(x))) return {x, fx, it};

        const double h = 1e-7 * std::max(1e-3, std::abs(x));
        const double xh = (x + h < hi) ? x + h : x - h;
        const double dfx = (f(xh) - fx) / (xh - x);
        double next = (dfx != 0.0 && std::isfinite(dfx)) ? x - fx / dfx : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        x = next;
        fx = f(x);
    }
    throw SolverError("bracketed solve: iteration budget exhausted", std::abs(fx), budget);
}

} // namespace pcmtes

#endif
