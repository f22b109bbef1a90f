#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "solterra/linalg.hpp"

namespace solterra::opt {

struct MinimizeOptions {
    int max_iterations = 500;
    double rel_tolerance = 1e-8;    // relative change of the objective
    double grad_tolerance = 1e-6;   // max-norm of the numeric gradient
    double fd_step = 1e-6;          // central-difference step scale
};

struct MinimizeResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

namespace detail {

inline std::vector<double> gradient(const Objective& f, std::vector<double>& x, double step) {
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        const double h = step * std::max(1.0, std::fabs(xi));
        x[i] = xi + h;
        const double fp = f(x);
        x[i] = xi - h;
        const double fm = f(x);
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace detail

/// BFGS with numeric central-difference gradients and Armijo backtracking.
/// Stops on relative objective change, gradient max-norm, or the iteration cap.
inline MinimizeResult minimize_bfgs(const Objective& f, std::vector<double> x0,
                                    const MinimizeOptions& options = {}) {
    MinimizeResult res;
    const std::size_t d = x0.size();
    res.x = std::move(x0);
    res.value = f(res.x);
    if (d == 0) {
        res.converged = true;
        return res;
    }

    std::vector<double> g = detail::gradient(f, res.x, options.fd_step);
    // inverse Hessian approximation, identity start
    std::vector<double> h(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) h[i * d + i] = 1.0;

    auto max_norm = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m = std::max(m, std::fabs(e));
        return m;
    };

    for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
        if (max_norm(g) < options.grad_tolerance) {
            res.converged = true;
            return res;
        }

        std::vector<double> dir(d, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < d; ++j) s += h[i * d + j] * g[j];
            dir[i] = -s;
        }
        double slope = linalg::dot(dir, g);
        if (!(slope < 0.0)) {  // not a descent direction: restart from steepest descent
            for (std::size_t i = 0; i < d * d; ++i) h[i] = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                h[i * d + i] = 1.0;
                dir[i] = -g[i];
            }
            slope = linalg::dot(dir, g);
            if (!(slope < 0.0)) {
                res.converged = true;  // gradient numerically zero
                return res;
            }
        }

        // Armijo backtracking
        const double c1 = 1e-4;
        double t = 1.0;
        std::vector<double> xn(d);
        double fn = std::numeric_limits<double>::infinity();
        bool accepted = false;
        while (t >= 1e-14) {
            for (std::size_t i = 0; i < d; ++i) xn[i] = res.x[i] + t * dir[i];
            fn = f(xn);
            if (std::isfinite(fn) && fn <= res.value + c1 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // No progress possible along a genuine descent direction: we are at
            // numerical resolution. Accept if the gradient is already small-ish.
            res.converged = max_norm(g) < 1e3 * options.grad_tolerance;
            return res;
        }

        const double fprev = res.value;
        std::vector<double> gn = detail::gradient(f, xn, options.fd_step);

        // BFGS inverse update with curvature guard
        std::vector<double> s(d), y(d);
        for (std::size_t i = 0; i < d; ++i) {
            s[i] = xn[i] - res.x[i];
            y[i] = gn[i] - g[i];
        }
        const double sy = linalg::dot(s, y);
        if (sy > 1e-12) {
            std::vector<double> hy(d, 0.0);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) hy[i] += h[i * d + j] * y[j];
            const double yhy = linalg::dot(y, hy);
            const double a = (1.0 + yhy / sy) / sy;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j)
                    h[i * d + j] += a * s[i] * s[j] - (s[i] * hy[j] + hy[i] * s[j]) / sy;
        }

        res.x = xn;
        res.value = fn;
        g = std::move(gn);

        if (std::fabs(fprev - fn) <= options.rel_tolerance * (std::fabs(fprev) + 1e-12)) {
            res.converged = true;
            ++res.iterations;
            return res;
        }
    }
    return res;  // hit the cap, converged stays false
}

}  // namespace solterra::opt
