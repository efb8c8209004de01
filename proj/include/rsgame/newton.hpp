#pragma once

#include "rsgame/error.hpp"
#include "rsgame/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace rsgame {

struct NewtonOptions {
    double tolerance = 1e-10;
    int max_iterations = 200;
    int max_halvings = 30;
    /// Central-difference step is fd_scale * (1 + |x_j|).
    double fd_scale = 1e-6;
    /// Extra iterations after reaching tolerance, kept only if they lower the residual.
    int polish_iterations = 3;
};

template <std::size_t N>
struct NewtonResult {
    linalg::Vec<N> x{};
    double residual = std::numeric_limits<double>::infinity();
    int iterations = 0;
    bool converged = false;
};

/// Damped Newton iteration on F(x) = 0 with a central finite-difference
/// Jacobian. `project` maps a trial point back into the admissible domain;
/// a step is accepted only when the max-norm residual strictly decreases,
/// halving the step up to max_halvings times. Non-finite residuals count as
/// rejections. `cap(x, step)` returns the largest admissible multiple of
/// the full step (fraction-to-boundary); line search starts from there.
template <std::size_t N, class Residual, class Project, class Cap>
NewtonResult<N> damped_newton(Residual&& residual, linalg::Vec<N> x0, Project&& project, Cap&& cap,
                              const NewtonOptions& opt = {}) {
    using linalg::Vec;
    auto measure = [&](const Vec<N>& f) {
        for (double v : f)
            if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        return linalg::norm_inf(f);
    };

    NewtonResult<N> out;
    out.x = project(x0);
    Vec<N> f = residual(out.x);
    out.residual = measure(f);
    int polish_left = opt.polish_iterations;

    while (out.iterations < opt.max_iterations) {
        if (out.residual <= opt.tolerance) {
            out.converged = true;
            if (polish_left-- <= 0) break;
        }

        linalg::Mat<N> jac{};
        for (std::size_t j = 0; j < N; ++j) {
            const double h = opt.fd_scale * (1.0 + std::abs(out.x[j]));
            Vec<N> xp = out.x, xm = out.x;
            xp[j] += h;
            xm[j] -= h;
            const Vec<N> fp = residual(xp);
            const Vec<N> fm = residual(xm);
            // One-sided near the edge of the admissible domain.
            const bool up = std::isfinite(measure(fp)), down = std::isfinite(measure(fm));
            for (std::size_t i = 0; i < N; ++i) {
                if (up && down) jac[i][j] = (fp[i] - fm[i]) / (2.0 * h);
                else if (up) jac[i][j] = (fp[i] - f[i]) / h;
                else if (down) jac[i][j] = (f[i] - fm[i]) / h;
                else jac[i][j] = std::numeric_limits<double>::quiet_NaN();
            }
        }

        Vec<N> rhs{};
        for (std::size_t i = 0; i < N; ++i) rhs[i] = -f[i];
        Vec<N> step{};
        try {
            step = linalg::Lu<N>(jac, "Newton Jacobian").solve(rhs);
        } catch (const Error&) {
            if (out.converged) break;
            throw;
        }

        bool accepted = false;
        double t = std::min(1.0, cap(out.x, step));
        for (int h = 0; h <= opt.max_halvings; ++h, t *= 0.5) {
            Vec<N> trial = out.x;
            for (std::size_t i = 0; i < N; ++i) trial[i] += t * step[i];
            trial = project(trial);
            const Vec<N> ft = residual(trial);
            const double nt = measure(ft);
            if (nt < out.residual) {
                out.x = trial;
                f = ft;
                out.residual = nt;
                accepted = true;
                break;
            }
        }
        ++out.iterations;
        if (!accepted) break;
    }
    out.converged = out.residual <= opt.tolerance;
    return out;
}

template <std::size_t N, class Residual, class Project>
NewtonResult<N> damped_newton(Residual&& residual, linalg::Vec<N> x0, Project&& project,
                              const NewtonOptions& opt = {}) {
    return damped_newton<N>(residual, x0, project, [](const linalg::Vec<N>&, const linalg::Vec<N>&) { return 1.0; },
                            opt);
}

/// Largest t in (0, 1] such that x + t step keeps every consecutive gap
/// x[j+1] - x[j] at least (1 - keep) of its current size.
template <std::size_t N>
double ordered_step_cap(const linalg::Vec<N>& x, const linalg::Vec<N>& step, double keep = 0.5) {
    double t = 1.0;
    for (std::size_t j = 0; j + 1 < N; ++j) {
        const double shrink = step[j] - step[j + 1];
        if (shrink > 0.0) t = std::min(t, keep * (x[j + 1] - x[j]) / shrink);
    }
    return t;
}

} // namespace rsgame
