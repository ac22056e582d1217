#pragma once

// Gradient descent with Barzilai-Borwein step proposals and Armijo
// backtracking, on plain coordinate vectors. The solver and the sharp
// embedding-constant search both run on top of this.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace plap {

enum class DescentStatus { Converged, MaxIterations, Stalled, Diverged };

inline const char* to_string(DescentStatus s) {
    switch (s) {
        case DescentStatus::Converged: return "converged";
        case DescentStatus::MaxIterations: return "max-iterations";
        case DescentStatus::Stalled: return "stalled";
        case DescentStatus::Diverged: return "anti-coercive-detected";
    }
    return "?";
}

struct DescentOptions {
    double tolerance = 1e-10;  ///< on the max-norm of the gradient
    long max_iterations = 100000;
    double initial_step = 1.0;
    double backtracking = 0.5;
    double armijo = 1e-4;
    double bb_min = 1e-12;
    double bb_max = 1e12;
    double divergence_floor = -1e12;
    double norm_ceiling = 1e8;  ///< on the Euclidean norm of the iterate
    bool keep_trace = false;
};

struct TraceEntry {
    double value;
    double gradient_max;
};

struct DescentResult {
    std::vector<double> x;
    double value = 0.0;
    std::vector<double> grad;
    double gradient_max = 0.0;
    long iterations = 0;
    DescentStatus status = DescentStatus::MaxIterations;
    /// s.y / s.s from the last accepted step; 0 if no step was taken.
    double curvature = 0.0;
    std::vector<TraceEntry> trace;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

}  // namespace detail

/// Slack for comparing objective values that differ only by rounding.
inline double roundoff_window(double value) { return 1e-12 * (1.0 + std::abs(value)); }

using Objective = std::function<double(const std::vector<double>&)>;
using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;
using Projection = std::function<void(std::vector<double>&)>;

/**
 * Minimises `objective` from x0.
 *
 * A trial step x - t g is accepted on the Armijo condition, or, once the two
 * objective values agree to within roundoff_window(), on the derivative form
 * g(x - t g) . g >= -(1 - 2 c) |g|^2. The second branch keeps the iteration
 * moving when function differences are below rounding while the gradient is
 * still above tolerance. Accepted values never rise by more than the window.
 */
inline DescentResult descend(const Objective& objective, const Gradient& gradient, std::vector<double> x0,
                             const DescentOptions& opts, const Projection& project = {}) {
    DescentResult r;
    if (project) project(x0);
    r.x = std::move(x0);
    r.value = objective(r.x);
    r.grad = gradient(r.x);
    r.gradient_max = detail::max_norm(r.grad);
    if (opts.keep_trace) r.trace.push_back({r.value, r.gradient_max});
    if (r.gradient_max <= opts.tolerance) {
        r.status = DescentStatus::Converged;
        return r;
    }

    const std::size_t n = r.x.size();
    double step = opts.initial_step;
    std::vector<double> trial(n), trial_grad;
    for (long it = 1; it <= opts.max_iterations; ++it) {
        const double gg = detail::dot(r.grad, r.grad);
        double t = step;
        bool accepted = false;
        double trial_value = 0.0;
        trial_grad.clear();
        while (t >= 1e-30) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = r.x[i] - t * r.grad[i];
            if (project) project(trial);
            trial_value = objective(trial);
            if (std::isfinite(trial_value)) {
                if (trial_value <= r.value - opts.armijo * t * gg) {
                    accepted = true;
                    break;
                }
                if (std::abs(trial_value - r.value) <= roundoff_window(r.value)) {
                    trial_grad = gradient(trial);
                    if (detail::dot(trial_grad, r.grad) >= -(1.0 - 2.0 * opts.armijo) * gg) {
                        accepted = true;
                        break;
                    }
                    trial_grad.clear();
                }
            }
            t *= opts.backtracking;
        }
        if (!accepted) {
            r.status = DescentStatus::Stalled;
            return r;
        }
        if (trial_grad.empty()) trial_grad = gradient(trial);

        double ss = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = trial[i] - r.x[i];
            const double y = trial_grad[i] - r.grad[i];
            ss += s * s;
            sy += s * y;
        }
        std::swap(r.x, trial);
        std::swap(r.grad, trial_grad);
        r.value = trial_value;
        r.gradient_max = detail::max_norm(r.grad);
        r.iterations = it;
        if (opts.keep_trace) r.trace.push_back({r.value, r.gradient_max});

        if (r.value < opts.divergence_floor || std::sqrt(detail::dot(r.x, r.x)) > opts.norm_ceiling) {
            r.status = DescentStatus::Diverged;
            return r;
        }
        if (ss > 0.0) r.curvature = sy / ss;
        if (r.gradient_max <= opts.tolerance) {
            r.status = DescentStatus::Converged;
            return r;
        }
        step = sy > 0.0 ? std::clamp(ss / sy, opts.bb_min, opts.bb_max) : std::clamp(2.0 * t, opts.bb_min, opts.bb_max);
    }
    r.status = DescentStatus::MaxIterations;
    return r;
}

}  // namespace plap
