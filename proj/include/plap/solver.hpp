#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "plap/bound.hpp"
#include "plap/constants.hpp"
#include "plap/descent.hpp"
#include "plap/energy.hpp"

namespace plap {

enum class Method { GradientDescent, Newton };

struct SolverOptions {
    double tolerance = 1e-10;  ///< max-norm of the gradient
    long max_iterations = 100000;
    double initial_step = 1.0;
    double backtracking = 0.5;
    double armijo = 1e-4;
    std::uint64_t seed = 1;
    int starts = 10;       ///< random starts in multistart, in addition to x0 = 0
    double radius = 10.0;  ///< h_norm radius of the multistart ball
    Method method = Method::GradientDescent;
    bool keep_trace = false;

    void validate() const {
        if (!(tolerance > 0.0)) throw InputError("solver tolerance must be positive");
        if (max_iterations < 0) throw InputError("max iterations must be nonnegative");
        if (!(initial_step > 0.0)) throw InputError("initial step must be positive");
        if (!(backtracking > 0.0 && backtracking < 1.0)) throw InputError("backtracking factor must lie in (0, 1)");
        if (!(armijo > 0.0 && armijo < 0.5)) throw InputError("Armijo constant must lie in (0, 0.5)");
        if (starts < 0) throw InputError("number of starts must be nonnegative");
        if (!(radius >= 0.0)) throw InputError("multistart radius must be nonnegative");
    }

    DescentOptions descent() const {
        DescentOptions d;
        d.tolerance = tolerance;
        d.max_iterations = max_iterations;
        d.initial_step = initial_step;
        d.backtracking = backtracking;
        d.armijo = armijo;
        d.keep_trace = keep_trace;
        return d;
    }
};

struct SolveReport {
    GridFunction minimizer;
    EnergyBreakdown energy;
    double final_energy = 0.0;  ///< J_u at the minimizer
    double gradient_max = 0.0;  ///< equal to the strong residual max-norm
    long iterations = 0;
    bool converged = false;
    DescentStatus status = DescentStatus::MaxIterations;
    std::string message;
    double curvature = 0.0;
    std::vector<TraceEntry> trace;
};

namespace detail {

inline SolveReport finish(const ProblemInstance& inst, DescentResult r, const SolverOptions& opts) {
    SolveReport rep;
    rep.minimizer = GridFunction::from_interior(r.x);
    rep.energy = energy(inst, rep.minimizer);
    rep.final_energy = rep.energy.total;
    rep.gradient_max = r.gradient_max;
    rep.iterations = r.iterations;
    rep.status = r.status;
    rep.converged = r.status == DescentStatus::Converged && r.gradient_max <= opts.tolerance;
    rep.curvature = r.curvature;
    rep.trace = std::move(r.trace);
    switch (r.status) {
        case DescentStatus::Converged: rep.message = "converged"; break;
        case DescentStatus::MaxIterations: rep.message = "maximum iterations reached; best iterate returned"; break;
        case DescentStatus::Stalled: rep.message = "line search stalled above tolerance"; break;
        case DescentStatus::Diverged:
            rep.message = "anti-coercive detected: energy unbounded below along the iterates (regime not covered)";
            break;
    }
    return rep;
}

inline double df_dx(const Nonlinearity& f, int k, double x, double u) {
    if (const auto* c = f.canonical()) {
        const auto& g = c->coefficients();
        const double q = g.q(k);
        if (q == 1.0) return -g.a(k);
        return -g.a(k) * q * std::pow(std::abs(x), q - 1.0);
    }
    const double h = 1e-6 * (1.0 + std::abs(x));
    return (f.f(k, x + h, u) - f.f(k, x - h, u)) / (2.0 * h);
}

/// Tridiagonal Hessian of J_u at x as (diagonal, off-diagonal).
inline std::pair<std::vector<double>, std::vector<double>> hessian(const ProblemInstance& inst, const GridFunction& x) {
    const int T = inst.T();
    std::vector<double> c(static_cast<std::size_t>(T) + 1);
    for (int j = 0; j <= T; ++j)
        c[j] = inst.h()[j] * (inst.p()[j] - 1.0) * std::pow(std::abs(x[j + 1] - x[j]), inst.p()[j] - 2.0);
    std::vector<double> diag(static_cast<std::size_t>(T)), off(static_cast<std::size_t>(std::max(T - 1, 0)));
    for (int k = 1; k <= T; ++k) {
        diag[k - 1] = c[k - 1] + c[k] - inst.lambda() * df_dx(inst.f(), k, x[k], inst.u()[k]);
        if (k < T) off[k - 1] = -c[k];
    }
    return {diag, off};
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix by Sturm-count bisection.
inline double smallest_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
    const std::size_t n = diag.size();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < n ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - r);
        hi = std::max(hi, diag[i] + r);
    }
    // number of eigenvalues below s
    auto below = [&](double s) {
        std::size_t count = 0;
        double d = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double o = i > 0 ? off[i - 1] : 0.0;
            d = diag[i] - s - (i > 0 ? o * o / d : 0.0);
            if (d == 0.0) d = -1e-300;
            if (d < 0.0) ++count;
        }
        return count;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) >= 1 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Solves the symmetric tridiagonal system (diag, off) z = rhs; false on a nonpositive pivot.
inline bool solve_spd_tridiagonal(std::vector<double> diag, const std::vector<double>& off,
                                  std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        if (!(diag[i - 1] > 0.0)) return false;
        const double w = off[i - 1] / diag[i - 1];
        diag[i] -= w * off[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    if (!(diag[n - 1] > 0.0)) return false;
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off[i] * rhs[i + 1]) / diag[i];
    return true;
}

/// Damped Newton on the tridiagonal Hessian, shifted until positive definite.
inline DescentResult newton(const ProblemInstance& inst, const GridFunction& x0, const SolverOptions& opts) {
    const int T = inst.T();
    auto grid = [](const std::vector<double>& y) { return GridFunction::from_interior(y); };
    DescentResult r;
    r.x = x0.interior_vector();
    r.value = energy(inst, x0).total;
    r.grad = gradient(inst, x0);
    r.gradient_max = max_norm(r.grad);
    const DescentOptions d = opts.descent();
    if (d.keep_trace) r.trace.push_back({r.value, r.gradient_max});
    if (r.gradient_max <= opts.tolerance) {
        r.status = DescentStatus::Converged;
        return r;
    }
    std::vector<double> trial(static_cast<std::size_t>(T));
    for (long it = 1; it <= opts.max_iterations; ++it) {
        const GridFunction x = grid(r.x);
        auto [diag, off] = hessian(inst, x);
        double scale = 0.0;
        for (double e : diag) scale = std::max(scale, std::abs(e));
        std::vector<double> dir;
        for (double shift = 1e-12 * std::max(1.0, scale); shift < 1e12 * std::max(1.0, scale); shift *= 10.0) {
            std::vector<double> shifted = diag;
            for (double& e : shifted) e += shift;
            std::vector<double> rhs = r.grad;
            if (solve_spd_tridiagonal(shifted, off, rhs)) {
                dir = std::move(rhs);
                break;
            }
        }
        const double gd = dir.empty() ? 0.0 : dot(r.grad, dir);
        if (dir.empty() || !(gd > 0.0)) dir = r.grad;  // steepest descent fallback
        const double slope = dot(r.grad, dir);

        double t = 1.0;
        bool accepted = false;
        double tv = 0.0;
        std::vector<double> tg;
        while (t >= 1e-30) {
            for (int i = 0; i < T; ++i) trial[i] = r.x[i] - t * dir[i];
            tv = energy(inst, grid(trial)).total;
            if (std::isfinite(tv)) {
                if (tv <= r.value - d.armijo * t * slope) {
                    accepted = true;
                    break;
                }
                if (std::abs(tv - r.value) <= roundoff_window(r.value)) {
                    tg = gradient(inst, grid(trial));
                    if (dot(tg, dir) >= -(1.0 - 2.0 * d.armijo) * slope) {
                        accepted = true;
                        break;
                    }
                    tg.clear();
                }
            }
            t *= d.backtracking;
        }
        if (!accepted) {
            r.status = DescentStatus::Stalled;
            return r;
        }
        if (tg.empty()) tg = gradient(inst, grid(trial));
        r.x = trial;
        r.grad = std::move(tg);
        r.value = tv;
        r.gradient_max = max_norm(r.grad);
        r.iterations = it;
        if (d.keep_trace) r.trace.push_back({r.value, r.gradient_max});
        if (r.value < d.divergence_floor || std::sqrt(dot(r.x, r.x)) > d.norm_ceiling) {
            r.status = DescentStatus::Diverged;
            return r;
        }
        if (r.gradient_max <= opts.tolerance) {
            r.status = DescentStatus::Converged;
            return r;
        }
    }
    r.status = DescentStatus::MaxIterations;
    return r;
}

}  // namespace detail

/**
 * Minimises J_u from x0. On convergence the strong residual is below
 * opts.tolerance at every node, because the gradient is that residual.
 * Newton is available for p- >= 2 only.
 */
inline SolveReport minimize(const ProblemInstance& inst, const GridFunction& x0, const SolverOptions& opts = {}) {
    opts.validate();
    detail::check_dims(inst, x0);
    if (opts.method == Method::Newton) {
        if (inst.p().min() < 2.0) throw InputError("Newton method requires p- >= 2");
        return detail::finish(inst, detail::newton(inst, x0, opts), opts);
    }
    Objective obj = [&](const std::vector<double>& y) { return energy(inst, GridFunction::from_interior(y)).total; };
    Gradient grad = [&](const std::vector<double>& y) { return gradient(inst, GridFunction::from_interior(y)); };
    return detail::finish(inst, descend(obj, grad, x0.interior_vector(), opts.descent()), opts);
}

/// Critical point of J1 by minimising -J1 with the same iteration as minimize.
inline SolveReport maximize_dual(const ProblemInstance& inst, const GridFunction& x0, const SolverOptions& opts = {}) {
    opts.validate();
    detail::check_dims(inst, x0);
    Objective obj = [&](const std::vector<double>& y) { return -dual_energy(inst, GridFunction::from_interior(y)); };
    Gradient grad = [&](const std::vector<double>& y) {
        auto g = dual_gradient(inst, GridFunction::from_interior(y));
        for (double& e : g) e = -e;
        return g;
    };
    return detail::finish(inst, descend(obj, grad, x0.interior_vector(), opts.descent()), opts);
}

/// Uniform sample from the ball { x in H : h_norm(x) <= radius }.
template <class Rng>
GridFunction sample_h_ball(int T, double radius, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> z(static_cast<std::size_t>(T));
    double zz = 0.0;
    do {
        zz = 0.0;
        for (double& v : z) {
            v = gauss(rng);
            zz += v * v;
        }
    } while (zz == 0.0);
    const double scale = radius * std::pow(unif(rng), 1.0 / T) / std::sqrt(zz);
    for (double& v : z) v *= scale;
    // Gram matrix of the H inner product is tridiag(-1, 2, -1) = B B^T with B
    // lower bidiagonal; x = B^{-T} z has h_norm(x) = |z|.
    std::vector<double> l(static_cast<std::size_t>(T)), o(static_cast<std::size_t>(T), 0.0);
    l[0] = std::sqrt(2.0);
    for (int k = 1; k < T; ++k) {
        o[k - 1] = -1.0 / l[k - 1];
        l[k] = std::sqrt(2.0 - o[k - 1] * o[k - 1]);
    }
    std::vector<double> x(static_cast<std::size_t>(T));
    x[T - 1] = z[T - 1] / l[T - 1];
    for (int k = T - 2; k >= 0; --k) x[k] = (z[k] - o[k] * x[k + 1]) / l[k];
    return GridFunction::from_interior(x);
}

enum class UniquenessVerdict { UniqueConsistent, Inconsistent, Degraded, AntiCoercive };

inline const char* to_string(UniquenessVerdict v) {
    switch (v) {
        case UniquenessVerdict::UniqueConsistent: return "unique-consistent";
        case UniquenessVerdict::Inconsistent: return "inconsistent";
        case UniquenessVerdict::Degraded: return "degraded";
        case UniquenessVerdict::AntiCoercive: return "anti-coercive";
    }
    return "?";
}

struct UniquenessReport {
    std::vector<SolveReport> runs;  ///< runs[0] starts from x0 = 0
    double max_pairwise_distance = 0.0;
    double radius = 0.0;  ///< 10 sqrt(T) * tolerance / smallest curvature estimate
    UniquenessVerdict verdict = UniquenessVerdict::Degraded;
};

inline UniquenessReport multistart(const ProblemInstance& inst, const SolverOptions& opts = {}) {
    opts.validate();
    std::mt19937_64 rng(opts.seed);
    std::vector<GridFunction> starts{GridFunction::zero(inst.T())};
    for (int s = 0; s < opts.starts; ++s) starts.push_back(sample_h_ball(inst.T(), opts.radius, rng));

    UniquenessReport rep;
    bool any_diverged = false;
    bool all_converged = true;
    double mu = std::numeric_limits<double>::infinity();
    for (const auto& x0 : starts) {
        rep.runs.push_back(minimize(inst, x0, opts));
        const auto& r = rep.runs.back();
        any_diverged = any_diverged || r.status == DescentStatus::Diverged;
        all_converged = all_converged && r.converged;
        if (r.curvature > 0.0) mu = std::min(mu, r.curvature);
        if (r.converged) {
            const auto [diag, off] = detail::hessian(inst, r.minimizer);
            bool finite = true;
            for (double e : diag) finite = finite && std::isfinite(e);
            if (finite) {
                const double e = detail::smallest_eigenvalue(diag, off);
                if (e > 0.0) mu = std::min(mu, e);
            }
        }
    }
    for (std::size_t i = 0; i < rep.runs.size(); ++i)
        for (std::size_t j = i + 1; j < rep.runs.size(); ++j)
            rep.max_pairwise_distance = std::max(rep.max_pairwise_distance,
                                                 h_distance(rep.runs[i].minimizer, rep.runs[j].minimizer));
    // sqrt(T) converts the max-norm gradient tolerance into a Euclidean one.
    rep.radius = 10.0 * std::sqrt(static_cast<double>(inst.T())) * opts.tolerance / (std::isfinite(mu) ? mu : 1.0);
    if (any_diverged) rep.verdict = UniquenessVerdict::AntiCoercive;
    else if (!all_converged) rep.verdict = UniquenessVerdict::Degraded;
    else if (rep.max_pairwise_distance <= rep.radius) rep.verdict = UniquenessVerdict::UniqueConsistent;
    else rep.verdict = UniquenessVerdict::Inconsistent;
    return rep;
}

/// Exact solution for p = 2 and f independent of x (canonical family with a = 0).
inline GridFunction tridiagonal_oracle(const ProblemInstance& inst) {
    for (double p : inst.p().values())
        if (p != 2.0) throw InputError("tridiagonal oracle requires p = 2 everywhere");
    const auto* c = inst.f().canonical();
    if (!c || !c->independent_of_x())
        throw InputError("tridiagonal oracle requires a canonical nonlinearity with a = 0");
    const int T = inst.T();
    std::vector<double> diag(static_cast<std::size_t>(T)), off(static_cast<std::size_t>(std::max(T - 1, 0))),
        rhs(static_cast<std::size_t>(T));
    for (int k = 1; k <= T; ++k) {
        diag[k - 1] = inst.h()[k - 1] + inst.h()[k];
        if (k < T) off[k - 1] = -inst.h()[k];
        rhs[k - 1] = inst.lambda() * inst.f().f(k, 0.0, inst.u()[k]);
    }
    if (!detail::solve_spd_tridiagonal(diag, off, rhs)) throw InputError("tridiagonal oracle: singular system");
    return GridFunction::from_interior(rhs);
}

enum class RayTrend { Upward, Downward, Indeterminate };

inline const char* to_string(RayTrend t) {
    switch (t) {
        case RayTrend::Upward: return "upward";
        case RayTrend::Downward: return "downward";
        case RayTrend::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct RaySample {
    double t;
    double norm;
    double energy;
    std::optional<double> bound;  ///< B(norm), where ||x|| >= 1 and ||x||_C >= 1
};

struct RayProbe {
    std::vector<RaySample> samples;
    bool dominates_bound = true;
    RayTrend trend = RayTrend::Indeterminate;
};

/**
 * Energy along t * direction on a log grid t in [t_max 1e-4, t_max]; the trend
 * is read off the last quarter of the samples.
 */
inline RayProbe coercivity_ray_probe(const ProblemInstance& inst, const GridFunction& direction, double t_max,
                                     const ConstantsBundle& bundle, int samples = 60) {
    const double dn = h_norm(direction);
    if (dn == 0.0) throw InputError("ray probe direction must be nonzero");
    if (!(t_max > 0.0)) throw InputError("ray probe needs t_max > 0");
    std::optional<BoundCurve> B;
    if (auto g = inst.f().growth()) B.emplace(inst, *g, bundle);
    const double ds = sup_norm(direction);
    RayProbe out;
    const double lo = std::log(t_max * 1e-4);
    const double hi = std::log(t_max);
    for (int i = 0; i < samples; ++i) {
        const double t = std::exp(samples == 1 ? hi : lo + (hi - lo) * i / (samples - 1));
        RaySample s{t, t * dn, energy(inst, t * direction).total, std::nullopt};
        if (B && s.norm >= 1.0 && t * ds >= 1.0) {
            s.bound = (*B)(s.norm);
            if (s.energy < *s.bound - roundoff_window(*s.bound)) out.dominates_bound = false;
        }
        out.samples.push_back(s);
    }
    const std::size_t tail = std::max<std::size_t>(2, out.samples.size() / 4);
    bool up = true, down = true;
    for (std::size_t i = out.samples.size() - tail + 1; i < out.samples.size(); ++i) {
        up = up && out.samples[i].energy > out.samples[i - 1].energy;
        down = down && out.samples[i].energy < out.samples[i - 1].energy;
    }
    out.trend = up ? RayTrend::Upward : down ? RayTrend::Downward : RayTrend::Indeterminate;
    return out;
}

}  // namespace plap
