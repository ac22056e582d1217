#pragma once

// Experiments around existence, uniqueness and continuous dependence:
// parameter sequences u_n -> u_bar, the coercivity bound, the sign of the
// minimum, and lambda sweeps across the regimes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plap/bound.hpp"
#include "plap/regime.hpp"
#include "plap/solver.hpp"

namespace plap {

/// u_n = u_bar + delta_n v, n = 1..N, with u_bar taken from the base instance.
struct DependencePlan {
    ProblemInstance base;
    ParameterFunction direction;
    std::vector<double> deltas;
    /// Final distance must fall below this fraction of max(1, ||x_bar||).
    double distance_tolerance = 0.05;

    void validate() const {
        if (deltas.size() < 3) throw InputError("dependence plan needs N >= 3");
        if (direction.T() != base.T()) throw InputError("dependence direction has the wrong T");
        for (std::size_t i = 0; i < deltas.size(); ++i) {
            if (!std::isfinite(deltas[i])) throw InputError("dependence schedule must be finite");
            if (i > 0 && std::abs(deltas[i]) > std::abs(deltas[i - 1]))
                throw InputError("dependence schedule |delta_n| must be nonincreasing");
        }
        if (!(distance_tolerance > 0.0)) throw InputError("distance tolerance must be positive");
    }
};

inline std::vector<double> harmonic_schedule(int N) {
    std::vector<double> d(static_cast<std::size_t>(std::max(N, 0)));
    for (int n = 1; n <= N; ++n) d[n - 1] = 1.0 / n;
    return d;
}

struct DependenceRecord {
    int n;
    double delta;
    double norm_xn;
    double dist_to_limit;
    bool converged;
};

enum class DependenceVerdict { Convergent, NotConvergent, Incomplete };

inline const char* to_string(DependenceVerdict v) {
    switch (v) {
        case DependenceVerdict::Convergent: return "convergent";
        case DependenceVerdict::NotConvergent: return "not-convergent";
        case DependenceVerdict::Incomplete: return "incomplete";
    }
    return "?";
}

struct DependenceReport {
    std::vector<DependenceRecord> records;
    GridFunction limit;
    bool limit_converged = false;
    double limit_residual = 0.0;
    double gamma = 0.0;  ///< max_n ||x_{u_n}||
    std::optional<double> a_priori_radius;
    DependenceVerdict verdict = DependenceVerdict::Incomplete;
    std::optional<int> failing_n;
    /// Distances over converged members only tend to their minimum at the end.
    bool subsequence_convergent = false;
};

/**
 * Largest ||x|| compatible with J_u(x) <= 0: the largest root of B, or the
 * regions the bound does not cover (||x|| < 1, or ||x||_C < 1 which allows
 * ||x|| up to 2 sqrt(T+1)).
 */
inline std::optional<double> a_priori_radius(const ProblemInstance& inst, const ConstantsBundle& c) {
    auto g = inst.f().growth();
    if (!g) return std::nullopt;
    auto root = BoundCurve(inst, *g, c).largest_root();
    if (!root) return std::nullopt;
    return std::max({*root, 1.0, 2.0 * std::sqrt(inst.T() + 1.0)});
}

inline DependenceReport run_dependence(const DependencePlan& plan, const SolverOptions& opts = {}) {
    plan.validate();
    DependenceReport rep;
    const auto zero = GridFunction::zero(plan.base.T());
    const SolveReport lim = minimize(plan.base, zero, opts);
    rep.limit = lim.minimizer;
    rep.limit_converged = lim.converged;
    rep.limit_residual = max_abs(strong_residual(plan.base, lim.minimizer));

    for (std::size_t i = 0; i < plan.deltas.size(); ++i) {
        const int n = static_cast<int>(i) + 1;
        const auto inst = plan.base.with_u(plan.base.u().shifted(plan.direction, plan.deltas[i]));
        const SolveReport r = minimize(inst, zero, opts);
        rep.records.push_back({n, plan.deltas[i], h_norm(r.minimizer), h_distance(r.minimizer, rep.limit), r.converged});
        if (!r.converged && !rep.failing_n) rep.failing_n = n;
        rep.gamma = std::max(rep.gamma, rep.records.back().norm_xn);
    }
    if (auto g = plan.base.f().growth())
        rep.a_priori_radius = a_priori_radius(plan.base, make_constants(plan.base.p(), plan.base.h(), g));

    const double tol = plan.distance_tolerance * std::max(1.0, h_norm(rep.limit));
    auto tail_ok = [&](bool converged_only) {
        double best = std::numeric_limits<double>::infinity();
        const DependenceRecord* last = nullptr;
        for (const auto& r : rep.records) {
            if (converged_only && !r.converged) continue;
            best = std::min(best, r.dist_to_limit);
            last = &r;
        }
        return last && last->dist_to_limit <= best && last->dist_to_limit <= tol;
    };
    rep.subsequence_convergent = lim.converged && tail_ok(true);
    if (!lim.converged || rep.failing_n) {
        rep.verdict = DependenceVerdict::Incomplete;
        if (!lim.converged && !rep.failing_n) rep.failing_n = 0;
    } else {
        rep.verdict = tail_ok(false) && rep.limit_residual <= opts.tolerance && std::isfinite(rep.gamma)
                          ? DependenceVerdict::Convergent
                          : DependenceVerdict::NotConvergent;
    }
    return rep;
}

struct BoundViolation {
    GridFunction x;
    double norm;
    double energy;
    double bound;
};

/**
 * Checks J_u(x) >= B(||x||) on random x with ||x|| >= 1 and ||x||_C >= 1:
 * Gaussian interior values rescaled to norms log-uniform in [1, 1e3].
 */
inline std::vector<BoundViolation> probe_energy_bound(const ProblemInstance& inst, const ConstantsBundle& bundle,
                                                      int samples, std::uint64_t seed = 7) {
    auto g = inst.f().growth();
    if (!g) throw InputError("energy bound probe needs declared growth data");
    const BoundCurve B(inst, *g, bundle);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> logr(0.0, std::log(1e3));
    std::vector<BoundViolation> out;
    std::vector<double> y(static_cast<std::size_t>(inst.T()));
    for (int s = 0; s < samples; ++s) {
        GridFunction x;
        for (int attempt = 0;; ++attempt) {
            for (double& v : y) v = gauss(rng);
            x = GridFunction::from_interior(y);
            const double n = h_norm(x);
            if (n == 0.0) continue;
            const double r = std::exp(logr(rng));
            x *= r / n;
            if (sup_norm(x) >= 1.0) break;
            if (attempt > 1000) throw InputError("energy bound probe: cannot draw x with sup norm >= 1");
        }
        const double r = h_norm(x);
        const double e = energy(inst, x).total;
        const double b = B(r);
        if (e < b - roundoff_window(b)) out.push_back({x, r, e, b});
    }
    return out;
}

/// J_u at a converged minimiser is at most J_u(0) = 0.
inline bool minimum_nonpositivity_check(const SolveReport& report) {
    if (!report.converged) throw InputError("minimum nonpositivity check needs a converged report");
    return report.final_energy <= 1e-12;
}

struct SweepRow {
    double lambda;
    std::optional<RegimeClassification> regime;
    double lambda_star = std::numeric_limits<double>::infinity();
    bool converged = false;
    bool unique_consistent = false;
    DescentStatus status = DescentStatus::MaxIterations;
    double final_energy = std::numeric_limits<double>::quiet_NaN();
    double residual = std::numeric_limits<double>::quiet_NaN();
    std::string error;
};

using InstanceGenerator = std::function<ProblemInstance(double lambda)>;

/// One row per lambda, in ascending lambda order.
inline std::vector<SweepRow> regime_sweep(const InstanceGenerator& make, std::vector<double> lambdas,
                                          const SolverOptions& opts = {}) {
    if (lambdas.empty()) throw InputError("sweep needs at least one lambda");
    std::sort(lambdas.begin(), lambdas.end());
    std::vector<SweepRow> rows;
    for (double lambda : lambdas) {
        SweepRow row;
        row.lambda = lambda;
        try {
            const ProblemInstance inst = make(lambda);
            if (auto g = inst.f().growth()) {
                const auto c = make_constants(inst.p(), inst.h(), g);
                row.regime = classify_regime(inst.p(), *g, lambda, c);
                row.lambda_star = c.lambda_star;
            }
            const UniquenessReport u = multistart(inst, opts);
            const SolveReport& base = u.runs.front();
            row.converged = base.converged;
            row.status = base.status;
            row.unique_consistent = u.verdict == UniquenessVerdict::UniqueConsistent;
            row.final_energy = base.final_energy;
            row.residual = base.gradient_max;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace plap
