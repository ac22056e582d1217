#pragma once

// Explicit values for the constants in the discrete embedding and
// coercivity inequalities on H = { x : x(0) = x(T+1) = 0 }.
//
// Embedding, m >= 1:   sum_{k=1}^T |x(k)|^m <= c_m sum_{k=1}^{T+1} |Dx(k-1)|^m.
//   x(k) = sum_{j<=k} Dx(j-1), so Hoelder gives |x(k)|^m <= k^{m-1} sum_j |Dx(j-1)|^m;
//   summing over k yields c_m = sum_{k=1}^T k^{m-1}.
//
// Coercivity, ||x|| >= 1:   sum |Dx(k-1)|^{p(k-1)} >= C1 ||x||^{p-} - C2.
//   Terms with |Dx| >= 1 dominate |Dx|^{p-}; the others lose at most 1 each,
//   hence the deficit C2 = T+1. For p- >= 2 the l^{p-} / l^2 comparison on
//   T+1 entries gives C1 = (T+1)^{(2-p-)/2}; for p- < 2 the l^{p-} norm
//   dominates the l^2 norm and C1 = 1.
//
// Norm relation, m >= 2:
//   (T+1)^{(2-m)/(2m)} ||x|| <= (sum |Dx|^m)^{1/m} <= (T+1)^{1/m} ||x||.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "plap/descent.hpp"
#include "plap/grid.hpp"
#include "plap/nonlinearity.hpp"

namespace plap {

inline double embedding_constant(double m, int T) {
    if (!(m >= 1.0)) throw InputError("embedding constant needs m >= 1");
    if (T < 1) throw InputError("T must be a positive integer");
    double c = 0.0;
    for (int k = 1; k <= T; ++k) c += std::pow(static_cast<double>(k), m - 1.0);
    return c;
}

struct SharpConstant {
    double value = 0.0;
    bool converged = false;  ///< false: value is only a lower bound (best ratio found)
    int starts = 0;
};

struct SharpOptions {
    int starts = 8;
    std::uint64_t seed = 20240501;
    double tolerance = 1e-11;
    long max_iterations = 20000;
};

/// Ratio sum |x(k)|^m / sum |Dx(k-1)|^m for nonzero x.
inline double embedding_ratio(double m, const GridFunction& x) {
    double num = 0.0;
    for (double v : x.interior()) num += std::pow(std::abs(v), m);
    double den = 0.0;
    for (double d : forward_difference(x)) den += std::pow(std::abs(d), m);
    return num / den;
}

/**
 * Best constant in the embedding inequality, by multistart projected ascent
 * on log(sum |x|^m) - log(sum |Dx|^m) with iterates rescaled to
 * sum |Dx|^m = 1. The first start is the positive bump sin(pi k / (T+1)).
 * For m = 1 the ratio is not smooth and the value is known: |x(k)| <= sum |Dx| / 2
 * with equality for the plateau x = 1, so c_1 = T / 2.
 */
inline SharpConstant sharp_embedding_constant(double m, int T, const SharpOptions& opts = {}) {
    if (!(m >= 1.0)) throw InputError("embedding constant needs m >= 1");
    if (T < 1) throw InputError("T must be a positive integer");
    if (T > 200) throw InputError("sharp embedding constant is limited to T <= 200");
    if (m == 1.0) return {T / 2.0, true, 0};

    auto full = [T](const std::vector<double>& y) {
        std::vector<double> x(static_cast<std::size_t>(T) + 2, 0.0);
        std::copy(y.begin(), y.end(), x.begin() + 1);
        return x;
    };
    auto sums = [&](const std::vector<double>& x, double& num, double& den) {
        num = 0.0;
        den = 0.0;
        for (int k = 1; k <= T; ++k) num += std::pow(std::abs(x[k]), m);
        for (int k = 1; k <= T + 1; ++k) den += std::pow(std::abs(x[k] - x[k - 1]), m);
    };
    Objective objective = [&](const std::vector<double>& y) {
        double num, den;
        sums(full(y), num, den);
        if (num == 0.0 || den == 0.0) return std::numeric_limits<double>::infinity();
        return std::log(den) - std::log(num);
    };
    Gradient gradient = [&](const std::vector<double>& y) {
        const auto x = full(y);
        double num, den;
        sums(x, num, den);
        std::vector<double> g(static_cast<std::size_t>(T));
        for (int k = 1; k <= T; ++k) {
            const double dden = m * (powq(x[k] - x[k - 1], m - 1.0) - powq(x[k + 1] - x[k], m - 1.0));
            const double dnum = m * powq(x[k], m - 1.0);
            g[k - 1] = dden / den - dnum / num;
        }
        return g;
    };
    Projection normalise = [&](std::vector<double>& y) {
        double num, den;
        sums(full(y), num, den);
        if (den > 0.0) {
            const double s = std::pow(den, -1.0 / m);
            for (double& v : y) v *= s;
        }
    };

    DescentOptions dopts;
    dopts.tolerance = opts.tolerance;
    dopts.max_iterations = opts.max_iterations;
    dopts.divergence_floor = -std::numeric_limits<double>::infinity();
    dopts.norm_ceiling = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    SharpConstant best;
    best.value = -1.0;
    for (int s = 0; s < std::max(1, opts.starts); ++s) {
        std::vector<double> y(static_cast<std::size_t>(T));
        for (int k = 1; k <= T; ++k) {
            if (s == 0) y[k - 1] = std::sin(M_PI * k / (T + 1));
            else if (s % 2 == 1) y[k - 1] = unif(rng);
            else y[k - 1] = gauss(rng);
        }
        const DescentResult r = descend(objective, gradient, y, dopts, normalise);
        const double ratio = std::exp(-r.value);
        if (ratio > best.value) {
            best.value = ratio;
            best.converged = r.status == DescentStatus::Converged;
        }
        ++best.starts;
    }
    return best;
}

struct CoercivityConstants {
    double C1;
    double C2;
};

inline CoercivityConstants coercivity_constants(const ExponentField& p) {
    const double n = p.T() + 1.0;
    const double pm = p.min();
    if (pm >= 2.0) return {std::pow(n, (2.0 - pm) / 2.0), n};
    return {1.0, n};
}

struct NormRelation {
    double lhs, mid, rhs;
};

inline NormRelation norm_relation_check(double m, const GridFunction& x) {
    if (!(m >= 2.0)) throw InputError("norm relation needs m >= 2");
    const double n = x.T() + 1.0;
    const double norm = h_norm(x);
    double s = 0.0;
    for (double d : forward_difference(x)) s += std::pow(std::abs(d), m);
    return {std::pow(n, (2.0 - m) / (2.0 * m)) * norm, std::pow(s, 1.0 / m), std::pow(n, 1.0 / m) * norm};
}

struct EmbeddingEntry {
    double m;
    double provable;
    std::optional<SharpConstant> sharp;
};

/**
 * Every constant the existence argument and its threshold use, for one
 * instance size. lambda_star is +inf when a+ = 0.
 */
struct ConstantsBundle {
    int T = 0;
    std::vector<EmbeddingEntry> embedding;
    double C1 = 0.0;
    double C2 = 0.0;
    double lambda_star = std::numeric_limits<double>::infinity();
    double dual_lambda_star = std::numeric_limits<double>::infinity();
    bool sharpened_threshold = false;
    std::vector<std::pair<std::string, std::string>> provenance;

    const EmbeddingEntry* find(double m) const {
        for (const auto& e : embedding)
            if (e.m == m) return &e;
        return nullptr;
    }
    double c(double m) const {
        if (const auto* e = find(m)) return e->provable;
        return embedding_constant(m, T);
    }
};

struct LambdaThresholds {
    double primal;
    double dual;
};

/**
 * Primal threshold C1 h- (q-+1) / (p+ a+ c_{q++1}) and the dual one
 * (T+1)^{(1-p-)/(2p-)} h- (q-+1) / (p+ a+ c_{q++1}); both +inf when a+ = 0.
 * Uses the provable c_{q++1} unless use_sharp and a sharpened value is stored.
 */
inline LambdaThresholds lambda_threshold(const ExponentField& p, const WeightField& h, const GrowthData& g,
                                         const ConstantsBundle& bundle, bool use_sharp = false) {
    if (bundle.T != p.T() || h.T() != p.T() || g.T() != p.T())
        throw InputError("lambda threshold: constants computed for a different T");
    const double a_plus = g.a_plus();
    if (a_plus == 0.0)
        return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double m = g.q_plus() + 1.0;
    double c = bundle.c(m);
    if (use_sharp)
        if (const auto* e = bundle.find(m); e && e->sharp) c = e->sharp->value;
    const double pm = p.min();
    const double common = h.min() * (g.q_minus() + 1.0) / (p.max() * a_plus * c);
    return {bundle.C1 * common, std::pow(p.T() + 1.0, (1.0 - pm) / (2.0 * pm)) * common};
}

struct BundleOptions {
    std::vector<double> extra_m;
    bool sharpen = false;        ///< also compute sharp constants for every stored m
    bool sharp_threshold = false;  ///< use the sharp c_{q++1} in lambda_star (needs sharpen)
    SharpOptions sharp;
};

inline ConstantsBundle make_constants(const ExponentField& p, const WeightField& h,
                                      const std::optional<GrowthData>& growth, const BundleOptions& opts = {}) {
    ConstantsBundle b;
    b.T = p.T();
    std::vector<double> ms{1.0};
    if (growth) ms.push_back(growth->q_plus() + 1.0);
    for (double m : opts.extra_m) ms.push_back(m);
    for (double m : ms) {
        if (b.find(m)) continue;
        EmbeddingEntry e{m, embedding_constant(m, b.T), std::nullopt};
        if (opts.sharpen && b.T <= 200) e.sharp = sharp_embedding_constant(m, b.T, opts.sharp);
        b.embedding.push_back(e);
    }
    const auto cc = coercivity_constants(p);
    b.C1 = cc.C1;
    b.C2 = cc.C2;
    b.provenance.emplace_back("c_m", "sum_{k=1}^T k^(m-1): telescoping plus Hoelder, valid for m >= 1");
    b.provenance.emplace_back("C1", p.min() >= 2.0 ? "(T+1)^((2-p-)/2): l^p- vs l^2 on T+1 differences"
                                                   : "1: l^p- norm dominates l^2 norm for p- < 2");
    b.provenance.emplace_back("C2", "T+1: at most 1 lost per difference with |Dx| < 1");
    if (growth) {
        b.sharpened_threshold = opts.sharp_threshold && opts.sharpen;
        const auto t = lambda_threshold(p, h, *growth, b, b.sharpened_threshold);
        b.lambda_star = t.primal;
        b.dual_lambda_star = t.dual;
        b.provenance.emplace_back("lambda_star", b.sharpened_threshold ? "C1 h- (q-+1) / (p+ a+ c_{q++1}), sharp c"
                                                                       : "C1 h- (q-+1) / (p+ a+ c_{q++1}), provable c");
        b.provenance.emplace_back("dual_lambda_star", "(T+1)^((1-p-)/(2p-)) h- (q-+1) / (p+ a+ c_{q++1})");
    }
    return b;
}

}  // namespace plap
