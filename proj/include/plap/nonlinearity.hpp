#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "plap/expression.hpp"
#include "plap/grid.hpp"

namespace plap {

/// Adaptive quadrature did not reach its tolerance within the depth budget.
class AccuracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::vector<double> broadcast_nodes(int T, std::span<const double> v, const char* name) {
    if (T < 1) throw InputError("T must be a positive integer");
    if (v.size() == 1) return std::vector<double>(static_cast<std::size_t>(T), v[0]);
    if (v.size() != static_cast<std::size_t>(T))
        throw InputError(std::string(name) + " must have length T = " + std::to_string(T) + ", got " +
                         std::to_string(v.size()));
    return {v.begin(), v.end()};
}

}  // namespace detail

/**
 * Growth bound |f(k,x,u)| <= a(k)|x|^q(k) + b(k) on nodes k = 1..T.
 *
 * q(k) >= 1 is accepted; q = 1 is the linear-growth case the borderline
 * regime p- = q+ + 1 needs when p- = 2.
 */
class GrowthData {
public:
    GrowthData(int T, std::span<const double> a, std::span<const double> b, std::span<const double> q)
        : a_(detail::broadcast_nodes(T, a, "a")), b_(detail::broadcast_nodes(T, b, "b")),
          q_(detail::broadcast_nodes(T, q, "q")) {
        for (std::size_t i = 0; i < a_.size(); ++i) {
            if (!(a_[i] >= 0.0)) throw InputError("a must be nonnegative (a(" + std::to_string(i + 1) + "))");
            if (!(q_[i] >= 1.0)) throw InputError("q must be at least 1 (q(" + std::to_string(i + 1) + "))");
            if (!std::isfinite(b_[i])) throw InputError("b must be finite (b(" + std::to_string(i + 1) + "))");
        }
    }
    static GrowthData constant(int T, double a, double b, double q) {
        return GrowthData(T, std::span<const double>(&a, 1), std::span<const double>(&b, 1),
                          std::span<const double>(&q, 1));
    }

    int T() const { return static_cast<int>(a_.size()); }
    double a(int k) const { return a_[static_cast<std::size_t>(k - 1)]; }
    double b(int k) const { return b_[static_cast<std::size_t>(k - 1)]; }
    double q(int k) const { return q_[static_cast<std::size_t>(k - 1)]; }
    std::span<const double> a_values() const { return a_; }
    std::span<const double> b_values() const { return b_; }
    std::span<const double> q_values() const { return q_; }

    double a_plus() const { return *std::max_element(a_.begin(), a_.end()); }
    double b_plus() const {
        double m = 0.0;
        for (double v : b_) m = std::max(m, std::abs(v));
        return m;
    }
    double q_minus() const { return *std::min_element(q_.begin(), q_.end()); }
    double q_plus() const { return *std::max_element(q_.begin(), q_.end()); }

private:
    std::vector<double> a_, b_, q_;
};

/// f(k,x,u) = -a(k) powq(x, q(k)) + b(k) (1 + rho sin u), with closed-form primitive.
class CanonicalFamily {
public:
    CanonicalFamily(GrowthData coefficients, double rho) : g_(std::move(coefficients)), rho_(rho) {
        if (!(rho >= 0.0 && rho < 1.0)) throw InputError("rho must lie in [0, 1)");
    }

    double f(int k, double x, double u) const {
        return -g_.a(k) * powq(x, g_.q(k)) + g_.b(k) * (1.0 + rho_ * std::sin(u));
    }
    double F(int k, double x, double u) const {
        const double q = g_.q(k);
        return -g_.a(k) * std::pow(std::abs(x), q + 1.0) / (q + 1.0) + g_.b(k) * (1.0 + rho_ * std::sin(u)) * x;
    }

    const GrowthData& coefficients() const { return g_; }
    double rho() const { return rho_; }
    int T() const { return g_.T(); }

    /// (a, |b|(1+rho), q): the bound this family satisfies by construction.
    GrowthData declared_growth() const {
        std::vector<double> b(g_.b_values().begin(), g_.b_values().end());
        for (double& v : b) v = std::abs(v) * (1.0 + rho_);
        return GrowthData(T(), g_.a_values(), b, g_.q_values());
    }

    bool independent_of_x() const { return g_.a_plus() == 0.0; }

private:
    GrowthData g_;
    double rho_;
};

/**
 * Adaptive Simpson integration of g over [lo, hi].
 *
 * Accepts a panel when the Richardson estimate is within the local absolute
 * tolerance, or when the panel difference is already at roundoff level.
 * Throws AccuracyError when max_depth is exhausted first.
 */
template <class Fn>
double adaptive_simpson(Fn&& g, double lo, double hi, double tol = 1e-10, int max_depth = 40) {
    if (lo == hi) return 0.0;
    struct Rec {
        Fn& g;
        int max_depth;
        static double panel(double a, double fa, double fm, double b, double fb) {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double run(double a, double fa, double b, double fb, double m, double fm, double whole, double eps,
                   int depth) const {
            const double lm = 0.5 * (a + m);
            const double rm = 0.5 * (m + b);
            const double flm = g(lm);
            const double frm = g(rm);
            const double left = panel(a, fa, flm, m, fm);
            const double right = panel(m, fm, frm, b, fb);
            const double diff = left + right - whole;
            const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() *
                                    (std::abs(left) + std::abs(right));
            if (std::abs(diff) <= 15.0 * eps || std::abs(diff) <= roundoff) return left + right + diff / 15.0;
            if (depth >= max_depth)
                throw AccuracyError("adaptive Simpson: tolerance not met on [" + std::to_string(a) + ", " +
                                    std::to_string(b) + "]");
            return run(a, fa, m, fm, lm, flm, left, 0.5 * eps, depth + 1) +
                   run(m, fm, b, fb, rm, frm, right, 0.5 * eps, depth + 1);
        }
    };
    const double m = 0.5 * (lo + hi);
    const double flo = g(lo);
    const double fhi = g(hi);
    const double fm = g(m);
    Rec rec{g, max_depth};
    return rec.run(lo, flo, hi, fhi, m, fm, Rec::panel(lo, flo, fm, hi, fhi), tol, 0);
}

/// User-defined nonlinearity from expression text.
class ExpressionNonlinearity {
public:
    static constexpr double quadrature_tolerance = 1e-10;
    static constexpr int quadrature_depth = 40;

    explicit ExpressionNonlinearity(std::string f_source, std::optional<std::string> F_source = std::nullopt,
                                    std::optional<GrowthData> growth = std::nullopt)
        : f_(f_source), growth_(std::move(growth)) {
        if (F_source) F_.emplace(*F_source);
    }

    double f(int k, double x, double u) const { return f_(k, x, u); }

    /// A user-supplied F is re-anchored so that F(k, 0, u) = 0.
    double F(int k, double x, double u) const {
        if (F_) return (*F_)(k, x, u) - (*F_)(k, 0.0, u);
        if (x == 0.0) return 0.0;
        auto g = [&](double t) { return f_(k, t, u); };
        return adaptive_simpson(g, 0.0, x, quadrature_tolerance, quadrature_depth);
    }

    const expr::Expression& f_expression() const { return f_; }
    const std::optional<expr::Expression>& F_expression() const { return F_; }
    const std::optional<GrowthData>& growth() const { return growth_; }

private:
    expr::Expression f_;
    std::optional<expr::Expression> F_;
    std::optional<GrowthData> growth_;
};

/// Closed set of nonlinearity kinds, held by value.
class Nonlinearity {
public:
    Nonlinearity(CanonicalFamily c) : impl_(std::move(c)) {}
    Nonlinearity(ExpressionNonlinearity e) : impl_(std::move(e)) {}

    double f(int k, double x, double u) const {
        return std::visit([&](const auto& n) { return n.f(k, x, u); }, impl_);
    }
    double F(int k, double x, double u) const {
        return std::visit([&](const auto& n) { return n.F(k, x, u); }, impl_);
    }

    /// Declared H1 data, if any.
    std::optional<GrowthData> growth() const {
        if (auto c = std::get_if<CanonicalFamily>(&impl_)) return c->declared_growth();
        return std::get<ExpressionNonlinearity>(impl_).growth();
    }

    const CanonicalFamily* canonical() const { return std::get_if<CanonicalFamily>(&impl_); }
    const ExpressionNonlinearity* expression() const { return std::get_if<ExpressionNonlinearity>(&impl_); }

private:
    std::variant<CanonicalFamily, ExpressionNonlinearity> impl_;
};

inline double eval_f(const Nonlinearity& n, int k, double x, double u) { return n.f(k, x, u); }
inline double eval_F(const Nonlinearity& n, int k, double x, double u) { return n.F(k, x, u); }

/// Dense sampling grid for the hypothesis checkers.
struct SamplingPlan {
    int T = 1;
    double x_radius = 10.0;
    int x_count = 201;
    double u_min = -5.0;
    double u_max = 5.0;
    int u_count = 11;

    static std::vector<double> linspace(double lo, double hi, int n) {
        if (n < 1) throw InputError("sampling plan needs at least one point per axis");
        if (n == 1) return {lo};
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
        return v;
    }
    std::vector<double> xs() const { return linspace(-x_radius, x_radius, x_count); }
    std::vector<double> us() const { return linspace(u_min, u_max, u_count); }
};

struct H1Violation {
    int k;
    double x, u, lhs, rhs;
};

struct H2Violation {
    int k;
    double u, x1, x2, f1, f2;
};

struct H3Result {
    bool holds = false;
    std::optional<int> witness_k;
    std::optional<double> failing_u;
};

inline std::vector<H1Violation> check_H1(const Nonlinearity& n, const GrowthData& g, const SamplingPlan& plan) {
    if (g.T() != plan.T) throw InputError("growth data and sampling plan disagree on T");
    std::vector<H1Violation> out;
    const auto xs = plan.xs();
    const auto us = plan.us();
    for (int k = 1; k <= plan.T; ++k)
        for (double u : us)
            for (double x : xs) {
                const double lhs = std::abs(n.f(k, x, u));
                const double rhs = g.a(k) * std::pow(std::abs(x), g.q(k)) + g.b(k);
                if (lhs > rhs + 1e-12 * (1.0 + std::abs(rhs))) out.push_back({k, x, u, lhs, rhs});
            }
    return out;
}

/// Nonincrease of x -> f(k, x, u) on adjacent sorted samples, with 1e-12 slack.
inline std::vector<H2Violation> check_H2(const Nonlinearity& n, const SamplingPlan& plan) {
    std::vector<H2Violation> out;
    auto xs = plan.xs();
    std::sort(xs.begin(), xs.end());
    const auto us = plan.us();
    for (int k = 1; k <= plan.T; ++k)
        for (double u : us) {
            double prev = n.f(k, xs[0], u);
            for (std::size_t i = 1; i < xs.size(); ++i) {
                const double cur = n.f(k, xs[i], u);
                if (cur > prev + 1e-12 * (1.0 + std::abs(prev))) out.push_back({k, u, xs[i - 1], xs[i], prev, cur});
                prev = cur;
            }
        }
    return out;
}

/// Looks for a node k with f(k, 0, u) != 0 for every sampled u.
inline H3Result check_H3(const Nonlinearity& n, int T, std::span<const double> u_samples) {
    if (u_samples.empty()) throw InputError("check_H3 needs at least one u sample");
    H3Result r;
    std::optional<double> first_fail;
    for (int k = 1; k <= T; ++k) {
        bool all_nonzero = true;
        for (double u : u_samples)
            if (n.f(k, 0.0, u) == 0.0) {
                all_nonzero = false;
                if (!first_fail) first_fail = u;
                break;
            }
        if (all_nonzero) {
            r.holds = true;
            r.witness_k = k;
            return r;
        }
    }
    // Prefer a u at which every node vanishes: there x = 0 solves the problem.
    for (double u : u_samples) {
        bool all_zero = true;
        for (int k = 1; k <= T && all_zero; ++k) all_zero = n.f(k, 0.0, u) == 0.0;
        if (all_zero) {
            r.failing_u = u;
            return r;
        }
    }
    r.failing_u = first_fail;
    return r;
}

}  // namespace plap
