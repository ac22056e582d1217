#pragma once

#include <cmath>
#include <optional>

#include "plap/constants.hpp"
#include "plap/energy.hpp"

namespace plap {

/**
 * Lower bound for J_u(x) in terms of r = ||x||, valid for ||x|| >= 1 with
 * ||x||_C >= 1:
 *
 *   B(r) = (C1 h- / p+) r^{p-} - lambda (a+ c_{q++1} / (q-+1)) (T+1) r^{q++1}
 *          - lambda b+ c_1 (T+1) r - C2
 */
class BoundCurve {
public:
    BoundCurve(const ProblemInstance& inst, const GrowthData& g, const ConstantsBundle& c) {
        if (c.T != inst.T() || g.T() != inst.T()) throw InputError("bound curve: constants computed for a different T");
        const double n = inst.T() + 1.0;
        p_minus_ = inst.p().min();
        s_ = g.q_plus() + 1.0;
        alpha_ = c.C1 * inst.h().min() / inst.p().max();
        beta_ = inst.lambda() * g.a_plus() * c.c(s_) / (g.q_minus() + 1.0) * n;
        gamma_ = inst.lambda() * g.b_plus() * c.c(1.0) * n;
        C2_ = c.C2;
    }

    double operator()(double r) const {
        return alpha_ * std::pow(r, p_minus_) - beta_ * std::pow(r, s_) - gamma_ * r - C2_;
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double gamma() const { return gamma_; }
    double C2() const { return C2_; }
    double leading_exponent() const { return p_minus_; }
    double growth_exponent() const { return s_; }

    /// Leading-coefficient sign test for B(r) -> +inf.
    bool tends_to_infinity() const {
        if (beta_ == 0.0 || s_ < p_minus_) return alpha_ > 0.0;
        if (s_ == p_minus_) return alpha_ > beta_;
        return false;
    }

    /// Largest root of B on (0, inf), when B(r) / r^{p-} is monotone and eventually positive.
    std::optional<double> largest_root() const {
        if (!tends_to_infinity()) return std::nullopt;
        auto g = [this](double r) { return (*this)(r) / std::pow(r, p_minus_); };
        double lo = 1.0;
        double hi = 1.0;
        if (g(hi) > 0.0) {
            lo = 0.0;
        } else {
            while (g(hi) <= 0.0) {
                lo = hi;
                hi *= 2.0;
                if (hi > 1e300) return std::nullopt;
            }
        }
        if (lo == 0.0) {
            lo = hi;
            while (g(lo) > 0.0 && lo > 1e-300) lo *= 0.5;
        }
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (g(mid) > 0.0 ? hi : lo) = mid;
        }
        return hi;
    }

private:
    double p_minus_ = 2.0;
    double s_ = 2.0;
    double alpha_ = 0.0;
    double beta_ = 0.0;
    double gamma_ = 0.0;
    double C2_ = 0.0;
};

}  // namespace plap
