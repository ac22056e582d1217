#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "plap/grid.hpp"
#include "plap/nonlinearity.hpp"

namespace plap {

/**
 * Full data of the Dirichlet problem
 *
 *   -D( h(k-1) |Dx(k-1)|^{p(k-1)-2} Dx(k-1) ) = lambda f(k, x(k), u(k)),  k = 1..T,
 *   x(0) = x(T+1) = 0.
 */
class ProblemInstance {
public:
    ProblemInstance(ExponentField p, WeightField h, double lambda, Nonlinearity f, ParameterFunction u)
        : p_(std::move(p)), h_(std::move(h)), lambda_(lambda), f_(std::move(f)), u_(std::move(u)) {
        const int T = p_.T();
        if (h_.T() != T) throw InputError("h has T = " + std::to_string(h_.T()) + ", expected " + std::to_string(T));
        if (u_.T() != T) throw InputError("u has T = " + std::to_string(u_.T()) + ", expected " + std::to_string(T));
        if (!(lambda_ > 0.0)) throw InputError("lambda must be positive");
        if (auto c = f_.canonical(); c && c->T() != T)
            throw InputError("canonical coefficients have T = " + std::to_string(c->T()) + ", expected " +
                             std::to_string(T));
        if (auto g = f_.growth(); g && g->T() != T) throw InputError("growth data has the wrong T");
    }

    int T() const { return p_.T(); }
    const ExponentField& p() const { return p_; }
    const WeightField& h() const { return h_; }
    double lambda() const { return lambda_; }
    const Nonlinearity& f() const { return f_; }
    const ParameterFunction& u() const { return u_; }

    ProblemInstance with_u(ParameterFunction u) const { return {p_, h_, lambda_, f_, std::move(u)}; }
    ProblemInstance with_lambda(double lambda) const { return {p_, h_, lambda, f_, u_}; }
    ProblemInstance with_h(WeightField h) const { return {p_, std::move(h), lambda_, f_, u_}; }

private:
    ExponentField p_;
    WeightField h_;
    double lambda_;
    Nonlinearity f_;
    ParameterFunction u_;
};

struct EnergyBreakdown {
    double diffusion = 0.0;  ///< sum_{k=1}^{T+1} h(k-1)/p(k-1) |Dx(k-1)|^{p(k-1)}
    double potential = 0.0;  ///< sum_{k=1}^{T} F(k, x(k), u(k))
    double total = 0.0;      ///< diffusion - lambda * potential
};

namespace detail {

inline void check_dims(const ProblemInstance& inst, const GridFunction& x) {
    if (x.T() != inst.T())
        throw InputError("grid function has T = " + std::to_string(x.T()) + ", instance has T = " +
                         std::to_string(inst.T()));
}

}  // namespace detail

inline double diffusion_energy(const ProblemInstance& inst, const GridFunction& x) {
    detail::check_dims(inst, x);
    double s = 0.0;
    for (int k = 1; k <= inst.T() + 1; ++k) {
        const double p = inst.p()[k - 1];
        s += inst.h()[k - 1] / p * std::pow(std::abs(x[k] - x[k - 1]), p);
    }
    return s;
}

inline EnergyBreakdown energy(const ProblemInstance& inst, const GridFunction& x) {
    EnergyBreakdown e;
    e.diffusion = diffusion_energy(inst, x);
    for (int k = 1; k <= inst.T(); ++k) e.potential += inst.f().F(k, x[k], inst.u()[k]);
    e.total = e.diffusion - inst.lambda() * e.potential;
    return e;
}

/// Flux h(k-1) |Dx(k-1)|^{p(k-1)-2} Dx(k-1) for k = 1..T+1 (entry k-1).
inline std::vector<double> flux(const ProblemInstance& inst, const GridFunction& x) {
    detail::check_dims(inst, x);
    std::vector<double> phi(static_cast<std::size_t>(inst.T()) + 1);
    for (int k = 1; k <= inst.T() + 1; ++k)
        phi[k - 1] = inst.h()[k - 1] * powq(x[k] - x[k - 1], inst.p()[k - 1] - 1.0);
    return phi;
}

/**
 * Strong-form residual of the boundary-value problem at nodes 1..T:
 *
 *   r(k) = phi(k-1) - phi(k) - lambda f(k, x(k), u(k)),  phi = flux(x),
 *
 * which is also dJ/dx(k). Entry k-1 holds node k.
 */
inline std::vector<double> gradient(const ProblemInstance& inst, const GridFunction& x) {
    const auto phi = flux(inst, x);
    std::vector<double> g(static_cast<std::size_t>(inst.T()));
    for (int k = 1; k <= inst.T(); ++k)
        g[k - 1] = phi[k - 1] - phi[k] - inst.lambda() * inst.f().f(k, x[k], inst.u()[k]);
    return g;
}

inline std::vector<double> strong_residual(const ProblemInstance& inst, const GridFunction& x) {
    return gradient(inst, x);
}

inline double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double e : v) m = std::max(m, std::abs(e));
    return m;
}

/// <J'(x), y> assembled in weak form, without summation by parts.
inline double weak_form(const ProblemInstance& inst, const GridFunction& x, const GridFunction& y) {
    detail::check_dims(inst, y);
    const auto phi = flux(inst, x);
    double s = 0.0;
    for (int k = 1; k <= inst.T() + 1; ++k) s += phi[k - 1] * (y[k] - y[k - 1]);
    double t = 0.0;
    for (int k = 1; k <= inst.T(); ++k) t += inst.f().f(k, x[k], inst.u()[k]) * y[k];
    return s - inst.lambda() * t;
}

/// J1(x) = lambda sum F - sum h(k-1)/p(k-1) |Dx(k-1)|^{p(k-1)}, the concave counterpart of J.
inline double dual_energy(const ProblemInstance& inst, const GridFunction& x) {
    const double diffusion = diffusion_energy(inst, x);
    double potential = 0.0;
    for (int k = 1; k <= inst.T(); ++k) potential += inst.f().F(k, x[k], inst.u()[k]);
    return inst.lambda() * potential - diffusion;
}

/// dJ1/dx(k) = -r(k).
inline std::vector<double> dual_gradient(const ProblemInstance& inst, const GridFunction& x) {
    auto g = gradient(inst, x);
    for (double& e : g) e = -e;
    return g;
}

}  // namespace plap
