#pragma once

// Random instance generators and independent oracles shared by the unit and
// acceptance suites.

#include <cmath>
#include <random>
#include <vector>

#include "plap/plap.hpp"

namespace plap::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::vector<double> uniform_vec(Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (double& e : v) e = uniform(rng, lo, hi);
    return v;
}

inline GridFunction gaussian_grid(Rng& rng, int T, double sigma = 1.0) {
    std::normal_distribution<double> g(0.0, sigma);
    std::vector<double> y(static_cast<std::size_t>(T));
    for (double& v : y) v = g(rng);
    return GridFunction::from_interior(y);
}

/// b with at least one entry of magnitude >= 0.25, so H3 holds.
inline std::vector<double> nonzero_b(Rng& rng, int T, double lo = -2.0, double hi = 2.0) {
    auto b = uniform_vec(rng, static_cast<std::size_t>(T), lo, hi);
    b[static_cast<std::size_t>(uniform_int(rng, 0, T - 1))] = uniform(rng, 0.25, 2.0);
    return b;
}

inline ProblemInstance canonical_instance(int T, std::vector<double> p, std::vector<double> h, double lambda,
                                          std::vector<double> a, std::vector<double> b, std::vector<double> q,
                                          double rho, std::vector<double> u) {
    return ProblemInstance(ExponentField(T, p), WeightField(T, h), lambda,
                           CanonicalFamily(GrowthData(T, a, b, q), rho), ParameterFunction(T, u));
}

/// p(k) in [p_lo, p_hi], h(k) in [0.5, 2], a >= 0, rho in [0, 0.9].
inline ProblemInstance random_canonical(Rng& rng, int T, double p_lo, double p_hi, double q_lo, double q_hi,
                                        double lambda_lo = 0.2, double lambda_hi = 2.0, double a_hi = 1.0) {
    const auto n = static_cast<std::size_t>(T);
    return canonical_instance(T, uniform_vec(rng, n + 2, p_lo, p_hi), uniform_vec(rng, n + 2, 0.5, 2.0),
                              uniform(rng, lambda_lo, lambda_hi), uniform_vec(rng, n, 0.0, a_hi), nonzero_b(rng, T),
                              uniform_vec(rng, n, q_lo, q_hi), uniform(rng, 0.0, 0.9), uniform_vec(rng, n, -3.0, 3.0));
}

/// p- > q+ + 1 by at least 0.1.
inline ProblemInstance random_strictly_coercive(Rng& rng, int T) {
    const auto n = static_cast<std::size_t>(T);
    auto p = uniform_vec(rng, n + 2, 2.5, 4.0);
    double pm = *std::min_element(p.begin(), p.end());
    auto q = uniform_vec(rng, n, 1.0, pm - 1.1);
    return canonical_instance(T, p, uniform_vec(rng, n + 2, 0.5, 2.0), uniform(rng, 0.2, 2.0),
                              uniform_vec(rng, n, 0.0, 1.0), nonzero_b(rng, T), q, uniform(rng, 0.0, 0.9),
                              uniform_vec(rng, n, -3.0, 3.0));
}

/// p- = q+ + 1 exactly, lambda drawn below the threshold.
inline ProblemInstance random_borderline_admissible(Rng& rng, int T) {
    const auto n = static_cast<std::size_t>(T);
    const double qp = uniform_int(rng, 0, 1) == 0 ? 1.0 : uniform(rng, 1.0, 2.0);
    auto q = uniform_vec(rng, n, 1.0, qp);
    q[static_cast<std::size_t>(uniform_int(rng, 0, T - 1))] = qp;
    auto p = uniform_vec(rng, n + 2, qp + 1.0, qp + 2.0);
    p[static_cast<std::size_t>(uniform_int(rng, 0, T + 1))] = qp + 1.0;
    auto a = uniform_vec(rng, n, 0.2, 1.0);
    auto h = uniform_vec(rng, n + 2, 0.5, 2.0);
    auto b = nonzero_b(rng, T);
    auto u = uniform_vec(rng, n, -3.0, 3.0);
    const double rho = uniform(rng, 0.0, 0.9);
    auto probe = canonical_instance(T, p, h, 1.0, a, b, q, rho, u);
    auto g = *probe.f().growth();
    const double star = make_constants(probe.p(), probe.h(), g).lambda_star;
    return canonical_instance(T, p, h, uniform(rng, 0.1, 0.9) * star, a, b, q, rho, u);
}

/// Centered finite difference of J_u, step 1e-6 (1 + |x(k)|).
inline std::vector<double> fd_gradient(const ProblemInstance& inst, const GridFunction& x) {
    std::vector<double> g(static_cast<std::size_t>(inst.T()));
    for (int k = 1; k <= inst.T(); ++k) {
        const double step = 1e-6 * (1.0 + std::abs(x[k]));
        GridFunction xp = x, xm = x;
        xp.set(k, x[k] + step);
        xm.set(k, x[k] - step);
        g[k - 1] = (energy(inst, xp).total - energy(inst, xm).total) / (2.0 * step);
    }
    return g;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

/// 1 / (4 sin^2(pi / (2(T+1)))): reciprocal smallest eigenvalue of tridiag(-1, 2, -1).
inline double laplacian_sharp_constant(int T) {
    const double s = std::sin(M_PI / (2.0 * (T + 1)));
    return 1.0 / (4.0 * s * s);
}

/// Dense Gaussian elimination for a T x T system; independent of the oracle under test.
inline std::vector<double> dense_solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        std::swap(A[c], A[piv]);
        std::swap(b[c], b[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double w = A[r][c] / A[c][c];
            for (std::size_t j = c; j < n; ++j) A[r][j] -= w * A[c][j];
            b[r] -= w * b[c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= A[i][j] * x[j];
        x[i] = s / A[i][i];
    }
    return x;
}

}  // namespace plap::testing
