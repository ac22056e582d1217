#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"

namespace plap {
namespace {

using testing::canonical_instance;

ProblemInstance linear3(double h = 1.0, double b = 1.0) {
    return canonical_instance(3, {2.0}, {h}, 1.0, {0.0}, {b}, {1.0}, 0.0, {0.0});
}

const GridFunction& xbar() {
    static const auto x = GridFunction::from_full(std::vector<double>{0, 1.5, 2, 1.5, 0});
    return x;
}

TEST(TridiagonalOracle, Examples) {
    const auto x = tridiagonal_oracle(linear3());
    for (int k = 0; k <= 4; ++k) EXPECT_NEAR(x[k], xbar()[k], 1e-15);
    EXPECT_EQ(tridiagonal_oracle(linear3(1.0, 0.0)), GridFunction::zero(3));
    const auto half = tridiagonal_oracle(linear3(2.0));
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(half[k], 0.5 * xbar()[k], 1e-15);
}

TEST(TridiagonalOracle, AgreesWithDenseElimination) {
    testing::Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const int T = testing::uniform_int(rng, 1, 30);
        const auto n = static_cast<std::size_t>(T);
        const auto inst = canonical_instance(T, {2.0}, testing::uniform_vec(rng, n + 2, 0.5, 2.0),
                                             testing::uniform(rng, 0.1, 3), {0.0}, testing::uniform_vec(rng, n, -2, 2),
                                             {1.0}, 0.5, testing::uniform_vec(rng, n, -3, 3));
        std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
        std::vector<double> rhs(n);
        for (int k = 1; k <= T; ++k) {
            A[k - 1][k - 1] = inst.h()[k - 1] + inst.h()[k];
            if (k > 1) A[k - 1][k - 2] = -inst.h()[k - 1];
            if (k < T) A[k - 1][k] = -inst.h()[k];
            rhs[k - 1] = inst.lambda() * inst.f().f(k, 0.0, inst.u()[k]);
        }
        const auto dense = testing::dense_solve(A, rhs);
        const auto x = tridiagonal_oracle(inst);
        for (int k = 1; k <= T; ++k) EXPECT_NEAR(x[k], dense[k - 1], 1e-12 * (1 + std::abs(dense[k - 1])));
    }
}

TEST(TridiagonalOracle, RejectsNonlinearInstances) {
    EXPECT_THROW(tridiagonal_oracle(canonical_instance(3, {2.5}, {1}, 1, {0}, {1}, {1}, 0, {0})), InputError);
    EXPECT_THROW(tridiagonal_oracle(canonical_instance(3, {2}, {1}, 1, {1}, {1}, {1}, 0, {0})), InputError);
}

TEST(Minimize, LinearT3) {
    const auto r = minimize(linear3(), GridFunction::zero(3));
    ASSERT_TRUE(r.converged);
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(r.minimizer[k], xbar()[k], 1e-10);
    EXPECT_NEAR(r.final_energy, -2.5, 1e-12);
    EXPECT_LE(max_abs(strong_residual(linear3(), r.minimizer)), 1e-10);
}

TEST(Minimize, ZeroNonlinearityStaysAtZero) {
    testing::Rng rng(2);
    const auto inst = canonical_instance(5, testing::uniform_vec(rng, 7, 1.5, 4), testing::uniform_vec(rng, 7, 0.5, 2),
                                         1.0, {0.0}, {0.0}, {1.0}, 0.0, {0.0});
    const auto r = minimize(inst, GridFunction::zero(5));
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.minimizer, GridFunction::zero(5));
}

TEST(Minimize, QuarticExponent) {
    const auto inst = canonical_instance(3, {4.0}, {1.0}, 1.0, {0.0}, {1.0}, {1.0}, 0.0, {0.0});
    const auto r = minimize(inst, GridFunction::zero(3));
    ASSERT_TRUE(r.converged);
    EXPECT_LE(max_abs(strong_residual(inst, r.minimizer)), 1e-10);
    // Symmetric solution: flux h powq(Dx, 3) is linear in k with slope -1, zero mean.
    const auto phi = flux(inst, r.minimizer);
    EXPECT_NEAR(phi[0], 1.5, 1e-9);
    EXPECT_NEAR(phi[3], -1.5, 1e-9);
}

TEST(Minimize, TraceIsMonotone) {
    testing::Rng rng(3);
    SolverOptions o;
    o.keep_trace = true;
    for (int i = 0; i < 20; ++i) {
        const auto inst = testing::random_canonical(rng, testing::uniform_int(rng, 2, 30), 1.5, 4.0, 1.0, 3.0);
        const auto r = minimize(inst, testing::gaussian_grid(rng, inst.T(), 3.0), o);
        ASSERT_TRUE(r.converged) << i << " " << r.message;
        ASSERT_EQ(r.trace.size(), static_cast<std::size_t>(r.iterations) + 1);
        for (std::size_t j = 1; j < r.trace.size(); ++j)
            EXPECT_LE(r.trace[j].value, r.trace[j - 1].value + roundoff_window(r.trace[j - 1].value));
        EXPECT_EQ(r.trace.back().value, r.final_energy);
    }
}

TEST(Minimize, FixedPoint) {
    testing::Rng rng(4);
    for (int i = 0; i < 10; ++i) {
        const auto inst = testing::random_strictly_coercive(rng, testing::uniform_int(rng, 2, 15));
        const auto first = minimize(inst, GridFunction::zero(inst.T()));
        ASSERT_TRUE(first.converged);
        const auto again = minimize(inst, first.minimizer);
        EXPECT_EQ(again.iterations, 0);
        EXPECT_EQ(again.minimizer, first.minimizer);
    }
}

TEST(Minimize, OracleEquivalenceOnLinearInstances) {
    testing::Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const int T = testing::uniform_int(rng, 1, 25);
        const auto n = static_cast<std::size_t>(T);
        const auto inst = canonical_instance(T, {2.0}, testing::uniform_vec(rng, n + 2, 0.5, 2.0),
                                             testing::uniform(rng, 0.1, 3), {0.0}, testing::nonzero_b(rng, T),
                                             {1.0}, testing::uniform(rng, 0, 0.9), testing::uniform_vec(rng, n, -3, 3));
        const auto r = minimize(inst, GridFunction::zero(T));
        ASSERT_TRUE(r.converged);
        EXPECT_LE(h_distance(r.minimizer, tridiagonal_oracle(inst)), 1e-8);
    }
}

TEST(Minimize, ScalingHAndLambdaLeavesArgminUnchanged) {
    testing::Rng rng(6);
    for (int i = 0; i < 10; ++i) {
        const auto inst = testing::random_canonical(rng, testing::uniform_int(rng, 2, 15), 2.0, 4.0, 1.0, 1.5);
        const double s = testing::uniform(rng, 0.3, 3.0);
        const auto scaled = inst.with_h(inst.h().scaled(s)).with_lambda(inst.lambda() * s);
        const auto r1 = minimize(inst, GridFunction::zero(inst.T()));
        const auto r2 = minimize(scaled, GridFunction::zero(inst.T()));
        ASSERT_TRUE(r1.converged && r2.converged);
        EXPECT_LE(h_distance(r1.minimizer, r2.minimizer), 1e-8);
    }
}

TEST(Minimize, NewtonAgreesWithGradientDescent) {
    testing::Rng rng(7);
    SolverOptions newton;
    newton.method = Method::Newton;
    for (int i = 0; i < 10; ++i) {
        const auto inst = testing::random_strictly_coercive(rng, testing::uniform_int(rng, 2, 20));
        const auto gd = minimize(inst, GridFunction::zero(inst.T()));
        const auto nt = minimize(inst, GridFunction::zero(inst.T()), newton);
        ASSERT_TRUE(gd.converged && nt.converged) << nt.message;
        EXPECT_LE(h_distance(gd.minimizer, nt.minimizer), 1e-7);
        EXPECT_LT(nt.iterations, gd.iterations);
    }
    const auto low = canonical_instance(3, {1.5}, {1}, 1, {0}, {1}, {1}, 0, {0});
    EXPECT_THROW(minimize(low, GridFunction::zero(3), newton), InputError);
}

TEST(Minimize, AntiCoercivityIsDetected) {
    const auto inst = ProblemInstance(ExponentField::constant(3, 2.0), WeightField::constant(3, 1.0), 5.0,
                                      ExpressionNonlinearity("powq(x, 3) + 1", "x^4/4 + x"),
                                      ParameterFunction::constant(3, 0.0));
    const auto r = minimize(inst, GridFunction::zero(3));
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.status, DescentStatus::Diverged);
    EXPECT_NE(r.message.find("anti-coercive"), std::string::npos);
}

TEST(Minimize, MaxIterationsReturnsBestIterate) {
    testing::Rng rng(8);
    const auto inst = testing::random_canonical(rng, 30, 2.0, 3.0, 1.0, 1.5);
    SolverOptions o;
    o.max_iterations = 3;
    const auto r = minimize(inst, GridFunction::zero(30), o);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.status, DescentStatus::MaxIterations);
    EXPECT_LT(r.final_energy, 0.0);
}

TEST(SolverOptions, Validation) {
    SolverOptions o;
    o.backtracking = 1.0;
    EXPECT_THROW(o.validate(), InputError);
    o = {};
    o.armijo = 0.5;
    EXPECT_THROW(o.validate(), InputError);
    o = {};
    o.tolerance = 0.0;
    EXPECT_THROW(o.validate(), InputError);
}

TEST(SampleHBall, StaysInsideRadius) {
    testing::Rng rng(9);
    double biggest = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const int T = testing::uniform_int(rng, 1, 20);
        const double n = h_norm(sample_h_ball(T, 10.0, rng));
        EXPECT_LE(n, 10.0 * (1 + 1e-12));
        biggest = std::max(biggest, n);
    }
    EXPECT_GT(biggest, 9.0);
}

TEST(Multistart, LinearInstance) {
    const auto rep = multistart(linear3());
    EXPECT_EQ(rep.runs.size(), 11u);
    EXPECT_EQ(rep.verdict, UniquenessVerdict::UniqueConsistent);
    for (const auto& r : rep.runs) EXPECT_LE(h_distance(r.minimizer, xbar()), 1e-8);
}

TEST(Multistart, ZeroNonlinearity) {
    const auto rep = multistart(linear3(1.0, 0.0));
    EXPECT_EQ(rep.verdict, UniquenessVerdict::UniqueConsistent);
    for (const auto& r : rep.runs) EXPECT_LE(sup_norm(r.minimizer), 1e-9);
}

TEST(Multistart, NotCoveredAntiCoerciveInstance) {
    // f = powq(x,3) grows with the wrong sign: J is unbounded below along any bump.
    const auto inst = ProblemInstance(ExponentField::constant(3, 2.0), WeightField::constant(3, 1.0), 4.0,
                                      ExpressionNonlinearity("powq(x, 3)", "x^4/4", GrowthData::constant(3, 1, 0, 3)),
                                      ParameterFunction::constant(3, 0.0));
    const auto rep = multistart(inst);
    EXPECT_EQ(rep.verdict, UniquenessVerdict::AntiCoercive);
    const auto bump = GridFunction::from_full(std::vector<double>{0, 1, 1, 1, 0});
    const auto probe =
        coercivity_ray_probe(inst, bump, 1e3, make_constants(inst.p(), inst.h(), inst.f().growth()));
    EXPECT_EQ(probe.trend, RayTrend::Downward);
}

TEST(Multistart, UniqueOnCoveredInstances) {
    testing::Rng rng(10);
    for (int i = 0; i < 10; ++i) {
        const auto inst = i % 2 == 0 ? testing::random_strictly_coercive(rng, testing::uniform_int(rng, 2, 12))
                                     : testing::random_borderline_admissible(rng, testing::uniform_int(rng, 2, 12));
        const auto rep = multistart(inst);
        EXPECT_EQ(rep.verdict, UniquenessVerdict::UniqueConsistent) << i << " dist " << rep.max_pairwise_distance
                                                                    << " radius " << rep.radius;
        EXPECT_LE(rep.max_pairwise_distance, 1e-7);
    }
}

TEST(Hessian, SmallestEigenvalueOfDiscreteLaplacian) {
    for (int T : {1, 2, 5, 17, 60}) {
        const std::vector<double> diag(static_cast<std::size_t>(T), 2.0), off(static_cast<std::size_t>(T - 1), -1.0);
        EXPECT_NEAR(detail::smallest_eigenvalue(diag, off), 1.0 / testing::laplacian_sharp_constant(T), 1e-13) << T;
    }
    EXPECT_NEAR(detail::smallest_eigenvalue({3.0, 1.0}, {0.0}), 1.0, 1e-15);
}

TEST(Hessian, MatchesFiniteDifferenceOfGradient) {
    testing::Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const auto inst = testing::random_canonical(rng, testing::uniform_int(rng, 2, 10), 2.0, 4.0, 1.0, 3.0);
        const auto x = testing::gaussian_grid(rng, inst.T());
        const auto [diag, off] = detail::hessian(inst, x);
        for (int k = 1; k <= inst.T(); ++k) {
            const double s = 1e-6 * (1.0 + std::abs(x[k]));
            GridFunction xp = x, xm = x;
            xp.set(k, x[k] + s);
            xm.set(k, x[k] - s);
            const auto gp = gradient(inst, xp), gm = gradient(inst, xm);
            EXPECT_LE(testing::rel_err(diag[k - 1], (gp[k - 1] - gm[k - 1]) / (2 * s)), 1e-5);
            if (k < inst.T()) {
                EXPECT_LE(testing::rel_err(off[k - 1], (gp[k] - gm[k]) / (2 * s)), 1e-5);
            }
        }
    }
}

TEST(MaximizeDual, MatchesMinimize) {
    testing::Rng rng(11);
    for (int i = 0; i < 10; ++i) {
        const auto inst = testing::random_strictly_coercive(rng, testing::uniform_int(rng, 2, 15));
        const auto a = minimize(inst, GridFunction::zero(inst.T()));
        const auto b = maximize_dual(inst, GridFunction::zero(inst.T()));
        ASSERT_TRUE(a.converged && b.converged);
        EXPECT_LE(h_distance(a.minimizer, b.minimizer), 1e-8);
    }
    const auto zero = maximize_dual(linear3(1.0, 0.0), GridFunction::zero(3));
    EXPECT_EQ(zero.minimizer, GridFunction::zero(3));
}

TEST(MaximizeDual, DualRegimeInstance) {
    const auto inst = canonical_instance(3, {2.0}, {1.0}, 1.0, {1.0}, {1.0}, {3.0}, 0.2, {0.5});
    const auto c = make_constants(inst.p(), inst.h(), inst.f().growth());
    EXPECT_EQ(classify_regime(inst.p(), *inst.f().growth(), inst.lambda(), c).dual, DualRegime::StrictlyAntiCoercive);
    const auto r = maximize_dual(inst, GridFunction::zero(3));
    ASSERT_TRUE(r.converged);
    EXPECT_LE(max_abs(strong_residual(inst, r.minimizer)), 1e-10);
}

TEST(RayProbe, StrictlyCoerciveDominatesBound) {
    testing::Rng rng(12);
    for (int i = 0; i < 10; ++i) {
        const auto inst = testing::random_strictly_coercive(rng, testing::uniform_int(rng, 2, 12));
        const auto c = make_constants(inst.p(), inst.h(), inst.f().growth());
        const auto probe = coercivity_ray_probe(inst, testing::gaussian_grid(rng, inst.T()), 1e3, c);
        EXPECT_TRUE(probe.dominates_bound);
        EXPECT_EQ(probe.trend, RayTrend::Upward);
    }
}

TEST(RayProbe, ZeroNonlinearityGivesDiffusionOnly) {
    const auto inst = linear3(1.0, 0.0);
    const auto d = GridFunction::from_full(std::vector<double>{0, 1, -2, 0.5, 0});
    const auto probe = coercivity_ray_probe(inst, d, 100.0, make_constants(inst.p(), inst.h(), inst.f().growth()));
    for (const auto& s : probe.samples) {
        EXPECT_GE(s.energy, 0.0);
        EXPECT_DOUBLE_EQ(s.energy, diffusion_energy(inst, s.t * d));
    }
    EXPECT_THROW(coercivity_ray_probe(inst, GridFunction::zero(3), 1.0, make_constants(inst.p(), inst.h(), {})),
                 InputError);
}

TEST(RayProbe, BorderlineFarAboveThreshold) {
    // Wrong-sign linear growth (q = p - 1) with lambda far above lambda*: the ray can fall.
    const auto inst = ProblemInstance(ExponentField::constant(3, 2.0), WeightField::constant(3, 1.0), 50.0,
                                      ExpressionNonlinearity("x", "x^2/2", GrowthData::constant(3, 1, 0, 1)),
                                      ParameterFunction::constant(3, 0.0));
    const auto c = make_constants(inst.p(), inst.h(), inst.f().growth());
    EXPECT_EQ(classify_regime(inst.p(), *inst.f().growth(), inst.lambda(), c).primal, Regime::BorderlineInadmissible);
    const auto probe = coercivity_ray_probe(inst, GridFunction::from_full(std::vector<double>{0, 1, 1, 1, 0}), 1e3, c);
    EXPECT_EQ(probe.trend, RayTrend::Downward);
}

}  // namespace
}  // namespace plap
