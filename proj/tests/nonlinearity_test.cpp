#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "test_util.hpp"

namespace plap {
namespace {

Nonlinearity canonical(int T, double a, double b, double q, double rho) {
    return CanonicalFamily(GrowthData::constant(T, a, b, q), rho);
}

Nonlinearity expression(const char* f) { return ExpressionNonlinearity(f); }

TEST(EvalF, CanonicalExamples) {
    const auto one = canonical(3, 0.0, 1.0, 2.0, 0.0);
    for (double x : {-3.0, 0.0, 2.0}) EXPECT_EQ(eval_f(one, 2, x, 1.3), 1.0);
    EXPECT_EQ(eval_f(canonical(3, 1.0, 0.0, 3.0, 0.0), 1, 2.0, 0.4), -8.0);
    EXPECT_EQ(eval_f(canonical(3, 1.0, 1.0, 2.0, 0.5), 3, -1.0, 0.0), 2.0);
}

TEST(EvalF, ExpressionErrorsPropagate) {
    EXPECT_THROW(eval_f(expression("1/x"), 1, 0.0, 0.0), expr::EvaluationError);
}

TEST(EvalBigF, Examples) {
    const auto closed = canonical(3, 0.7, 1.2, 2.5, 0.3);
    const auto quad = expression("-powq(x, 2) + cos(u)");
    for (double u : {-1.0, 0.0, 2.0}) {
        EXPECT_EQ(eval_F(closed, 2, 0.0, u), 0.0);
        EXPECT_EQ(eval_F(quad, 2, 0.0, u), 0.0);
    }
    for (double x : {-2.0, 0.5, 4.0}) EXPECT_DOUBLE_EQ(eval_F(canonical(2, 0.0, 1.0, 2.0, 0.0), 1, x, 0.0), x);
    EXPECT_DOUBLE_EQ(eval_F(canonical(2, 1.0, 0.0, 1.0, 0.0), 1, 3.0, 0.0), -4.5);
}

TEST(EvalBigF, QuadratureMatchesClosedForm) {
    const auto closed = canonical(4, 1.3, -0.8, 2.7, 0.4);
    const auto quad = expression("-1.3*powq(x, 2.7) - 0.8*(1 + 0.4*sin(u))");
    testing::Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const double x = testing::uniform(rng, -6, 6);
        const double u = testing::uniform(rng, -4, 4);
        EXPECT_NEAR(eval_F(quad, 1, x, u), eval_F(closed, 1, x, u), 1e-9 * (1 + std::abs(eval_F(closed, 1, x, u))));
    }
}

TEST(EvalBigF, UserPrimitiveIsAnchored) {
    const Nonlinearity n = ExpressionNonlinearity("cos(x)", "sin(x) + 5");
    EXPECT_EQ(eval_F(n, 1, 0.0, 0.0), 0.0);
    EXPECT_NEAR(eval_F(n, 1, 1.0, 0.0), std::sin(1.0), 1e-15);
}

TEST(EvalBigF, QuadratureFailureIsReported) {
    auto wild = [](double t) { return std::sin(1.0 / (t * t + 1e-300)); };
    EXPECT_THROW(adaptive_simpson(wild, 0.0, 1.0, 1e-14, 8), AccuracyError);
}

TEST(EvalBigF, PrimitiveConsistencyCanonical) {
    testing::Rng rng(9);
    for (int i = 0; i < 500; ++i) {
        const int T = 5;
        const auto n = Nonlinearity(CanonicalFamily(
            GrowthData(T, testing::uniform_vec(rng, 5, 0, 2), testing::uniform_vec(rng, 5, -2, 2),
                       testing::uniform_vec(rng, 5, 1, 4)),
            testing::uniform(rng, 0, 0.9)));
        const int k = testing::uniform_int(rng, 1, T);
        const double x = testing::uniform(rng, -4, 4);
        const double u = testing::uniform(rng, -5, 5);
        const double h = 1e-5 * (1 + std::abs(x));
        const double fd = (eval_F(n, k, x + h, u) - eval_F(n, k, x - h, u)) / (2 * h);
        const double f = eval_f(n, k, x, u);
        if (std::abs(f) < 1e-2) EXPECT_NEAR(fd, f, 1e-8 + 1e-6);
        else EXPECT_NEAR(fd, f, 1e-6 * std::abs(f));
    }
}

TEST(EvalBigF, PrimitiveConsistencyQuadrature) {
    const auto n = expression("-powq(x, 1.5) + 0.5*sin(u) + 0.2*cos(k*x)");
    testing::Rng rng(10);
    const double tol = ExpressionNonlinearity::quadrature_tolerance;
    for (int i = 0; i < 500; ++i) {
        const int k = testing::uniform_int(rng, 1, 4);
        const double x = testing::uniform(rng, -4, 4);
        const double u = testing::uniform(rng, -5, 5);
        const double h = 1e-3;
        const double fd = (eval_F(n, k, x + h, u) - eval_F(n, k, x - h, u)) / (2 * h);
        // Quadrature error, amplified by the difference quotient, plus the O(h^2) truncation term.
        EXPECT_NEAR(fd, eval_f(n, k, x, u), 10 * tol / h + h * h * (1 + k * k));
    }
}

SamplingPlan plan(int T, double R = 10.0) {
    SamplingPlan s;
    s.T = T;
    s.x_radius = R;
    return s;
}

TEST(CheckH1, Examples) {
    const auto c = CanonicalFamily(GrowthData(3, std::vector<double>{1, 0.5, 2}, std::vector<double>{-1, 2, 0.3},
                                              std::vector<double>{1.5, 2, 3}),
                                   0.6);
    EXPECT_TRUE(check_H1(c, c.declared_growth(), plan(3)).empty());
    EXPECT_TRUE(check_H1(expression("x*x"), GrowthData::constant(3, 1, 0, 2), plan(3)).empty());
    const auto v = check_H1(expression("exp(x)"), GrowthData::constant(3, 1, 1, 2), plan(3));
    ASSERT_FALSE(v.empty());
    const auto& last = v.back();
    EXPECT_EQ(last.x, 10.0);
    EXPECT_NEAR(last.lhs, std::exp(10.0), 1e-6);
    EXPECT_EQ(last.rhs, 101.0);
}

TEST(CheckH2, Examples) {
    EXPECT_TRUE(check_H2(canonical(4, 1.0, 1.0, 2.0, 0.5), plan(4)).empty());
    const auto inc = check_H2(expression("x"), plan(2));
    EXPECT_EQ(inc.size(), 2u * 11u * 200u);
    EXPECT_TRUE(check_H2(expression("-powq(x, 3)"), plan(2)).empty());
}

TEST(CheckH3, Examples) {
    const std::vector<double> us{-5, -1, 0, 2.5, 5};
    const auto ok = check_H3(canonical(3, 0, 1, 2, 0), 3, us);
    EXPECT_TRUE(ok.holds);
    EXPECT_EQ(ok.witness_k, 1);
    EXPECT_FALSE(check_H3(canonical(3, 1, 0, 2, 0.5), 3, us).holds);
    const auto s = check_H3(expression("sin(u)"), 3, us);
    EXPECT_FALSE(s.holds);
    EXPECT_EQ(s.failing_u, 0.0);
    EXPECT_THROW(check_H3(expression("1"), 3, std::vector<double>{}), InputError);
}

TEST(Checks, CanonicalDrawsAreClean) {
    testing::Rng rng(21);
    for (int i = 0; i < 40; ++i) {
        const int T = testing::uniform_int(rng, 1, 6);
        const auto n = static_cast<std::size_t>(T);
        const CanonicalFamily c(GrowthData(T, testing::uniform_vec(rng, n, 0, 3), testing::nonzero_b(rng, T),
                                           testing::uniform_vec(rng, n, 1, 4)),
                                testing::uniform(rng, 0, 0.99));
        SamplingPlan s = plan(T);
        s.x_count = 41;
        EXPECT_TRUE(check_H1(c, c.declared_growth(), s).empty());
        EXPECT_TRUE(check_H2(c, s).empty());
        EXPECT_TRUE(check_H3(c, T, s.us()).holds);
    }
}

TEST(GrowthData, Invariants) {
    EXPECT_THROW(GrowthData::constant(2, -1, 0, 2), InputError);
    EXPECT_THROW(GrowthData::constant(2, 1, 0, 0.5), InputError);
    EXPECT_THROW(CanonicalFamily(GrowthData::constant(2, 1, 0, 2), 1.0), InputError);
    const GrowthData g(3, std::vector<double>{1, 3, 2}, std::vector<double>{-4, 1, 0}, std::vector<double>{2, 1.5, 3});
    EXPECT_EQ(g.a_plus(), 3.0);
    EXPECT_EQ(g.b_plus(), 4.0);
    EXPECT_EQ(g.q_minus(), 1.5);
    EXPECT_EQ(g.q_plus(), 3.0);
}

}  // namespace
}  // namespace plap
