// Walks one borderline problem through the library: constants and regime,
// multistart uniqueness, dependence on u, and a lambda sweep.

#include <cstdio>

#include "plap/plap.hpp"

using namespace plap;

namespace {

ProblemInstance borderline(double lambda, double rho = 0.0) {
    const int T = 3;
    return ProblemInstance(ExponentField::constant(T, 2.0), WeightField::constant(T, 1.0), lambda,
                           CanonicalFamily(GrowthData::constant(T, 1.0, 1.0, 1.0), rho),
                           ParameterFunction::constant(T, 0.0));
}

void print(const char* label, const GridFunction& x) {
    std::printf("%s", label);
    for (double v : x.values()) std::printf(" %.10f", v);
    std::printf("\n");
}

}  // namespace

int main() {
    const auto inst = borderline(0.1);
    const auto g = *inst.f().growth();
    const auto c = make_constants(inst.p(), inst.h(), g);
    const auto regime = classify_regime(inst.p(), g, inst.lambda(), c);
    std::printf("lambda* = %.17g, regime at lambda = 0.1: %s\n", c.lambda_star, to_string(regime.primal));

    const auto uniq = multistart(inst);
    std::printf("multistart: %zu runs, max distance %.3e, verdict %s\n", uniq.runs.size(), uniq.max_pairwise_distance,
                to_string(uniq.verdict));
    print("minimizer:", uniq.runs.front().minimizer);
    std::printf("energy %.12f\n", uniq.runs.front().final_energy);

    const auto dep = run_dependence({borderline(0.1, 0.5), ParameterFunction::constant(3, 1.0), harmonic_schedule(20)});
    std::printf("dependence: gamma %.6f, verdict %s\n", dep.gamma, to_string(dep.verdict));
    for (const auto& r : dep.records)
        if (r.n == 1 || r.n % 5 == 0) std::printf("  n = %2d  dist %.3e\n", r.n, r.dist_to_limit);

    std::printf("sweep:\n");
    for (const auto& row : regime_sweep([](double l) { return borderline(l); }, {0.05, 0.1, 0.15, 0.3}))
        std::printf("  lambda %.2f  %-24s converged %d  energy %.6f\n", row.lambda,
                    row.regime ? to_string(row.regime->primal) : "-", row.converged, row.final_energy);
}
