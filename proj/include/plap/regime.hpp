#pragma once

#include <cmath>

#include "plap/constants.hpp"
#include "plap/grid.hpp"
#include "plap/nonlinearity.hpp"

namespace plap {

enum class Regime { StrictlyCoercive, BorderlineAdmissible, BorderlineInadmissible, NotCovered };

/// Classification for the concave counterpart J1 = -J (condition q- + 1 against p+).
enum class DualRegime { StrictlyAntiCoercive, BorderlineAdmissible, BorderlineInadmissible, NotCovered };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::StrictlyCoercive: return "StrictlyCoercive";
        case Regime::BorderlineAdmissible: return "BorderlineAdmissible";
        case Regime::BorderlineInadmissible: return "BorderlineInadmissible";
        case Regime::NotCovered: return "NotCovered";
    }
    return "?";
}

inline const char* to_string(DualRegime r) {
    switch (r) {
        case DualRegime::StrictlyAntiCoercive: return "StrictlyAntiCoercive";
        case DualRegime::BorderlineAdmissible: return "BorderlineAdmissible";
        case DualRegime::BorderlineInadmissible: return "BorderlineInadmissible";
        case DualRegime::NotCovered: return "NotCovered";
    }
    return "?";
}

struct RegimeClassification {
    Regime primal;
    DualRegime dual;

    bool covered() const { return primal == Regime::StrictlyCoercive || primal == Regime::BorderlineAdmissible; }
    bool dual_covered() const {
        return dual == DualRegime::StrictlyAntiCoercive || dual == DualRegime::BorderlineAdmissible;
    }
};

namespace detail {
// Exponents are user data; treat p- = q+ + 1 as equality up to a few ulps.
inline bool same_exponent(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }
}  // namespace detail

inline RegimeClassification classify_regime(const ExponentField& p, const GrowthData& g, double lambda,
                                            const ConstantsBundle& c) {
    if (c.T != p.T() || g.T() != p.T()) throw InputError("classify_regime: constants computed for a different T");
    RegimeClassification r{};
    const double pm = p.min();
    const double pp = p.max();
    const double qm = g.q_minus();
    const double qp = g.q_plus();

    if (detail::same_exponent(pm, qp + 1.0))
        r.primal = lambda < c.lambda_star ? Regime::BorderlineAdmissible : Regime::BorderlineInadmissible;
    else if (pm > qp + 1.0)
        r.primal = Regime::StrictlyCoercive;
    else
        r.primal = Regime::NotCovered;

    if (detail::same_exponent(qm + 1.0, pp))
        r.dual = lambda > c.dual_lambda_star ? DualRegime::BorderlineAdmissible : DualRegime::BorderlineInadmissible;
    else if (qm + 1.0 > pp)
        r.dual = DualRegime::StrictlyAntiCoercive;
    else
        r.dual = DualRegime::NotCovered;
    return r;
}

}  // namespace plap
