#pragma once

// Commands of the plap tool as pure functions from a validated config to
// rendered output plus an exit code. Exit codes: 0 success, 1 input error,
// 2 numerical-outcome warning.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "plap/config.hpp"

namespace plap::cli {

using config::Json;

enum class Format { Json, Csv };

enum Exit : int { Success = 0, InputFailure = 1, NumericalWarning = 2 };

struct Output {
    std::string text;
    int exit_code = Success;
};

/// %.16e, i.e. 17 significant digits.
inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline const char* csv_bool(bool b) { return b ? "true" : "false"; }

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) throw std::logic_error("csv row has the wrong number of columns");
        rows_.push_back(std::move(cells));
    }

    std::string str() const {
        std::string s;
        auto line = [&s](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
            s += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return s;
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {

struct Classified {
    std::optional<ConstantsBundle> bundle;
    std::optional<RegimeClassification> regime;
};

inline Classified classify(const ProblemInstance& inst) {
    Classified c;
    if (auto g = inst.f().growth()) {
        c.bundle = make_constants(inst.p(), inst.h(), g);
        c.regime = classify_regime(inst.p(), *g, inst.lambda(), *c.bundle);
    }
    return c;
}

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json regime_json(const Classified& c) {
    if (!c.regime) return nullptr;
    return Json{{"primal", to_string(c.regime->primal)},
                {"dual", to_string(c.regime->dual)},
                {"lambda_star", number_or_null(c.bundle->lambda_star)},
                {"dual_lambda_star", number_or_null(c.bundle->dual_lambda_star)}};
}

inline Json h3_json(const H3Result& h) {
    Json j{{"holds", h.holds}};
    j["witness_k"] = h.witness_k ? Json(*h.witness_k) : Json(nullptr);
    j["failing_u"] = h.failing_u ? Json(*h.failing_u) : Json(nullptr);
    return j;
}

}  // namespace detail

inline Output cmd_solve(const config::Config& c, Format format) {
    const ProblemInstance inst = c.instance();
    const auto cls = detail::classify(inst);
    const H3Result h3 = check_H3(inst.f(), inst.T(), c.sampling.us());

    std::optional<UniquenessReport> uniq;
    SolveReport rep;
    if (c.solver.starts > 1) {
        uniq = multistart(inst, c.solver);
        rep = uniq->runs.front();
    } else {
        rep = minimize(inst, GridFunction::zero(inst.T()), c.solver);
    }
    const double residual = max_abs(strong_residual(inst, rep.minimizer));

    Json notes = Json::array();
    if (!h3.holds) notes.push_back("H3 fails on the sampled u; the trivial solution x = 0 is expected");
    if (!cls.regime) notes.push_back("no growth data declared; regime not classified");
    else if (!cls.regime->covered()) notes.push_back("regime not covered by the existence result");
    if (rep.status == DescentStatus::Diverged) notes.push_back(rep.message);
    else if (uniq && uniq->verdict == UniquenessVerdict::AntiCoercive)
        notes.push_back("anti-coercive detected: a multistart run is unbounded below (regime not covered)");

    Output out;
    const bool uniq_ok = !uniq || uniq->verdict == UniquenessVerdict::UniqueConsistent;
    out.exit_code = rep.converged && uniq_ok ? Success : NumericalWarning;

    if (format == Format::Csv) {
        CsvTable t({"k", "x"});
        for (int k = 0; k <= inst.T() + 1; ++k) t.row({std::to_string(k), csv_number(rep.minimizer[k])});
        out.text = t.str();
        return out;
    }
    Json j;
    j["command"] = "solve";
    j["instance"] = config::echo(c);
    j["regime"] = detail::regime_json(cls);
    j["H3"] = detail::h3_json(h3);
    j["minimizer"] = config::to_json(rep.minimizer.values());
    j["energy"] = Json{{"diffusion", rep.energy.diffusion}, {"potential", rep.energy.potential}, {"total", rep.energy.total}};
    j["residual_max"] = residual;
    j["iterations"] = rep.iterations;
    j["converged"] = rep.converged;
    j["status"] = to_string(rep.status);
    j["message"] = rep.message;
    if (uniq) {
        j["uniqueness"] = Json{{"verdict", to_string(uniq->verdict)},
                               {"runs", uniq->runs.size()},
                               {"max_pairwise_distance", uniq->max_pairwise_distance},
                               {"radius", uniq->radius}};
    } else {
        j["uniqueness"] = nullptr;
    }
    j["notes"] = notes;
    out.text = dump(j);
    return out;
}

inline Output cmd_check(const config::Config& c, Format format) {
    const ProblemInstance inst = c.instance();
    const auto cls = detail::classify(inst);
    const auto g = inst.f().growth();
    std::optional<std::vector<H1Violation>> h1;
    if (g) h1 = check_H1(inst.f(), *g, c.sampling);
    const auto h2 = check_H2(inst.f(), c.sampling);
    const auto h3 = check_H3(inst.f(), inst.T(), c.sampling.us());

    Output out;
    const bool pass = (!h1 || h1->empty()) && h2.empty() && h3.holds;
    out.exit_code = pass ? Success : NumericalWarning;

    if (format == Format::Csv) {
        CsvTable t({"item", "value"});
        t.row({"H1", h1 ? csv_bool(h1->empty()) : "skipped"});
        t.row({"H1_violations", h1 ? std::to_string(h1->size()) : "0"});
        t.row({"H2", csv_bool(h2.empty())});
        t.row({"H2_violations", std::to_string(h2.size())});
        t.row({"H3", csv_bool(h3.holds)});
        t.row({"H4", csv_bool(h2.empty())});
        t.row({"regime", cls.regime ? to_string(cls.regime->primal) : "unclassified"});
        t.row({"dual_regime", cls.regime ? to_string(cls.regime->dual) : "unclassified"});
        t.row({"lambda_star", cls.bundle ? csv_number(cls.bundle->lambda_star) : "nan"});
        t.row({"dual_lambda_star", cls.bundle ? csv_number(cls.bundle->dual_lambda_star) : "nan"});
        out.text = t.str();
        return out;
    }

    constexpr std::size_t shown = 5;
    Json j;
    j["command"] = "check";
    j["instance"] = config::echo(c);
    j["sampling"] = Json{{"x_radius", c.sampling.x_radius}, {"x_count", c.sampling.x_count},
                         {"u_min", c.sampling.u_min},       {"u_max", c.sampling.u_max},
                         {"u_count", c.sampling.u_count}};
    if (h1) {
        Json w = Json::array();
        for (std::size_t i = 0; i < std::min(shown, h1->size()); ++i) {
            const auto& v = (*h1)[i];
            w.push_back(Json{{"k", v.k}, {"x", v.x}, {"u", v.u}, {"lhs", v.lhs}, {"rhs", v.rhs}});
        }
        j["H1"] = Json{{"holds", h1->empty()}, {"violations", h1->size()}, {"witnesses", w}};
    } else {
        j["H1"] = Json{{"holds", nullptr}, {"skipped", "no growth data declared"}};
    }
    Json w2 = Json::array();
    for (std::size_t i = 0; i < std::min(shown, h2.size()); ++i) {
        const auto& v = h2[i];
        w2.push_back(Json{{"k", v.k}, {"u", v.u}, {"x1", v.x1}, {"x2", v.x2}, {"f1", v.f1}, {"f2", v.f2}});
    }
    j["H2"] = Json{{"holds", h2.empty()}, {"violations", h2.size()}, {"witnesses", w2}};
    j["H3"] = detail::h3_json(h3);
    // H4 states the same monotonicity as H2; the sampled verdict is shared.
    j["H4"] = Json{{"holds", h2.empty()}, {"same_as", "H2"}};
    j["regime"] = detail::regime_json(cls);
    j["passed"] = pass;
    out.text = dump(j);
    return out;
}

struct ConstantsRequest {
    int T = 0;
    std::vector<double> p;  ///< scalar or T+2 values
    std::vector<double> m{1.0, 2.0};
    std::optional<ProblemInstance> instance;  ///< adds lambda thresholds when given
};

inline Output cmd_constants(const ConstantsRequest& req, Format format) {
    if (req.T < 1) throw InputError("T must be a positive integer");
    if (req.m.empty()) throw InputError("at least one m is required");
    for (double m : req.m)
        if (!(m >= 1.0) || !std::isfinite(m)) throw InputError("invalid m: embedding constants need m >= 1");
    const ExponentField p(req.T, req.p);
    const bool sharp = req.T <= 200;

    struct Row {
        double m, provable;
        std::optional<SharpConstant> sharp;
    };
    std::vector<Row> rows;
    for (double m : req.m)
        rows.push_back({m, embedding_constant(m, req.T), sharp ? std::optional(sharp_embedding_constant(m, req.T))
                                                               : std::nullopt});
    const auto cc = coercivity_constants(p);
    std::optional<ConstantsBundle> bundle;
    if (req.instance)
        if (auto g = req.instance->f().growth()) bundle = make_constants(p, req.instance->h(), g);
    const double n = req.T + 1.0;

    Output out;
    if (format == Format::Csv) {
        CsvTable t({"quantity", "m", "value"});
        for (const auto& r : rows) {
            t.row({"c_m", csv_number(r.m), csv_number(r.provable)});
            t.row({"c_m_sharp", csv_number(r.m), r.sharp ? csv_number(r.sharp->value) : "nan"});
        }
        for (const auto& r : rows)
            if (r.m >= 2.0) {
                t.row({"norm_lower", csv_number(r.m), csv_number(std::pow(n, (2.0 - r.m) / (2.0 * r.m)))});
                t.row({"norm_upper", csv_number(r.m), csv_number(std::pow(n, 1.0 / r.m))});
            }
        t.row({"C1", "", csv_number(cc.C1)});
        t.row({"C2", "", csv_number(cc.C2)});
        if (bundle) {
            t.row({"lambda_star", "", csv_number(bundle->lambda_star)});
            t.row({"dual_lambda_star", "", csv_number(bundle->dual_lambda_star)});
        }
        out.text = t.str();
        return out;
    }
    Json j;
    j["command"] = "constants";
    j["T"] = req.T;
    j["p_minus"] = p.min();
    j["p_plus"] = p.max();
    Json emb = Json::array();
    for (const auto& r : rows) {
        Json e{{"m", r.m}, {"provable", r.provable}};
        e["sharp"] = r.sharp ? Json(r.sharp->value) : Json(nullptr);
        e["sharp_converged"] = r.sharp ? Json(r.sharp->converged) : Json(nullptr);
        emb.push_back(e);
    }
    j["embedding"] = emb;
    j["C1"] = cc.C1;
    j["C2"] = cc.C2;
    Json rel = Json::array();
    for (const auto& r : rows)
        if (r.m >= 2.0)
            rel.push_back(Json{{"m", r.m},
                               {"lower", std::pow(n, (2.0 - r.m) / (2.0 * r.m))},
                               {"upper", std::pow(n, 1.0 / r.m)}});
    j["norm_relation"] = rel;
    if (bundle) {
        j["lambda_star"] = detail::number_or_null(bundle->lambda_star);
        j["dual_lambda_star"] = detail::number_or_null(bundle->dual_lambda_star);
    }
    Json prov;
    prov["c_m"] = "sum_{k=1}^T k^(m-1) from telescoping and Hoelder; valid for m >= 1";
    prov["c_m_sharp"] = sharp ? "multistart ascent on the Rayleigh-type quotient; exact T/2 for m = 1"
                              : "not computed for T > 200";
    prov["C1"] = p.min() >= 2.0 ? "(T+1)^((2-p-)/2)" : "1 (p- < 2)";
    prov["C2"] = "T+1";
    prov["norm_relation"] = "(T+1)^((2-m)/(2m)) ||x|| <= (sum |Dx|^m)^(1/m) <= (T+1)^(1/m) ||x||";
    j["provenance"] = prov;
    out.text = dump(j);
    return out;
}

inline Output cmd_depend(const config::Config& c, Format format) {
    const DependenceReport rep = run_dependence(c.dependence_plan(), c.solver);
    Output out;
    out.exit_code = rep.verdict == DependenceVerdict::Convergent ? Success : NumericalWarning;
    if (format == Format::Csv) {
        CsvTable t({"n", "delta_n", "norm_xn", "dist_to_limit", "converged"});
        for (const auto& r : rep.records)
            t.row({std::to_string(r.n), csv_number(r.delta), csv_number(r.norm_xn), csv_number(r.dist_to_limit),
                   csv_bool(r.converged)});
        out.text = t.str() + "# gamma=" + csv_number(rep.gamma) + " verdict=" + to_string(rep.verdict) + "\n";
        return out;
    }
    Json j;
    j["command"] = "depend";
    j["instance"] = config::echo(c);
    Json recs = Json::array();
    for (const auto& r : rep.records)
        recs.push_back(Json{{"n", r.n},
                            {"delta_n", r.delta},
                            {"norm_xn", r.norm_xn},
                            {"dist_to_limit", r.dist_to_limit},
                            {"converged", r.converged}});
    j["records"] = recs;
    j["limit"] = config::to_json(rep.limit.values());
    j["limit_converged"] = rep.limit_converged;
    j["limit_residual"] = rep.limit_residual;
    j["gamma"] = rep.gamma;
    j["a_priori_radius"] = rep.a_priori_radius ? Json(*rep.a_priori_radius) : Json(nullptr);
    j["verdict"] = to_string(rep.verdict);
    j["failing_n"] = rep.failing_n ? Json(*rep.failing_n) : Json(nullptr);
    j["subsequence_convergent"] = rep.subsequence_convergent;
    out.text = dump(j);
    return out;
}

inline Output cmd_sweep(const config::Config& c, Format format) {
    if (!c.sweep) throw InputError("config has no sweep block");
    const auto rows = regime_sweep([&c](double l) { return c.instance_with_lambda(l); }, *c.sweep, c.solver);
    Output out;
    bool any_ok = false;
    for (const auto& r : rows) any_ok = any_ok || (r.error.empty() && r.converged);
    out.exit_code = any_ok ? Success : NumericalWarning;
    auto regime = [](const SweepRow& r) { return r.regime ? to_string(r.regime->primal) : "unclassified"; };
    if (format == Format::Csv) {
        CsvTable t({"lambda", "regime", "converged", "unique_consistent", "final_energy", "residual"});
        for (const auto& r : rows)
            t.row({csv_number(r.lambda), regime(r), csv_bool(r.converged), csv_bool(r.unique_consistent),
                   csv_number(r.final_energy), csv_number(r.residual)});
        out.text = t.str();
        return out;
    }
    Json j;
    j["command"] = "sweep";
    j["instance"] = config::echo(c);
    Json arr = Json::array();
    for (const auto& r : rows) {
        Json e{{"lambda", r.lambda}, {"regime", regime(r)}};
        e["lambda_star"] = detail::number_or_null(r.lambda_star);
        e["converged"] = r.converged;
        e["unique_consistent"] = r.unique_consistent;
        e["status"] = to_string(r.status);
        e["final_energy"] = detail::number_or_null(r.final_energy);
        e["residual"] = detail::number_or_null(r.residual);
        e["error"] = r.error.empty() ? Json(nullptr) : Json(r.error);
        arr.push_back(e);
    }
    j["rows"] = arr;
    out.text = dump(j);
    return out;
}

}  // namespace plap::cli
