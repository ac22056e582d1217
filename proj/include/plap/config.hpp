#pragma once

// JSON configuration documents for the command-line front end. Needs the
// single-header nlohmann json on the include path; not part of plap.hpp.
//
//   {
//     "T": 3,
//     "p": 2,                     scalar or T+2 values
//     "h": [1, 1, 1, 1, 1],       scalar or T+2 values
//     "lambda": 1,
//     "f": {"family": "canonical", "a": 0, "b": 1, "q": 1, "rho": 0},
//       or {"family": "expression", "f": "-powq(x,3)+1", "F": "...", "growth": {"a":..,"b":..,"q":..}}
//     "u": [0, 0, 0],             T values, a scalar, or {"generator": ...}
//     "solver": {...}, "check": {...}, "dependence": {...}, "sweep": {"lambda": [...]}
//   }

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/plap.hpp"

namespace plap::config {

using Json = nlohmann::ordered_json;

/// Every violated invariant of a document, one per line, each prefixed by its path.
class ConfigError : public InputError {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : InputError(join(problems)), problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const { return problems_; }

private:
    static std::string join(const std::vector<std::string>& p) {
        std::string s;
        for (const auto& e : p) s += (s.empty() ? "" : "\n") + e;
        return s;
    }
    std::vector<std::string> problems_;
};

enum class Schedule { Harmonic, Constant, Explicit };

struct DependenceBlock {
    std::vector<double> direction;
    int N = 0;
    Schedule schedule = Schedule::Harmonic;
    double constant = 0.0;  ///< for Schedule::Constant
    std::vector<double> deltas;
    double tolerance = 0.05;
};

struct Config {
    int T = 0;
    std::vector<double> p, h;
    double lambda = 0.0;
    std::string family;  ///< "canonical" or "expression"
    std::vector<double> a, b, q;
    double rho = 0.0;
    std::string f_source;
    std::optional<std::string> F_source;
    bool has_growth = false;  ///< a, b, q hold the declared growth of an expression
    std::vector<double> u;
    SolverOptions solver;
    SamplingPlan sampling;
    std::optional<DependenceBlock> dependence;
    std::optional<std::vector<double>> sweep;

    ProblemInstance instance() const { return instance_with_lambda(lambda); }

    ProblemInstance instance_with_lambda(double l) const {
        return ProblemInstance(ExponentField(T, p), WeightField(T, h), l, nonlinearity(), ParameterFunction(T, u));
    }

    Nonlinearity nonlinearity() const {
        if (family == "canonical") return CanonicalFamily(GrowthData(T, a, b, q), rho);
        std::optional<GrowthData> g;
        if (has_growth) g.emplace(T, a, b, q);
        return ExpressionNonlinearity(f_source, F_source, std::move(g));
    }

    DependencePlan dependence_plan() const {
        if (!dependence) throw InputError("config has no dependence block");
        const auto& d = *dependence;
        std::vector<double> deltas = d.deltas;
        if (d.schedule == Schedule::Harmonic) deltas = harmonic_schedule(d.N);
        if (d.schedule == Schedule::Constant) deltas.assign(static_cast<std::size_t>(d.N), d.constant);
        DependencePlan plan{instance(), ParameterFunction(T, d.direction), std::move(deltas)};
        plan.distance_tolerance = d.tolerance;
        return plan;
    }
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

class Reader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    void only_keys(const Json& j, const std::string& path, std::initializer_list<const char*> keys) {
        std::set<std::string> allowed(keys.begin(), keys.end());
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown key");
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    std::optional<double> number(const Json& j, const std::string& path) {
        if (!j.is_number()) {
            fail(path, "expected a number");
            return std::nullopt;
        }
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            fail(path, "expected a finite number");
            return std::nullopt;
        }
        return v;
    }

    std::optional<long> integer(const Json& j, const std::string& path) {
        if (j.is_number_integer()) return j.get<long>();
        if (j.is_number_float()) {
            const double v = j.get<double>();
            if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9e15) return static_cast<long>(v);
        }
        fail(path, "expected an integer");
        return std::nullopt;
    }

    std::optional<std::string> required_string(const Json& obj, const char* key, const std::string& path) {
        if (!obj.contains(key)) {
            fail(path, "missing");
            return std::nullopt;
        }
        return string(obj[key], path);
    }

    std::optional<std::string> string(const Json& j, const std::string& path) {
        if (!j.is_string()) {
            fail(path, "expected a string");
            return std::nullopt;
        }
        return j.get<std::string>();
    }

    /// A scalar broadcast to n entries, or an array of exactly n numbers. n = 0 means unknown.
    std::optional<std::vector<double>> numbers(const Json& j, const std::string& path, std::size_t n) {
        if (j.is_number()) {
            auto v = number(j, path);
            if (!v) return std::nullopt;
            return std::vector<double>(std::max<std::size_t>(n, 1), *v);
        }
        if (!j.is_array()) {
            fail(path, "expected a number or an array of numbers");
            return std::nullopt;
        }
        if (n != 0 && j.size() != n) {
            fail(path, "expected " + std::to_string(n) + " entries, got " + std::to_string(j.size()));
            return std::nullopt;
        }
        std::vector<double> out;
        bool ok = true;
        for (std::size_t i = 0; i < j.size(); ++i) {
            auto v = number(j[i], path + "[" + std::to_string(i) + "]");
            ok = ok && v.has_value();
            out.push_back(v.value_or(0.0));
        }
        if (!ok) return std::nullopt;
        return out;
    }

    /// Elementwise predicate; a broadcast scalar is reported once without an index.
    template <class Pred>
    void each(const Json& j, const std::vector<double>& v, const std::string& path, std::size_t first_index,
              const std::string& name, const std::string& msg, Pred ok) {
        if (j.is_number()) {
            if (!v.empty() && !ok(v[0])) fail(path, msg + " (" + name + " = " + fmt(v[0]) + ")");
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!ok(v[i]))
                fail(path + "[" + std::to_string(i) + "]",
                     msg + " (" + name + "(" + std::to_string(i + first_index) + ") = " + fmt(v[i]) + ")");
    }
};

inline std::vector<double> generate_u(Reader& r, const Json& j, const std::string& path, int T) {
    std::vector<double> u(static_cast<std::size_t>(std::max(T, 0)), 0.0);
    auto gen = r.required_string(j, "generator", path + ".generator");
    if (!gen) return u;
    auto get = [&](const char* key, double fallback) {
        if (!j.contains(key)) return fallback;
        return r.number(j[key], path + "." + key).value_or(fallback);
    };
    if (*gen == "constant") {
        r.only_keys(j, path, {"generator", "value"});
        const double c = get("value", 0.0);
        for (double& e : u) e = c;
    } else if (*gen == "sine") {
        r.only_keys(j, path, {"generator", "amplitude", "frequency", "phase", "offset"});
        const double A = get("amplitude", 1.0), w = get("frequency", 1.0), ph = get("phase", 0.0),
                     c = get("offset", 0.0);
        for (int k = 1; k <= T; ++k) u[k - 1] = c + A * std::sin(w * k + ph);
    } else if (*gen == "linear") {
        r.only_keys(j, path, {"generator", "slope", "intercept"});
        const double s = get("slope", 1.0), c = get("intercept", 0.0);
        for (int k = 1; k <= T; ++k) u[k - 1] = c + s * k;
    } else {
        r.fail(path + ".generator", "unknown generator \"" + *gen + "\" (expected constant, sine or linear)");
    }
    return u;
}

inline void read_growth(Reader& r, const Json& j, const std::string& path, std::size_t n, Config& c, bool required) {
    auto field = [&](const char* key, double fallback, std::vector<double>& out) {
        if (!j.contains(key)) {
            if (required) r.fail(Reader::join(path, key), "missing");
            out.assign(std::max<std::size_t>(n, 1), fallback);
            return;
        }
        auto v = r.numbers(j[key], Reader::join(path, key), n);
        if (v) out = *v;
    };
    field("a", 0.0, c.a);
    field("b", 0.0, c.b);
    field("q", 1.0, c.q);
    if (j.contains("a"))
        r.each(j["a"], c.a, Reader::join(path, "a"), 1, "a", "a must be nonnegative", [](double v) { return v >= 0.0; });
    if (j.contains("q"))
        r.each(j["q"], c.q, Reader::join(path, "q"), 1, "q", "q must be at least 1", [](double v) { return v >= 1.0; });
}

inline void read_solver(Reader& r, const Json& j, SolverOptions& s) {
    const std::string path = "solver";
    if (!j.is_object()) {
        r.fail(path, "expected an object");
        return;
    }
    r.only_keys(j, path,
                {"tolerance", "max_iterations", "starts", "seed", "radius", "method", "initial_step", "backtracking",
                 "armijo"});
    auto num = [&](const char* key, double& out) {
        if (j.contains(key))
            if (auto v = r.number(j[key], path + "." + key)) out = *v;
    };
    num("tolerance", s.tolerance);
    num("radius", s.radius);
    num("initial_step", s.initial_step);
    num("backtracking", s.backtracking);
    num("armijo", s.armijo);
    if (j.contains("max_iterations"))
        if (auto v = r.integer(j["max_iterations"], path + ".max_iterations")) s.max_iterations = *v;
    if (j.contains("starts"))
        if (auto v = r.integer(j["starts"], path + ".starts")) s.starts = static_cast<int>(*v);
    if (j.contains("seed")) {
        if (auto v = r.integer(j["seed"], path + ".seed")) {
            if (*v < 0) r.fail(path + ".seed", "seed must be nonnegative");
            else s.seed = static_cast<std::uint64_t>(*v);
        }
    }
    if (j.contains("method")) {
        if (auto m = r.string(j["method"], path + ".method")) {
            if (*m == "gradient-descent") s.method = Method::GradientDescent;
            else if (*m == "newton") s.method = Method::Newton;
            else r.fail(path + ".method", "unknown method \"" + *m + "\" (expected gradient-descent or newton)");
        }
    }
}

inline void check_solver(Reader& r, const SolverOptions& s) {
    try {
        s.validate();
    } catch (const InputError& e) {
        r.fail("solver", e.what());
    }
}

}  // namespace detail

/// Parses and validates a document; throws ConfigError listing every problem found.
inline Config parse(const Json& doc) {
    detail::Reader r;
    Config c;
    if (!doc.is_object()) throw ConfigError({"(root): expected an object"});
    r.only_keys(doc, "",
                {"T", "p", "h", "lambda", "f", "u", "solver", "check", "dependence", "sweep", "description"});

    bool T_ok = false;
    if (!doc.contains("T")) {
        r.fail("T", "missing");
    } else if (auto T = r.integer(doc["T"], "T")) {
        if (*T < 1) r.fail("T", "T must be a positive integer");
        else if (*T > 100000) r.fail("T", "T must not exceed 100000");
        else {
            c.T = static_cast<int>(*T);
            T_ok = true;
        }
    }
    const std::size_t nodes = T_ok ? static_cast<std::size_t>(c.T) + 2 : 0;
    const std::size_t interior = T_ok ? static_cast<std::size_t>(c.T) : 0;

    auto field = [&](const char* key, std::size_t n, std::vector<double>& out) -> const Json* {
        if (!doc.contains(key)) {
            r.fail(key, "missing");
            return nullptr;
        }
        if (auto v = r.numbers(doc[key], key, n)) {
            out = *v;
            return &doc[key];
        }
        return nullptr;
    };
    if (auto j = field("p", nodes, c.p))
        r.each(*j, c.p, "p", 0, "p", "p must exceed 1", [](double v) { return v > 1.0; });
    if (auto j = field("h", nodes, c.h))
        r.each(*j, c.h, "h", 0, "h", "h must be positive", [](double v) { return v > 0.0; });

    if (!doc.contains("lambda")) r.fail("lambda", "missing");
    else if (auto l = r.number(doc["lambda"], "lambda")) {
        if (!(*l > 0.0)) r.fail("lambda", "lambda must be positive (lambda = " + detail::fmt(*l) + ")");
        c.lambda = *l;
    }

    if (!doc.contains("f")) {
        r.fail("f", "missing");
    } else if (!doc["f"].is_object()) {
        r.fail("f", "expected an object");
    } else {
        const Json& f = doc["f"];
        auto fam = r.required_string(f, "family", "f.family");
        if (fam && *fam == "canonical") {
            c.family = *fam;
            r.only_keys(f, "f", {"family", "a", "b", "q", "rho"});
            detail::read_growth(r, f, "f", interior, c, true);
            c.has_growth = true;
            if (f.contains("rho"))
                if (auto rho = r.number(f["rho"], "f.rho")) {
                    c.rho = *rho;
                    if (!(c.rho >= 0.0 && c.rho < 1.0)) r.fail("f.rho", "rho must lie in [0, 1) (rho = " + detail::fmt(c.rho) + ")");
                }
        } else if (fam && *fam == "expression") {
            c.family = *fam;
            r.only_keys(f, "f", {"family", "f", "F", "growth"});
            auto parse_src = [&](const char* key) -> std::optional<std::string> {
                auto s = r.string(f[key], std::string("f.") + key);
                if (!s) return std::nullopt;
                try {
                    expr::parse_expression(*s);
                } catch (const std::invalid_argument& e) {
                    r.fail(std::string("f.") + key, e.what());
                }
                return s;
            };
            if (!f.contains("f")) r.fail("f.f", "missing");
            else if (auto s = parse_src("f")) c.f_source = *s;
            if (f.contains("F")) c.F_source = parse_src("F");
            if (f.contains("growth")) {
                if (!f["growth"].is_object()) {
                    r.fail("f.growth", "expected an object");
                } else {
                    r.only_keys(f["growth"], "f.growth", {"a", "b", "q"});
                    detail::read_growth(r, f["growth"], "f.growth", interior, c, true);
                    c.has_growth = true;
                }
            }
        } else if (fam) {
            r.fail("f.family", "unknown family \"" + *fam + "\" (expected canonical or expression)");
        }
    }

    if (!doc.contains("u")) {
        c.u.assign(interior, 0.0);
    } else if (doc["u"].is_object()) {
        c.u = detail::generate_u(r, doc["u"], "u", c.T);
    } else if (auto v = r.numbers(doc["u"], "u", interior)) {
        c.u = *v;
    }

    if (doc.contains("solver")) detail::read_solver(r, doc["solver"], c.solver);
    detail::check_solver(r, c.solver);

    if (doc.contains("check")) {
        const Json& j = doc["check"];
        if (!j.is_object()) {
            r.fail("check", "expected an object");
        } else {
            r.only_keys(j, "check", {"x_radius", "x_count", "u_min", "u_max", "u_count"});
            auto num = [&](const char* k, double& out) {
                if (j.contains(k))
                    if (auto v = r.number(j[k], std::string("check.") + k)) out = *v;
            };
            auto cnt = [&](const char* k, int& out) {
                if (j.contains(k))
                    if (auto v = r.integer(j[k], std::string("check.") + k)) {
                        if (*v < 1 || *v > 100000) r.fail(std::string("check.") + k, "count must lie in [1, 100000]");
                        else out = static_cast<int>(*v);
                    }
            };
            num("x_radius", c.sampling.x_radius);
            num("u_min", c.sampling.u_min);
            num("u_max", c.sampling.u_max);
            cnt("x_count", c.sampling.x_count);
            cnt("u_count", c.sampling.u_count);
            if (!(c.sampling.x_radius > 0.0)) r.fail("check.x_radius", "radius must be positive");
            if (!(c.sampling.u_min <= c.sampling.u_max)) r.fail("check.u_min", "u_min must not exceed u_max");
        }
    }
    c.sampling.T = c.T;

    if (doc.contains("dependence")) {
        const Json& j = doc["dependence"];
        if (!j.is_object()) {
            r.fail("dependence", "expected an object");
        } else {
            r.only_keys(j, "dependence", {"direction", "N", "schedule", "tolerance"});
            DependenceBlock d;
            d.direction.assign(interior, 1.0);
            if (j.contains("direction"))
                if (auto v = r.numbers(j["direction"], "dependence.direction", interior)) d.direction = *v;
            if (j.contains("N"))
                if (auto n = r.integer(j["N"], "dependence.N")) d.N = static_cast<int>(*n);
            if (j.contains("tolerance"))
                if (auto t = r.number(j["tolerance"], "dependence.tolerance")) {
                    d.tolerance = *t;
                    if (!(*t > 0.0)) r.fail("dependence.tolerance", "tolerance must be positive");
                }
            const Json sched = j.contains("schedule") ? j["schedule"] : Json("harmonic");
            if (sched.is_string() && sched.get<std::string>() == "harmonic") {
                d.schedule = Schedule::Harmonic;
            } else if (sched.is_object() && sched.contains("constant") && sched.size() == 1) {
                d.schedule = Schedule::Constant;
                d.constant = r.number(sched["constant"], "dependence.schedule.constant").value_or(0.0);
            } else if (sched.is_array()) {
                d.schedule = Schedule::Explicit;
                if (auto v = r.numbers(sched, "dependence.schedule", 0)) d.deltas = *v;
                if (!j.contains("N")) d.N = static_cast<int>(d.deltas.size());
                else if (d.N != static_cast<int>(d.deltas.size()))
                    r.fail("dependence.N", "N disagrees with the length of the explicit schedule");
            } else {
                r.fail("dependence.schedule", "expected \"harmonic\", {\"constant\": value} or an array of numbers");
            }
            if (!j.contains("N") && d.schedule != Schedule::Explicit) r.fail("dependence.N", "missing");
            else if (d.N < 3) r.fail("dependence.N", "N must be at least 3");
            else if (d.N > 100000) r.fail("dependence.N", "N must not exceed 100000");
            for (std::size_t i = 1; i < d.deltas.size(); ++i)
                if (std::abs(d.deltas[i]) > std::abs(d.deltas[i - 1])) {
                    r.fail("dependence.schedule[" + std::to_string(i) + "]", "|delta_n| must be nonincreasing");
                    break;
                }
            c.dependence = std::move(d);
        }
    }

    if (doc.contains("sweep")) {
        const Json& j = doc["sweep"];
        if (!j.is_object()) {
            r.fail("sweep", "expected an object");
        } else {
            r.only_keys(j, "sweep", {"lambda"});
            if (!j.contains("lambda")) {
                r.fail("sweep.lambda", "missing");
            } else if (!j["lambda"].is_array() || j["lambda"].empty()) {
                r.fail("sweep.lambda", "expected a nonempty array of numbers");
            } else if (auto v = r.numbers(j["lambda"], "sweep.lambda", 0)) {
                for (std::size_t i = 0; i < v->size(); ++i)
                    if (!((*v)[i] > 0.0)) r.fail("sweep.lambda[" + std::to_string(i) + "]", "lambda must be positive");
                c.sweep = *v;
            }
        }
    }

    if (!r.errors.empty()) throw ConfigError(r.errors);
    try {
        (void)c.instance();
    } catch (const std::exception& e) {
        throw ConfigError({std::string("(instance): ") + e.what()});
    }
    return c;
}

inline Config parse_text(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError({std::string("(document): ") + e.what()});
    }
    return parse(doc);
}

inline Config load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open"});
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

inline Json to_json(std::span<const double> v) {
    Json a = Json::array();
    for (double e : v) a.push_back(e);
    return a;
}

inline const char* to_string(Method m) { return m == Method::Newton ? "newton" : "gradient-descent"; }

/// Fully expanded document; parse(echo(c)) describes the same instance and options.
inline Json echo(const Config& c) {
    Json j;
    j["T"] = c.T;
    j["p"] = to_json(c.p);
    j["h"] = to_json(c.h);
    j["lambda"] = c.lambda;
    Json f;
    f["family"] = c.family;
    if (c.family == "canonical") {
        f["a"] = to_json(c.a);
        f["b"] = to_json(c.b);
        f["q"] = to_json(c.q);
        f["rho"] = c.rho;
    } else {
        f["f"] = c.f_source;
        if (c.F_source) f["F"] = *c.F_source;
        if (c.has_growth) f["growth"] = Json{{"a", to_json(c.a)}, {"b", to_json(c.b)}, {"q", to_json(c.q)}};
    }
    j["f"] = f;
    j["u"] = to_json(c.u);
    const auto& s = c.solver;
    j["solver"] = Json{{"tolerance", s.tolerance},   {"max_iterations", s.max_iterations}, {"starts", s.starts},
                       {"seed", s.seed},             {"radius", s.radius},                 {"method", to_string(s.method)},
                       {"initial_step", s.initial_step}, {"backtracking", s.backtracking}, {"armijo", s.armijo}};
    j["check"] = Json{{"x_radius", c.sampling.x_radius}, {"x_count", c.sampling.x_count}, {"u_min", c.sampling.u_min},
                      {"u_max", c.sampling.u_max},       {"u_count", c.sampling.u_count}};
    if (c.dependence) {
        const auto& d = *c.dependence;
        Json dj;
        dj["direction"] = to_json(d.direction);
        dj["N"] = d.N;
        if (d.schedule == Schedule::Harmonic) dj["schedule"] = "harmonic";
        else if (d.schedule == Schedule::Constant) dj["schedule"] = Json{{"constant", d.constant}};
        else dj["schedule"] = to_json(d.deltas);
        dj["tolerance"] = d.tolerance;
        j["dependence"] = dj;
    }
    if (c.sweep) j["sweep"] = Json{{"lambda", to_json(*c.sweep)}};
    return j;
}

}  // namespace plap::config
