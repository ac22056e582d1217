// plap: configuration-driven front end for the discrete p(k)-Laplacian solver.
//
//   plap solve     --config FILE [--out DIR] [--tol R] [--max-iter N] [--starts N] [--seed N] [--format json|csv]
//   plap check     --config FILE
//   plap constants (--config FILE | --T N [--p P...]) [--m M...]
//   plap depend    --config FILE
//   plap sweep     --config FILE

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "plap/cli.hpp"

namespace {

struct Common {
    std::string config;
    std::string out;
    std::optional<double> tol;
    std::optional<long> max_iter;
    std::optional<int> starts;
    std::optional<std::uint64_t> seed;
    std::string format;
};

void add_common(CLI::App* cmd, Common& c, bool config_required) {
    auto* opt = cmd->add_option("--config", c.config, "configuration document (JSON)");
    if (config_required) opt->required();
    cmd->add_option("--out", c.out, "write the output into this directory instead of stdout");
    cmd->add_option("--tol", c.tol, "gradient max-norm tolerance");
    cmd->add_option("--max-iter", c.max_iter, "iteration cap per solve");
    cmd->add_option("--starts", c.starts, "random multistart starts");
    cmd->add_option("--seed", c.seed, "multistart seed");
    cmd->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

plap::config::Config load(const Common& c) {
    auto cfg = plap::config::load(c.config);
    if (c.tol) cfg.solver.tolerance = *c.tol;
    if (c.max_iter) cfg.solver.max_iterations = *c.max_iter;
    if (c.starts) cfg.solver.starts = *c.starts;
    if (c.seed) cfg.solver.seed = *c.seed;
    cfg.solver.validate();
    return cfg;
}

plap::cli::Format format_of(const Common& c, plap::cli::Format fallback) {
    if (c.format.empty()) return fallback;
    return c.format == "csv" ? plap::cli::Format::Csv : plap::cli::Format::Json;
}

int emit(const plap::cli::Output& out, const Common& c, const std::string& name, plap::cli::Format f) {
    if (c.out.empty()) {
        std::cout << out.text;
        return out.exit_code;
    }
    std::filesystem::create_directories(c.out);
    const auto path = std::filesystem::path(c.out) / (name + (f == plap::cli::Format::Csv ? ".csv" : ".json"));
    std::ofstream file(path, std::ios::binary);
    file << out.text;
    if (!file) throw std::runtime_error("cannot write " + path.string());
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    using plap::cli::Format;
    CLI::App app{"Discrete anisotropic p(k)-Laplacian Dirichlet problems: solve, check, constants, dependence, sweep"};
    app.require_subcommand(1);

    std::map<std::string, Common> common;
    auto* solve = app.add_subcommand("solve", "minimise the energy and report the solution");
    auto* check = app.add_subcommand("check", "sample hypotheses H1-H4 and classify the regime");
    auto* constants = app.add_subcommand("constants", "embedding and coercivity constants");
    auto* depend = app.add_subcommand("depend", "continuous dependence on the parameter u");
    auto* sweep = app.add_subcommand("sweep", "lambda sweep across the regimes");
    for (auto* cmd : {solve, check, depend, sweep}) add_common(cmd, common[cmd->get_name()], true);
    add_common(constants, common["constants"], false);

    int T = 0;
    std::vector<double> p_values{2.0};
    std::vector<double> m_list{1.0, 2.0};
    constants->add_option("--T", T, "number of interior nodes");
    constants->add_option("--p", p_values, "exponent p: one value or T+2 values")->delimiter(',');
    constants->add_option("--m", m_list, "embedding exponents m >= 1")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : plap::cli::InputFailure;
    }

    try {
        if (*solve) {
            const auto& c = common["solve"];
            const Format f = format_of(c, Format::Json);
            return emit(plap::cli::cmd_solve(load(c), f), c, "solve", f);
        }
        if (*check) {
            const auto& c = common["check"];
            const Format f = format_of(c, Format::Json);
            return emit(plap::cli::cmd_check(load(c), f), c, "check", f);
        }
        if (*depend) {
            const auto& c = common["depend"];
            const Format f = format_of(c, Format::Csv);
            return emit(plap::cli::cmd_depend(load(c), f), c, "depend", f);
        }
        if (*sweep) {
            const auto& c = common["sweep"];
            const Format f = format_of(c, Format::Csv);
            return emit(plap::cli::cmd_sweep(load(c), f), c, "sweep", f);
        }
        const auto& c = common["constants"];
        plap::cli::ConstantsRequest req;
        req.m = m_list;
        if (!c.config.empty()) {
            const auto cfg = load(c);
            req.T = cfg.T;
            req.p = cfg.p;
            req.instance = cfg.instance();
            if (constants->count("--T") || constants->count("--p"))
                throw plap::InputError("--T and --p cannot be combined with --config");
        } else {
            if (!constants->count("--T")) throw plap::InputError("constants needs --T or --config");
            req.T = T;
            req.p = p_values;
        }
        const Format f = format_of(c, Format::Json);
        return emit(plap::cli::cmd_constants(req, f), c, "constants", f);
    } catch (const plap::config::ConfigError& e) {
        std::cerr << "config error:\n";
        for (const auto& p : e.problems()) std::cerr << "  " << p << "\n";
        return plap::cli::InputFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return plap::cli::InputFailure;
    } catch (const std::domain_error& e) {
        std::cerr << "evaluation error: " << e.what() << "\n";
        return plap::cli::InputFailure;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return plap::cli::NumericalWarning;
    }
}
