// Command-line front end: solve | simulate | enumerate | verify.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure
// (non-convergence or cap leakage beyond tolerance), 3 verification
// failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "espr/config.hpp"
#include "espr/emit.hpp"
#include "espr/graph_io.hpp"
#include "espr/kernel.hpp"
#include "espr/montecarlo.hpp"
#include "espr/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

struct CommonOpts {
    std::string config_path;
    std::string mode; // exact | float; default depends on the subcommand
    std::string out_dir = ".";
    std::string format = "csv";
    int workers = 0; // 0: take ESPR_WORKERS or 1
};

int effective_workers(const CommonOpts& c) {
    if (c.workers > 0) return c.workers;
    if (const char* env = std::getenv("ESPR_WORKERS")) {
        try {
            const int w = std::stoi(env);
            if (w >= 1) return w;
        } catch (const std::exception&) {
            throw espr::ConfigError("ESPR_WORKERS: not a positive integer");
        }
        throw espr::ConfigError("ESPR_WORKERS: not a positive integer");
    }
    return 1;
}

void check_mode(const std::string& mode, bool exact_allowed) {
    if (mode != "exact" && mode != "float")
        throw espr::ConfigError("field mode: expected exact|float, got '" + mode + "'");
    if (mode == "exact" && !exact_allowed)
        throw espr::ConfigError(
            "field mode: exact arithmetic applies to enumerate/verify; this command is float-only");
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

espr::Graph load_graph_or_config_error(const std::string& path) {
    try {
        return espr::load_edge_list(path);
    } catch (const std::runtime_error& e) {
        throw espr::ConfigError(e.what());
    }
}

espr::Config load_config(const CommonOpts& common,
                         const std::map<std::string, std::string>& overrides) {
    espr::Config cfg;
    if (!common.config_path.empty()) cfg = espr::Config::load(common.config_path);
    for (const auto& [qualified, value] : overrides) {
        const auto dot = qualified.find('.');
        cfg.set(qualified.substr(0, dot), qualified.substr(dot + 1), value);
    }
    return cfg;
}

std::map<std::string, std::string> provenance(const espr::Config& cfg, const CommonOpts& c) {
    auto kv = cfg.entries();
    kv["mode"] = c.mode;
    return kv;
}

espr::SimConfig sim_from_config(const espr::Config& cfg) {
    espr::SimConfig sim;
    sim.rule = espr::model_from_config<double>(cfg);
    sim.t_max = cfg.get_long("simulation", "t_max", 1000);
    sim.trials = cfg.get_long("simulation", "trials", 1);
    sim.seed = static_cast<std::uint64_t>(cfg.get_long("simulation", "seed", 1));
    if (cfg.has("simulation", "burn_in"))
        sim.burn_in = cfg.get_long("simulation", "burn_in", 0);
    if (auto path = cfg.get("simulation", "initial_graph"))
        sim.initial_graph = load_graph_or_config_error(*path);
    sim.cap_sizes = cfg.get_string("simulation", "cap_sizes", "false") == "true";
    try {
        sim.validate();
    } catch (const std::invalid_argument& e) {
        throw espr::ConfigError(std::string("field simulation: ") + e.what());
    }
    return sim;
}

int cmd_solve(const CommonOpts& common, const espr::Config& cfg) {
    check_mode(common.mode, /*exact_allowed=*/false);
    const auto rule = espr::model_from_config<double>(cfg);
    const double tol = cfg.get_double("solver", "tol", 1e-10);
    const long max_iters = cfg.get_long("solver", "max_iters", 200000);
    if (tol <= 0) throw espr::ConfigError("field solver.tol: must be positive");
    if (max_iters < 1) throw espr::ConfigError("field solver.max_iters: must be >= 1");

    const auto result = espr::steady_state(
        rule, espr::StateDistribution<double>::complete_graph(rule.n_floor), tol, max_iters);

    const auto kv = provenance(cfg, common);
    const fs::path out(common.out_dir);
    if (common.format == "json") {
        auto j = espr::degree_table_json(result.degree_marginal, kv);
        j["diagnostics"] = espr::to_json(result.diagnostics);
        write_file(out / "degree_distribution.json", j.dump(2) + "\n");
    } else {
        write_file(out / "degree_distribution.csv",
                   espr::degree_table_csv(result.degree_marginal, kv));
        write_file(out / "diagnostics.json", espr::to_json(result.diagnostics).dump(2) + "\n");
    }
    write_file(out / "state_distribution.txt",
               espr::provenance_header(kv) + espr::format_state_distribution(result.state));
    std::cout << "solve: iterations=" << result.diagnostics.iterations
              << " residual=" << espr::format_double(result.diagnostics.residual)
              << " converged=" << (result.diagnostics.converged ? "yes" : "no")
              << " leaked_last_step="
              << espr::format_double(result.diagnostics.leaked_last_step) << "\n";

    if (!result.diagnostics.converged) {
        std::cerr << "solve: did not converge within max_iters\n";
        return kExitNumerical;
    }
    if (cfg.has("solver", "leak_tol")) {
        const double leak_tol = cfg.get_double("solver", "leak_tol", 0.0);
        if (result.diagnostics.leaked_last_step > leak_tol) {
            std::cerr << "solve: cap leakage " << result.diagnostics.leaked_last_step
                      << " exceeds solver.leak_tol; raise model.n_cap\n";
            return kExitNumerical;
        }
    }
    return kExitOk;
}

int cmd_simulate(const CommonOpts& common, const espr::Config& cfg) {
    check_mode(common.mode, /*exact_allowed=*/false);
    const auto sim = sim_from_config(cfg);
    const auto emp = espr::empirical_degree_distribution(sim, effective_workers(common));

    const auto kv = provenance(cfg, common);
    const fs::path out(common.out_dir);
    if (common.format == "json") {
        nlohmann::json j;
        j["tool"] = espr::kToolVersion;
        j["config_hash"] = espr::config_hash(kv);
        j["config"] = kv;
        j["snapshots"] = emp.snapshots;
        auto& rows = j["rows"] = nlohmann::json::array();
        for (Eigen::Index k = 0; k < emp.probs.size(); ++k)
            rows.push_back({{"k", k},
                            {"P_k", emp.probs[k]},
                            {"std_error", emp.std_error[k]}});
        write_file(out / "empirical_distribution.json", j.dump(2) + "\n");
    } else {
        write_file(out / "empirical_distribution.csv", espr::empirical_table_csv(emp, kv));
    }
    std::cout << "simulate: trials=" << sim.trials << " snapshots=" << emp.snapshots << "\n";
    return kExitOk;
}

template <espr::ProbabilityScalar S>
int enumerate_with(const CommonOpts& common, const espr::Config& cfg,
                   const espr::Graph& graph, espr::DeletionRule rule) {
    const auto ensemble = espr::GraphEnsemble<S>::singleton(graph);
    const auto outcome = espr::enumerate_deletion_step(ensemble, rule);
    const auto avg = espr::average_degree_distribution(outcome, graph.node_count());

    const auto kv = provenance(cfg, common);
    const fs::path out(common.out_dir);
    write_file(out / "ensemble.txt", espr::format_ensemble(outcome));
    if (common.format == "json") {
        write_file(out / "average_distribution.json",
                   espr::degree_table_json(avg, kv).dump(2) + "\n");
    } else {
        write_file(out / "average_distribution.csv", espr::degree_table_csv(avg, kv));
    }
    std::cout << "enumerate: " << outcome.size() << " outcomes\n";
    return kExitOk;
}

int cmd_enumerate(const CommonOpts& common, const espr::Config& cfg,
                  const std::string& graph_path, const std::string& delete_rule) {
    check_mode(common.mode, /*exact_allowed=*/true);
    const auto graph = load_graph_or_config_error(graph_path);
    const auto rule = espr::parse_deletion_rule(delete_rule, "delete");
    if (common.mode == "exact")
        return enumerate_with<espr::Rational>(common, cfg, graph, rule);
    return enumerate_with<double>(common, cfg, graph, rule);
}

int cmd_verify_theorem1(const CommonOpts& common, const std::string& graph_path,
                        const std::string& delete_rule) {
    check_mode(common.mode, /*exact_allowed=*/true);
    const auto graph = load_graph_or_config_error(graph_path);
    const auto rule = espr::parse_deletion_rule(delete_rule, "delete");
    const auto report = common.mode == "exact"
                            ? espr::verify_theorem1<espr::Rational>(graph, rule)
                            : espr::verify_theorem1<double>(graph, rule);
    if (common.format == "json") std::cout << espr::to_json(report).dump(2) << "\n";
    else std::cout << espr::render_text(report);
    return report.pass ? kExitOk : kExitVerification;
}

int cmd_verify_theorem2(const CommonOpts& common, int n_max) {
    if (n_max < 2) throw espr::ConfigError("field n_max: must be >= 2");
    const auto report = espr::verify_theorem2(n_max);
    if (common.format == "json") std::cout << espr::to_json(report).dump(2) << "\n";
    else std::cout << espr::render_text(report);
    return report.all_equal ? kExitOk : kExitVerification;
}

int cmd_verify_compare(const CommonOpts& common, const espr::Config& cfg,
                       const std::string& sim_config_path, double tv_threshold) {
    const auto rule = espr::model_from_config<double>(cfg);
    espr::Config sim_cfg = cfg;
    if (!sim_config_path.empty()) {
        sim_cfg = espr::Config::load(sim_config_path);
        const auto sim_rule = espr::model_from_config<double>(sim_cfg);
        if (!(sim_rule == rule))
            throw espr::ConfigError("field model: kernel config and simulation config disagree");
    }
    const auto sim = sim_from_config(sim_cfg);

    espr::CompareOptions opts;
    opts.tv_threshold = tv_threshold;
    opts.workers = effective_workers(common);
    opts.solver_tol = cfg.get_double("solver", "tol", 1e-10);
    opts.solver_max_iters = cfg.get_long("solver", "max_iters", 200000);
    // Degree-proportional decay runs through the mean-field closure;
    // its accuracy is an empirical finding, so TV is informational.
    opts.enforce_threshold = rule.del == espr::DeletionRule::Uniform;

    const auto report = espr::compare_methods(rule, sim, opts);
    if (common.format == "json") std::cout << espr::to_json(report).dump(2) << "\n";
    else std::cout << espr::render_text(report);
    if (!report.solver.converged) return kExitNumerical;
    return report.pass ? kExitOk : kExitVerification;
}

void add_common_flags(CLI::App* sub, CommonOpts& common, const std::string& default_mode) {
    common.mode = default_mode;
    sub->add_option("--config", common.config_path, "configuration file");
    sub->add_option("--mode", common.mode, "arithmetic mode: exact|float");
    sub->add_option("--workers", common.workers, "worker threads (default ESPR_WORKERS or 1)");
    sub->add_option("--out", common.out_dir, "output directory");
    sub->add_option("--format", common.format, "output format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"degree distributions of evolving networks: state-transition kernel, "
                 "exhaustive enumeration, and Monte Carlo"};
    app.require_subcommand(1);

    // Flag values override config-file keys of the same name.
    std::map<std::string, std::string> overrides;
    auto track = [&overrides](CLI::App* sub, const std::string& qualified) {
        const auto key = qualified.substr(qualified.find('.') + 1);
        sub->add_option("--" + key, [&overrides, qualified](const std::vector<std::string>& vals) {
                overrides[qualified] = vals.front();
                return true;
            },
            "overrides " + qualified);
    };

    CommonOpts solve_common, sim_common, enum_common, t1_common, t2_common, cmp_common;

    auto* solve = app.add_subcommand("solve", "iterate the kernel to a steady-state marginal");
    add_common_flags(solve, solve_common, "float");
    for (const auto* key : {"model.p", "model.m", "model.attach", "model.delete",
                            "model.n_floor", "model.n_cap", "solver.tol",
                            "solver.max_iters", "solver.leak_tol"})
        track(solve, key);

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo evolution of concrete networks");
    add_common_flags(simulate, sim_common, "float");
    for (const auto* key : {"model.p", "model.m", "model.attach", "model.delete",
                            "model.n_floor", "model.n_cap", "simulation.t_max",
                            "simulation.trials", "simulation.seed", "simulation.burn_in",
                            "simulation.initial_graph", "simulation.cap_sizes"})
        track(simulate, key);

    std::string enum_graph, enum_delete = "uniform";
    auto* enumerate = app.add_subcommand("enumerate", "exhaustive one-step deletion ensemble");
    add_common_flags(enumerate, enum_common, "exact");
    enumerate->add_option("--graph", enum_graph, "edge-list file")->required();
    enumerate->add_option("--delete", enum_delete, "deletion rule: uniform|preferential");

    auto* verify = app.add_subcommand("verify", "built-in identity and cross-method checks");
    verify->require_subcommand(1);

    std::string t1_graph, t1_delete = "preferential";
    auto* theorem1 = verify->add_subcommand(
        "theorem1", "one-step enumeration average vs kernel marginal");
    add_common_flags(theorem1, t1_common, "exact");
    theorem1->add_option("--graph", t1_graph, "edge-list file")->required();
    theorem1->add_option("--delete", t1_delete, "deletion rule: uniform|preferential");

    int t2_n_max = 50;
    auto* theorem2 = verify->add_subcommand(
        "theorem2", "uniform-deletion reduction of the extended update, exact");
    add_common_flags(theorem2, t2_common, "exact");
    theorem2->add_option("--n_max", t2_n_max, "largest network size to check");

    std::string cmp_sim_config;
    double cmp_tv_threshold = 0.02;
    auto* compare = verify->add_subcommand("compare", "kernel steady state vs Monte Carlo");
    add_common_flags(compare, cmp_common, "float");
    compare->add_option("--sim-config", cmp_sim_config,
                        "separate simulation config (model section must match)");
    compare->add_option("--tv_threshold", cmp_tv_threshold, "total-variation pass threshold");
    for (const auto* key : {"model.p", "model.m", "model.attach", "model.delete",
                            "model.n_floor", "model.n_cap", "solver.tol", "solver.max_iters",
                            "simulation.t_max", "simulation.trials", "simulation.seed",
                            "simulation.burn_in", "simulation.initial_graph",
                            "simulation.cap_sizes"})
        track(compare, key);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_common, load_config(solve_common, overrides));
        if (simulate->parsed())
            return cmd_simulate(sim_common, load_config(sim_common, overrides));
        if (enumerate->parsed())
            return cmd_enumerate(enum_common, load_config(enum_common, overrides), enum_graph,
                                 enum_delete);
        if (theorem1->parsed()) return cmd_verify_theorem1(t1_common, t1_graph, t1_delete);
        if (theorem2->parsed()) return cmd_verify_theorem2(t2_common, t2_n_max);
        if (compare->parsed())
            return cmd_verify_compare(cmp_common, load_config(cmp_common, overrides),
                                      cmp_sim_config, cmp_tv_threshold);
    } catch (const espr::ConfigError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitValidation;
}
