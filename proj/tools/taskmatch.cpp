#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "taskmatch/analysis/flow_lp.hpp"
#include "taskmatch/analysis/planner.hpp"
#include "taskmatch/analysis/thresholds.hpp"
#include "taskmatch/analysis/type_graph.hpp"
#include "taskmatch/analysis/y_set.hpp"
#include "taskmatch/engine/simulator.hpp"
#include "taskmatch/engine/sweep.hpp"
#include "taskmatch/ingest/csv.hpp"
#include "taskmatch/ingest/kmeans.hpp"
#include "taskmatch/ingest/priors.hpp"
#include "taskmatch/ingest/skills.hpp"
#include "taskmatch/ingest/table1.hpp"
#include "taskmatch/io/results.hpp"
#include "taskmatch/io/scenario_json.hpp"

namespace fs = std::filesystem;
using namespace taskmatch;

namespace {

struct PolicyFlags {
    std::string name = "greedy";
    int y_depth = 1;
    std::optional<double> epsilon;
    bool greedy_x = false;
    std::uint64_t policy_seed = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--policy", name, "random|greedy|np-greedy|bp-y|bp-eps|bp-feedback")
            ->check(CLI::IsMember({"random", "greedy", "np-greedy", "bp-y", "bp-eps",
                                   "bp-feedback"}));
        cmd->add_option("--y-depth", y_depth, "Posterior depth of the tracked set")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--epsilon", epsilon, "Cell diameter for bp-eps, in (0, 2]");
        cmd->add_flag("--greedy-x", greedy_x, "Serve the virtual queue greedily");
        cmd->add_option("--policy-seed", policy_seed, "Extra seed for policy tie-breaking");
    }

    PolicySpec build(const Scenario& scenario) const {
        PolicySpec spec;
        spec.kind = parse_policy_kind(name);
        if (spec.uses_virtual_queue()) {
            spec.y_set = construct_y_set(scenario, y_depth);
        }
        if (spec.kind == PolicyKind::BackpressureEps) {
            spec.epsilon = epsilon;
        } else if (epsilon) {
            throw InvalidPolicy("--epsilon applies to bp-eps only");
        }
        spec.greedy_x = greedy_x;
        spec.seed = policy_seed;
        spec.validate(scenario);
        return spec;
    }
};

struct RunFlags {
    double horizon = 1e4;
    std::uint64_t seed = 1;
    double sample_interval = 1.0;
    double warmup = 0.2;

    void attach(CLI::App* cmd) {
        cmd->add_option("--horizon", horizon, "Simulated time units")->capture_default_str();
        cmd->add_option("--seed", seed, "Master random seed")->capture_default_str();
        cmd->add_option("--sample-interval", sample_interval, "Time between trace samples")
            ->capture_default_str();
        cmd->add_option("--warmup", warmup, "Fraction of the horizon discarded")
            ->capture_default_str();
    }

    RunConfig build() const {
        RunConfig cfg;
        cfg.horizon = horizon;
        cfg.seed = seed;
        cfg.sample_interval = sample_interval;
        cfg.warmup_fraction = warmup;
        cfg.validate();
        return cfg;
    }
};

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path.string() + "'");
    }
    return out;
}

void emit_json(const nlohmann::json& doc, const std::string& out_path) {
    if (out_path.empty() || out_path == "-") {
        std::cout << doc.dump(2) << '\n';
    } else {
        open_out(out_path) << doc.dump(2) << '\n';
    }
}

/// Recovers a from a scenario shaped like the asymmetric benchmark.
double infer_asymmetric_a(const Scenario& sc) {
    const SkillMatrix& p = sc.skills;
    const bool shape = sc.num_classes() == 2 && sc.num_servers() == 2 && sc.priors.size() == 1 &&
                       p.mu(0) == 1.0 && p.mu(1) == 1.0 && p.p(0, 0) == 1.0 &&
                       p.p(1, 0) == 1.0 && p.p(1, 1) == 0.0 && sc.priors[0].type[0] == 0.5;
    const double a = p.num_servers() == 2 && p.num_classes() == 2 ? p.p(0, 1) : 0.0;
    if (!shape || !(a > 0.0)) {
        throw std::invalid_argument(
            "asymmetric mode needs skills {{1,a},{1,0}}, unit rates and arrivals (1/2,1/2)");
    }
    return a;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Task-expert matching under type uncertainty: simulation and stability analysis"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "Simulate one run; write trace.csv and summary.json");
    std::string sim_scenario, sim_out = ".";
    std::optional<double> sim_lambda;
    PolicyFlags sim_policy;
    RunFlags sim_run;
    sim->add_option("--scenario", sim_scenario, "Scenario JSON file")->required();
    sim->add_option("--lambda", sim_lambda, "Override the scenario's arrival rate");
    sim->add_option("--out-dir", sim_out, "Output directory")->capture_default_str();
    sim_policy.attach(sim);
    sim_run.attach(sim);

    // sweep
    auto* swp = app.add_subcommand("sweep", "Classify stability over a grid of arrival rates");
    std::string swp_scenario, swp_out = "sweep.csv";
    double lmin = 0.0, lmax = 0.0, lstep = 0.0;
    int runs = 1;
    PolicyFlags swp_policy;
    RunFlags swp_run;
    swp->add_option("--scenario", swp_scenario, "Scenario JSON file")->required();
    swp->add_option("--lambda-min", lmin)->required();
    swp->add_option("--lambda-max", lmax)->required();
    swp->add_option("--lambda-step", lstep)->required();
    swp->add_option("--runs-per-point", runs)->check(CLI::PositiveNumber)->capture_default_str();
    swp->add_option("--out", swp_out, "Output CSV")->capture_default_str();
    swp_policy.attach(swp);
    swp_run.attach(swp);

    // stability
    auto* stab = app.add_subcommand("stability", "Analytic stability thresholds");
    std::string stab_scenario, stab_mode = "lp", stab_out;
    GraphParams gp;
    double min_slack = kDefaultMinSlack;
    stab->add_option("--scenario", stab_scenario, "Scenario JSON file")->required();
    stab->add_option("--mode", stab_mode, "lp|asymmetric|random-formula")
        ->check(CLI::IsMember({"lp", "asymmetric", "random-formula"}))
        ->capture_default_str();
    stab->add_option("--depth", gp.max_depth, "Type-graph expansion depth")->capture_default_str();
    stab->add_option("--residual", gp.residual_target, "Residual flow target for pruning");
    stab->add_option("--node-cap", gp.node_cap, "Type-graph node limit")->capture_default_str();
    stab->add_option("--min-slack", min_slack, "Required slack per server")->capture_default_str();
    stab->add_option("--out", stab_out, "Output JSON (default stdout)");

    // ingest
    auto* ing = app.add_subcommand("ingest", "Build a scenario from answer and question data");
    std::string user_csv, question_csv, fixture, ing_out;
    std::size_t k = 10;
    std::uint64_t ing_seed = 1;
    std::int64_t min_accepted = kDefaultMinAccepted;
    double min_fraction = kDefaultMinFraction, ing_lambda = 0.0, fixture_a = 0.5;
    bool size_weighted = false;
    ing->add_option("--user-tags", user_csv, "CSV user,tag,answers,accepted");
    ing->add_option("--question-tags", question_csv, "CSV question,tags");
    ing->add_option("--fixture", fixture, "Bundled scenario instead of data: table1|asymmetric")
        ->check(CLI::IsMember({"table1", "asymmetric"}));
    ing->add_option("--a", fixture_a, "Parameter of the asymmetric fixture")->capture_default_str();
    ing->add_option("--k", k, "Number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
    ing->add_option("--seed", ing_seed, "k-means seed")->capture_default_str();
    ing->add_option("--min-accepted", min_accepted)->capture_default_str();
    ing->add_option("--min-fraction", min_fraction)->capture_default_str();
    ing->add_option("--lambda", ing_lambda, "Arrival rate stored in the scenario");
    ing->add_flag("--size-weighted", size_weighted, "Server rates proportional to cluster size");
    ing->add_option("--out", ing_out, "Output scenario JSON")->required();

    // plan
    auto* pln = app.add_subcommand("plan", "Greedy attempt sequence for a single task");
    std::string pln_scenario, pln_out;
    std::size_t prior_index = 0;
    int tau = 0;
    pln->add_option("--scenario", pln_scenario, "Scenario JSON file")->required();
    pln->add_option("--prior", prior_index, "Index of the arrival type")->capture_default_str();
    pln->add_option("--tau", tau, "Last step index")->check(CLI::NonNegativeNumber)->capture_default_str();
    pln->add_option("--out", pln_out, "Output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*sim) {
            Scenario sc = load_scenario(sim_scenario);
            if (sim_lambda) {
                sc.lambda = *sim_lambda;
                sc.validate();
            }
            const PolicySpec spec = sim_policy.build(sc);
            const RunMetrics m = run(sc, spec, sim_run.build());
            fs::create_directories(sim_out);
            auto trace = open_out(fs::path(sim_out) / "trace.csv");
            write_trace_csv(trace, m);
            const auto summary = summary_json(m);
            open_out(fs::path(sim_out) / "summary.json") << summary.dump(2) << '\n';
            std::cout << "stability: " << summary["stability"].get<std::string>()
                      << "  time_avg_n: " << format_number(m.time_avg_n) << '\n';
        } else if (*swp) {
            const Scenario sc = load_scenario(swp_scenario);
            const PolicySpec spec = swp_policy.build(sc);
            SweepOptions opt;
            opt.runs_per_point = runs;
            const auto grid = lambda_grid(lmin, lmax, lstep);
            const SweepResult res = sweep(sc, spec, grid, swp_run.build(), opt);
            auto csv = open_out(swp_out);
            write_sweep_csv(csv, res);
            std::cout << "critical_estimate: "
                      << (res.critical ? format_number(*res.critical) : std::string("none"))
                      << '\n';
        } else if (*stab) {
            const Scenario sc = load_scenario(stab_scenario);
            if (stab_mode == "asymmetric") {
                const double a = infer_asymmetric_a(sc);
                emit_json(asymmetric_json(a, asymmetric_thresholds(a)), stab_out);
            } else if (stab_mode == "random-formula") {
                emit_json({{"format_version", 1},
                           {"mode", "random-formula"},
                           {"random", random_policy_threshold(sc)}},
                          stab_out);
            } else {
                const TypeGraph graph = build_type_graph(sc, gp);
                const double rate = max_stable_rate(graph, sc.skills, min_slack);
                const FlowSolution sol = lp_feasible(graph, sc.skills, rate, min_slack);
                emit_json({{"format_version", 1},
                           {"mode", "lp"},
                           {"max_stable_rate", rate},
                           {"graph_nodes", graph.size()},
                           {"expanded_nodes", graph.num_expanded()},
                           {"residual_rate", graph.residual_rate},
                           {"solution", flow_solution_json(sol, graph, sc)}},
                          stab_out);
            }
        } else if (*ing) {
            Scenario sc;
            if (fixture == "table1") {
                sc = mathse_scenario(ing_lambda);
            } else if (fixture == "asymmetric") {
                sc = asymmetric_scenario(fixture_a, ing_lambda);
            } else {
                if (user_csv.empty() || question_csv.empty()) {
                    throw std::invalid_argument(
                        "ingest needs --user-tags and --question-tags, or --fixture");
                }
                const UserSkills skills =
                    estimate_skills(read_user_tags(fs::path(user_csv)), {}, min_accepted);
                const auto priors =
                    estimate_priors(read_question_tags(fs::path(question_csv)), skills.tags,
                                    min_fraction);
                const ClusterResult clusters = kmeans_cluster(skills.p, k, ing_seed);
                ScenarioOptions opt;
                opt.lambda = ing_lambda;
                opt.size_weighted = size_weighted;
                sc = build_scenario(clusters, skills.tags, priors, opt);
            }
            if (fs::path(ing_out).has_parent_path()) {
                fs::create_directories(fs::path(ing_out).parent_path());
            }
            save_scenario(sc, ing_out);
            std::cout << "wrote " << ing_out << ": " << sc.num_servers() << " servers, "
                      << sc.num_classes() << " classes, " << sc.priors.size() << " arrival types\n";
        } else if (*pln) {
            const Scenario sc = load_scenario(pln_scenario);
            if (prior_index >= sc.priors.size()) {
                throw std::out_of_range("prior index " + std::to_string(prior_index) +
                                        " out of range (" + std::to_string(sc.priors.size()) +
                                        " arrival types)");
            }
            const SingleTaskPlan plan = plan_single_task(sc.skills, sc.priors[prior_index].type, tau);
            emit_json(plan_json(plan, sc), pln_out);
        }
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& ch : msg) {
            if (ch == '\n') {
                ch = ' ';
            }
        }
        std::cerr << "error: " << msg << '\n';
        return 1;
    }
    return 0;
}
