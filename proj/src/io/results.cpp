#include "taskmatch/io/results.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>

namespace taskmatch {

using nlohmann::json;

std::string format_number(double x) {
    char buf[32];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

void write_trace_csv(std::ostream& out, const RunMetrics& metrics) {
    out << "time,total_tasks\n";
    for (const auto& s : metrics.samples) {
        out << format_number(s.time) << ',' << s.total << '\n';
    }
}

json summary_json(const RunMetrics& metrics) {
    json doc;
    doc["format_version"] = 1;
    doc["lambda"] = metrics.lambda;
    doc["horizon"] = metrics.horizon;
    doc["warmup_time"] = metrics.warmup_time;
    doc["throughput"] = metrics.throughput;
    doc["time_avg_n"] = metrics.time_avg_n;
    doc["delay"] = metrics.lambda > 0.0 ? json(estimate_delay(metrics, metrics.lambda)) : json();
    doc["mean_sojourn"] = mean_sojourn(metrics);
    doc["arrivals"] = metrics.arrivals;
    doc["completions"] = metrics.completions;
    doc["attempts"] = metrics.attempts;
    doc["tasks_in_system"] = metrics.live;
    doc["distinct_types"] = metrics.distinct_types;
    try {
        const double slope = trend_slope(metrics);
        doc["growth_rate"] = slope;
        doc["stability"] = stability_name(classify_slope(slope, metrics.lambda));
    } catch (const std::invalid_argument&) {
        doc["growth_rate"] = json();
        doc["stability"] = stability_name(Stability::Inconclusive);
    }
    return doc;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    out << "lambda,stability,delay,critical_estimate\n";
    const std::string critical = result.critical ? format_number(*result.critical) : "";
    for (const auto& p : result.points) {
        out << format_number(p.lambda) << ',' << stability_name(p.stability) << ','
            << (p.delay ? format_number(*p.delay) : "") << ',' << critical << '\n';
    }
}

json asymmetric_json(double a, const AsymmetricThresholds& t) {
    return {{"format_version", 1},
            {"mode", "asymmetric"},
            {"a", a},
            {"optimal", t.optimal},
            {"random", t.random},
            {"greedy", t.preemptive_greedy},
            {"nonpreemptive_bound", t.nonpreemptive_instability_bound},
            {"known_type", t.known_type}};
}

json flow_solution_json(const FlowSolution& sol, const TypeGraph& graph,
                        const Scenario& scenario) {
    json flows = json::array();
    for (std::size_t u = 0; u < graph.size(); ++u) {
        for (ServerId s = 0; s < sol.num_servers; ++s) {
            const double f = sol.flow(s, u);
            if (f <= 0.0) {
                continue;
            }
            const auto w = graph.types[u].weights();
            flows.push_back({{"server", scenario.servers[s]},
                             {"type", std::vector<double>(w.begin(), w.end())},
                             {"rate", f}});
        }
    }
    json slack = json::object();
    for (ServerId s = 0; s < sol.num_servers; ++s) {
        slack[scenario.servers[s]] = sol.slack[s];
    }
    return {{"feasible", sol.feasible},
            {"min_slack", sol.min_slack},
            {"slack", std::move(slack)},
            {"frontier_flow", sol.frontier_flow},
            {"conservation_residual", sol.conservation_residual},
            {"flows", std::move(flows)},
            {"warnings", sol.warnings}};
}

json plan_json(const SingleTaskPlan& plan, const Scenario& scenario) {
    json seq = json::array();
    for (ServerId s : plan.sequence) {
        seq.push_back(scenario.servers[s]);
    }
    return {{"format_version", 1},
            {"sequence", std::move(seq)},
            {"sequence_indices", plan.sequence},
            {"success_probability", plan.success}};
}

}  // namespace taskmatch
