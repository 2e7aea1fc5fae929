#include "taskmatch/analysis/flow_lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "taskmatch/analysis/simplex.hpp"

namespace taskmatch {

namespace {

bool has_universal_server(const SkillMatrix& skills) {
    for (ServerId s = 0; s < skills.num_servers(); ++s) {
        const auto row = skills.row(s);
        if (!row.empty() && *std::min_element(row.begin(), row.end()) > 0.0) {
            return true;
        }
    }
    return false;
}

}  // namespace

FlowSolution lp_feasible(const TypeGraph& graph, const SkillMatrix& skills, double lambda,
                         double min_slack) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be finite and non-negative");
    }
    if (!(min_slack >= 0.0)) {
        throw std::invalid_argument("min_slack must be non-negative");
    }
    const std::size_t servers = skills.num_servers();
    const std::size_t classes = skills.num_classes();
    if (graph.num_servers != servers) {
        throw std::invalid_argument("type graph and skill matrix disagree on server count");
    }
    const std::size_t n = graph.size();

    FlowSolution sol;
    sol.num_servers = servers;
    sol.nu.assign(n * servers, 0.0);
    sol.slack.assign(servers, 0.0);
    if (!has_universal_server(skills)) {
        sol.warnings.push_back(
            "no server has a positive success probability on every class; the sufficient "
            "condition for stability is not guaranteed to apply");
    }
    const double budget = min_slack * skills.min_class_capacity();
    if (graph.residual_rate * lambda > budget) {
        std::ostringstream msg;
        msg << "truncation residual " << graph.residual_rate * lambda
            << " exceeds the slack budget " << budget << "; result is conservative";
        sol.warnings.push_back(msg.str());
    }

    LinearProgram lp;
    std::vector<std::size_t> var(n * servers, 0);
    for (std::size_t u = 0; u < n; ++u) {
        if (!graph.expanded[u]) {
            continue;
        }
        for (ServerId s = 0; s < servers; ++s) {
            var[u * servers + s] = lp.add_var();
        }
    }
    std::vector<std::size_t> delta(servers);
    for (ServerId s = 0; s < servers; ++s) {
        delta[s] = lp.add_var();
    }
    const std::size_t t = lp.add_var(1.0);

    std::vector<double> arrivals(n, 0.0);
    for (const auto& [node, prob] : graph.roots) {
        arrivals[node] += lambda * prob;
    }

    // Conservation at expanded nodes.
    std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
    std::vector<std::pair<std::size_t, double>> frontier;
    for (std::size_t u = 0; u < n; ++u) {
        if (!graph.expanded[u]) {
            continue;
        }
        for (ServerId s = 0; s < servers; ++s) {
            const std::size_t x = var[u * servers + s];
            rows[u].emplace_back(x, 1.0);
            const auto& e = graph.edge(u, s);
            if (e.target < 0 || e.psi == 0.0) {
                continue;
            }
            const auto v = static_cast<std::size_t>(e.target);
            if (graph.expanded[v]) {
                rows[v].emplace_back(x, -e.psi);
            } else {
                frontier.emplace_back(x, e.psi);
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (!graph.expanded[u]) {
            continue;
        }
        // Merge duplicate entries produced by self-loops.
        auto& r = rows[u];
        std::sort(r.begin(), r.end());
        std::vector<std::pair<std::size_t, double>> merged;
        for (const auto& [j, v] : r) {
            if (!merged.empty() && merged.back().first == j) {
                merged.back().second += v;
            } else {
                merged.emplace_back(j, v);
            }
        }
        lp.add_row(std::move(merged), Relation::Equal, arrivals[u]);
    }
    for (const auto& [node, prob] : graph.roots) {
        if (!graph.expanded[node] && prob > 0.0 && lambda > 0.0) {
            throw std::invalid_argument("arrival types must be expanded in the type graph");
        }
    }
    // Capacity.
    for (ServerId s = 0; s < servers; ++s) {
        std::vector<std::pair<std::size_t, double>> row;
        for (std::size_t u = 0; u < n; ++u) {
            if (graph.expanded[u]) {
                row.emplace_back(var[u * servers + s], 1.0);
            }
        }
        row.emplace_back(delta[s], 1.0);
        lp.add_row(std::move(row), Relation::LessEqual, skills.mu(s));
        lp.add_row({{t, 1.0}, {delta[s], -1.0}}, Relation::LessEqual, 0.0);
    }
    // Flow into the frontier is charged against the slack.
    if (!frontier.empty()) {
        for (ClassId c = 0; c < classes; ++c) {
            auto row = frontier;
            for (ServerId s = 0; s < servers; ++s) {
                if (skills.p(s, c) > 0.0) {
                    row.emplace_back(delta[s], -0.25 * skills.p(s, c));
                }
            }
            lp.add_row(std::move(row), Relation::LessEqual, 0.0);
        }
    }

    const LpResult res = solve_lp(lp);
    if (res.status == LpStatus::Infeasible) {
        return sol;
    }
    if (res.status != LpStatus::Optimal) {
        throw SolverFailure(res.status == LpStatus::Unbounded ? "flow LP is unbounded"
                                                              : "flow LP hit the iteration limit");
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (!graph.expanded[u]) {
            continue;
        }
        for (ServerId s = 0; s < servers; ++s) {
            sol.nu[u * servers + s] = res.x[var[u * servers + s]];
        }
    }
    for (ServerId s = 0; s < servers; ++s) {
        sol.slack[s] = res.x[delta[s]];
    }
    sol.min_slack = res.x[t];
    for (const auto& [x, psi] : frontier) {
        sol.frontier_flow += psi * res.x[x];
    }

    // Recompute conservation from the solution.
    std::vector<double> balance(arrivals);
    for (std::size_t u = 0; u < n; ++u) {
        if (!graph.expanded[u]) {
            continue;
        }
        for (ServerId s = 0; s < servers; ++s) {
            const double f = sol.nu[u * servers + s];
            balance[u] -= f;
            const auto& e = graph.edge(u, s);
            if (e.target >= 0) {
                balance[static_cast<std::size_t>(e.target)] += e.psi * f;
            }
        }
    }
    for (std::size_t u = 0; u < n; ++u) {
        if (graph.expanded[u]) {
            sol.conservation_residual = std::max(sol.conservation_residual, std::abs(balance[u]));
        }
    }
    sol.feasible = sol.min_slack >= min_slack;
    return sol;
}

double max_stable_rate(const TypeGraph& graph, const SkillMatrix& skills, double min_slack,
                       double tol) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("bisection tolerance must be positive");
    }
    double lo = 0.0;
    double hi = skills.total_rate();
    if (!lp_feasible(graph, skills, lo, min_slack).feasible) {
        return 0.0;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (lp_feasible(graph, skills, mid, min_slack).feasible) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

double max_stable_rate(const Scenario& scenario, const GraphParams& params, double min_slack,
                       double tol) {
    return max_stable_rate(build_type_graph(scenario, params), scenario.skills, min_slack, tol);
}

}  // namespace taskmatch
