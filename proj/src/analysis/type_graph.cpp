#include "taskmatch/analysis/type_graph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "taskmatch/core/type_table.hpp"

namespace taskmatch {

std::size_t TypeGraph::num_expanded() const {
    return static_cast<std::size_t>(std::count(expanded.begin(), expanded.end(), char{1}));
}

TypeGraph build_type_graph(const Scenario& scenario, const GraphParams& params) {
    if (params.max_depth < 0) {
        throw std::invalid_argument("max_depth must be non-negative");
    }
    if (params.residual_target < 0.0) {
        throw std::invalid_argument("residual_target must be non-negative");
    }
    scenario.validate();

    // Node ids coincide with the table's type ids, which are assigned in
    // discovery order.
    TypeTable table(scenario.skills);
    const std::size_t servers = scenario.num_servers();
    TypeGraph g;
    g.num_servers = servers;

    auto grow = [&](std::size_t n) {
        if (n > params.node_cap) {
            throw TruncationFailure("type graph exceeded " + std::to_string(params.node_cap) +
                                    " nodes; lower max_depth or raise residual_target");
        }
        g.depth.resize(n, 0);
        g.expanded.resize(n, 0);
        g.reach.resize(n, 0.0);
    };

    std::deque<std::size_t> pending;
    for (const Prior& prior : scenario.priors) {
        const auto id = static_cast<std::size_t>(table.intern(prior.type));
        const bool fresh = id >= g.depth.size();
        grow(table.size());
        auto it = std::find_if(g.roots.begin(), g.roots.end(),
                               [&](const auto& r) { return r.first == id; });
        if (it == g.roots.end()) {
            g.roots.emplace_back(id, prior.prob);
        } else {
            it->second += prior.prob;
        }
        g.reach[id] = std::min(1.0, g.reach[id] + prior.prob);
        if (fresh) {
            pending.push_back(id);
        }
    }

    std::vector<TypeGraph::Edge> edges;
    while (!pending.empty()) {
        const std::size_t u = pending.front();
        pending.pop_front();
        if (g.depth[u] > params.max_depth) {
            continue;
        }
        const bool is_root = g.depth[u] == 0;
        if (!is_root && params.residual_target > 0.0 &&
            g.reach[u] < params.residual_target / static_cast<double>(pending.size() + 1)) {
            continue;
        }
        g.expanded[u] = 1;
        if (edges.size() < (u + 1) * servers) {
            edges.resize((u + 1) * servers);
        }
        for (ServerId s = 0; s < servers; ++s) {
            const double psi = table.psi(static_cast<TypeId>(u), s);
            const TypeId next = table.successor(static_cast<TypeId>(u), s);
            edges[u * servers + s] = {next, next == kNoType ? 0.0 : psi};
            if (next == kNoType) {
                continue;
            }
            const auto v = static_cast<std::size_t>(next);
            if (v >= g.depth.size()) {
                grow(table.size());
                g.depth[v] = g.depth[u] + 1;
                pending.push_back(v);
            }
            if (v != u) {
                g.reach[v] = std::min(1.0, g.reach[v] + g.reach[u] * psi);
            }
        }
    }

    const std::size_t n = table.size();
    grow(n);
    edges.resize(n * servers);
    g.edges = std::move(edges);
    g.keys.reserve(n);
    g.types.reserve(n);
    for (std::size_t id = 0; id < n; ++id) {
        g.keys.push_back(table.key(static_cast<TypeId>(id)));
        g.types.push_back(table.type(static_cast<TypeId>(id)));
    }

    // A task leaves an expanded node along at most one edge per visit.
    for (std::size_t u = 0; u < n; ++u) {
        if (!g.expanded[u]) {
            continue;
        }
        double worst = 0.0;
        for (ServerId s = 0; s < servers; ++s) {
            const auto& e = g.edge(u, s);
            if (e.target >= 0 && !g.expanded[static_cast<std::size_t>(e.target)]) {
                worst = std::max(worst, e.psi);
            }
        }
        g.residual_rate += g.reach[u] * worst;
    }
    return g;
}

}  // namespace taskmatch
