#ifndef TASKMATCH_ANALYSIS_TYPE_GRAPH_HPP
#define TASKMATCH_ANALYSIS_TYPE_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "taskmatch/core/canonical.hpp"
#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// The type graph outgrew its node cap before reaching the requested depth.
class TruncationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GraphParams {
    /// Nodes at BFS depth <= max_depth are expanded.
    int max_depth = 2;
    /// When positive, a node whose inflow bound falls below
    /// residual_target / (pending nodes) is left unexpanded.
    double residual_target = 0.0;
    std::size_t node_cap = 200000;
};

/// Mixed types reachable from the arrival distribution by failed attempts,
/// truncated by depth. Node ids are dense; expanded nodes carry one edge per
/// server, the remaining (frontier) nodes carry none.
struct TypeGraph {
    struct Edge {
        /// Successor node, or -1 when failure is impossible.
        std::int64_t target = -1;
        double psi = 0.0;
    };

    std::size_t num_servers = 0;
    std::vector<CanonicalKey> keys;
    std::vector<MixedType> types;
    std::vector<int> depth;
    std::vector<char> expanded;
    /// Upper bound on the probability that an arrival ever reaches the node.
    std::vector<double> reach;
    /// edges[node * num_servers + s]
    std::vector<Edge> edges;
    /// (node, arrival probability) for the arrival distribution.
    std::vector<std::pair<std::size_t, double>> roots;
    /// Upper bound, per unit arrival rate, on the rate of tasks leaving the
    /// expanded part of the graph.
    double residual_rate = 0.0;

    std::size_t size() const { return keys.size(); }
    std::size_t num_expanded() const;
    const Edge& edge(std::size_t node, ServerId s) const { return edges[node * num_servers + s]; }
};

TypeGraph build_type_graph(const Scenario& scenario, const GraphParams& params = {});

}  // namespace taskmatch

#endif
