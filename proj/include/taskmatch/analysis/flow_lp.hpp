#ifndef TASKMATCH_ANALYSIS_FLOW_LP_HPP
#define TASKMATCH_ANALYSIS_FLOW_LP_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "taskmatch/analysis/type_graph.hpp"
#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// The LP solver could not produce an answer (unbounded or stalled).
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultMinSlack = 1e-6;

struct FlowSolution {
    bool feasible = false;
    /// Largest achievable min_s delta_s.
    double min_slack = 0.0;
    std::size_t num_servers = 0;
    /// nu[node * num_servers + s]: attempt rate of server s on type node.
    std::vector<double> nu;
    /// delta_s: unused capacity of each server.
    std::vector<double> slack;
    /// Rate of tasks entering unexpanded types.
    double frontier_flow = 0.0;
    /// Largest absolute flow-conservation error over expanded nodes.
    double conservation_residual = 0.0;
    std::vector<std::string> warnings;

    double flow(ServerId s, std::size_t node) const { return nu[node * num_servers + s]; }
};

/// Searches for attempt rates nu(s,z) with, at every expanded node z,
///   lambda pi_z + sum_{s,z'} nu(s,z') psi_s(z') [phi_s(z') = z] = sum_s nu(s,z),
/// capacity sum_z nu(s,z) + delta_s <= mu_s, and flow into unexpanded types
/// at most min_c sum_s (delta_s / 4) p(s,c). Maximizes min_s delta_s and
/// reports the system feasible when that optimum reaches `min_slack`.
FlowSolution lp_feasible(const TypeGraph& graph, const SkillMatrix& skills, double lambda,
                         double min_slack = kDefaultMinSlack);

/// Supremum of feasible arrival rates on the truncated graph, by bisection
/// over [0, sum_s mu_s] to absolute tolerance `tol`. Returns the lower end of
/// the final bracket.
double max_stable_rate(const TypeGraph& graph, const SkillMatrix& skills,
                       double min_slack = kDefaultMinSlack, double tol = 1e-3);

double max_stable_rate(const Scenario& scenario, const GraphParams& params = {},
                       double min_slack = kDefaultMinSlack, double tol = 1e-3);

}  // namespace taskmatch

#endif
