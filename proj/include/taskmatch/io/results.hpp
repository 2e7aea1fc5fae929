#ifndef TASKMATCH_IO_RESULTS_HPP
#define TASKMATCH_IO_RESULTS_HPP

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"
#include "taskmatch/analysis/flow_lp.hpp"
#include "taskmatch/analysis/planner.hpp"
#include "taskmatch/analysis/thresholds.hpp"
#include "taskmatch/engine/simulator.hpp"
#include "taskmatch/engine/stability.hpp"
#include "taskmatch/engine/sweep.hpp"

namespace taskmatch {

/// Shortest decimal text that reads back to the same double.
std::string format_number(double x);

/// `time,total_tasks`, one row per sample.
void write_trace_csv(std::ostream& out, const RunMetrics& metrics);

/// Throughput, time-averaged occupancy, Little's-law delay and stability
/// class. Stability is "inconclusive" when too few samples were taken.
nlohmann::json summary_json(const RunMetrics& metrics);

/// `lambda,stability,delay,critical_estimate`, one row per grid point. Delay
/// is blank for points that are not stable; the critical estimate repeats on
/// every row and is blank when the grid does not bracket it.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

nlohmann::json asymmetric_json(double a, const AsymmetricThresholds& t);

/// Flows listed per (server, node) with nonzero rate, nodes by their weights.
nlohmann::json flow_solution_json(const FlowSolution& sol, const TypeGraph& graph,
                                  const Scenario& scenario);

nlohmann::json plan_json(const SingleTaskPlan& plan, const Scenario& scenario);

}  // namespace taskmatch

#endif
