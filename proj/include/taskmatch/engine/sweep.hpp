#ifndef TASKMATCH_ENGINE_SWEEP_HPP
#define TASKMATCH_ENGINE_SWEEP_HPP

#include <optional>
#include <span>
#include <vector>

#include "taskmatch/engine/simulator.hpp"
#include "taskmatch/engine/stability.hpp"

namespace taskmatch {

struct SweepOptions {
    int runs_per_point = 1;
    StabilityThresholds thresholds;
};

struct SweepPoint {
    double lambda = 0.0;
    Stability stability = Stability::Inconclusive;
    /// Mean fitted growth rate across runs.
    double slope = 0.0;
    double time_avg_n = 0.0;
    double throughput = 0.0;
    /// Little's-law delay, reported for stable points only.
    std::optional<double> delay;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    /// Midpoint between the last point of the stable prefix of the grid and
    /// the point that ends it. Empty if the whole grid is stable or the first
    /// point already is not.
    std::optional<double> critical;
};

/// Evenly spaced grid from lo to hi inclusive (within step/1000).
std::vector<double> lambda_grid(double lo, double hi, double step);

/// Seed of run `run` at grid point `point` for master seed `seed`.
std::uint64_t sweep_seed(std::uint64_t seed, std::size_t point, int run);

/// Runs every (grid point, run) pair as an independent simulation, in parallel
/// across OpenMP threads. Results are identical to sweep_serial.
SweepResult sweep(const Scenario& scenario, const PolicySpec& policy, std::span<const double> grid,
                  const RunConfig& config, const SweepOptions& options = {});

/// Single-threaded reference implementation of sweep.
SweepResult sweep_serial(const Scenario& scenario, const PolicySpec& policy,
                         std::span<const double> grid, const RunConfig& config,
                         const SweepOptions& options = {});

std::optional<double> critical_estimate(std::span<const SweepPoint> points);

}  // namespace taskmatch

#endif
