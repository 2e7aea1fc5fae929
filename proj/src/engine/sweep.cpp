#include "taskmatch/engine/sweep.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace taskmatch {

namespace {

struct Job {
    std::size_t point;
    int run;
};

struct JobResult {
    double slope = 0.0;
    double time_avg_n = 0.0;
    double throughput = 0.0;
};

void check_inputs(std::span<const double> grid, const RunConfig& config,
                  const SweepOptions& options) {
    if (grid.empty()) {
        throw std::invalid_argument("sweep grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
            throw std::invalid_argument("sweep grid values must be finite and non-negative");
        }
        if (i > 0 && !(grid[i] > grid[i - 1])) {
            throw std::invalid_argument("sweep grid must be strictly increasing");
        }
    }
    if (options.runs_per_point < 1) {
        throw std::invalid_argument("runs per point must be at least 1");
    }
    config.validate();
}

JobResult run_job(const Scenario& base, const PolicySpec& policy, std::span<const double> grid,
                  const RunConfig& config, const Job& job) {
    Scenario scenario = base;
    scenario.lambda = grid[job.point];
    RunConfig cfg = config;
    cfg.seed = sweep_seed(config.seed, job.point, job.run);
    const RunMetrics m = run(scenario, policy, cfg);
    return {trend_slope(m), m.time_avg_n, m.throughput};
}

SweepResult collect(std::span<const double> grid, const SweepOptions& options,
                    const std::vector<JobResult>& results) {
    const auto runs = static_cast<std::size_t>(options.runs_per_point);
    SweepResult out;
    out.points.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        SweepPoint p;
        p.lambda = grid[i];
        for (std::size_t r = 0; r < runs; ++r) {
            const JobResult& j = results[i * runs + r];
            p.slope += j.slope;
            p.time_avg_n += j.time_avg_n;
            p.throughput += j.throughput;
        }
        p.slope /= static_cast<double>(runs);
        p.time_avg_n /= static_cast<double>(runs);
        p.throughput /= static_cast<double>(runs);
        p.stability = classify_slope(p.slope, p.lambda, options.thresholds);
        if (p.stability == Stability::Stable && p.lambda > 0.0) {
            p.delay = p.time_avg_n / p.lambda;
        }
        out.points.push_back(p);
    }
    out.critical = critical_estimate(out.points);
    return out;
}

std::vector<Job> make_jobs(std::size_t points, int runs) {
    std::vector<Job> jobs;
    jobs.reserve(points * static_cast<std::size_t>(runs));
    for (std::size_t i = 0; i < points; ++i) {
        for (int r = 0; r < runs; ++r) {
            jobs.push_back({i, r});
        }
    }
    return jobs;
}

}  // namespace

std::vector<double> lambda_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || !std::isfinite(lo) || !std::isfinite(hi) || lo < 0.0 || hi < lo) {
        throw std::invalid_argument("invalid lambda grid bounds");
    }
    std::vector<double> grid;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-3));
    for (std::size_t i = 0; i <= n; ++i) {
        grid.push_back(lo + static_cast<double>(i) * step);
    }
    return grid;
}

std::uint64_t sweep_seed(std::uint64_t seed, std::size_t point, int run) {
    return derive_seed(derive_seed(seed, point), static_cast<std::uint64_t>(run));
}

SweepResult sweep(const Scenario& scenario, const PolicySpec& policy, std::span<const double> grid,
                  const RunConfig& config, const SweepOptions& options) {
    check_inputs(grid, config, options);
    const std::vector<Job> jobs = make_jobs(grid.size(), options.runs_per_point);
    std::vector<JobResult> results(jobs.size());
    std::exception_ptr error;
    const auto n = static_cast<std::int64_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t k = 0; k < n; ++k) {
        try {
            results[static_cast<std::size_t>(k)] =
                run_job(scenario, policy, grid, config, jobs[static_cast<std::size_t>(k)]);
        } catch (...) {
#pragma omp critical(taskmatch_sweep_error)
            if (!error) {
                error = std::current_exception();
            }
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return collect(grid, options, results);
}

SweepResult sweep_serial(const Scenario& scenario, const PolicySpec& policy,
                         std::span<const double> grid, const RunConfig& config,
                         const SweepOptions& options) {
    check_inputs(grid, config, options);
    const std::vector<Job> jobs = make_jobs(grid.size(), options.runs_per_point);
    std::vector<JobResult> results;
    results.reserve(jobs.size());
    for (const Job& job : jobs) {
        results.push_back(run_job(scenario, policy, grid, config, job));
    }
    return collect(grid, options, results);
}

std::optional<double> critical_estimate(std::span<const SweepPoint> points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].stability != Stability::Stable) {
            if (i == 0) {
                return std::nullopt;
            }
            return 0.5 * (points[i - 1].lambda + points[i].lambda);
        }
    }
    return std::nullopt;
}

}  // namespace taskmatch
