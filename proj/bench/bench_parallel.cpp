// Serial reference vs OpenMP kernel for the two parallel hot paths.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "taskmatch/core/model.hpp"
#include "taskmatch/engine/sweep.hpp"
#include "taskmatch/ingest/kmeans.hpp"

namespace {

using namespace taskmatch;

struct SweepCase {
    Scenario scenario = asymmetric_scenario(0.5);
    PolicySpec policy;
    std::vector<double> grid = lambda_grid(0.5, 0.95, 0.05);
    RunConfig config;

    SweepCase() {
        policy.kind = PolicyKind::PreemptiveGreedy;
        config.horizon = 2e4;
        config.seed = 5;
    }
};

void BM_SweepSerial(benchmark::State& state) {
    const SweepCase c;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep_serial(c.scenario, c.policy, c.grid, c.config));
    }
}

void BM_SweepParallel(benchmark::State& state) {
    const SweepCase c;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sweep(c.scenario, c.policy, c.grid, c.config));
    }
}

std::vector<std::vector<double>> cloud(std::size_t n, std::size_t dim) {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
        for (auto& x : p) {
            x = u(gen);
        }
    }
    return pts;
}

void BM_KMeansSerial(benchmark::State& state) {
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans_cluster_serial(pts, 10, 3));
    }
}

void BM_KMeansParallel(benchmark::State& state) {
    const auto pts = cloud(static_cast<std::size_t>(state.range(0)), 11);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kmeans_cluster(pts, 10, 3));
    }
}

}  // namespace

BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KMeansSerial)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_KMeansParallel)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
