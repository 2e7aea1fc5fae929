#ifndef TASKMATCH_ENGINE_STABILITY_HPP
#define TASKMATCH_ENGINE_STABILITY_HPP

#include <cstddef>
#include <string_view>

#include "taskmatch/engine/simulator.hpp"

namespace taskmatch {

enum class Stability { Stable, Unstable, Inconclusive };

std::string_view stability_name(Stability s);

/// Slope thresholds, as fractions of lambda, on the fitted growth rate of the
/// total task count.
struct StabilityThresholds {
    double low = 0.01;
    double high = 0.05;
};

inline constexpr std::size_t kMinStabilitySamples = 100;

/// Least-squares slope of the total task count against time over the
/// post-warmup samples. Throws std::invalid_argument with fewer than
/// kMinStabilitySamples samples.
double trend_slope(const RunMetrics& metrics);

/// Classifies a slope for arrival rate lambda.
Stability classify_slope(double slope, double lambda, const StabilityThresholds& th = {});

Stability classify_stability(const RunMetrics& metrics, const StabilityThresholds& th = {});

/// Little's law: time-averaged occupancy over lambda. Throws
/// std::domain_error for lambda = 0.
double estimate_delay(const RunMetrics& metrics, double lambda);

/// Mean of the recorded post-warmup sojourn times (0 when none).
double mean_sojourn(const RunMetrics& metrics);

}  // namespace taskmatch

#endif
