#include "taskmatch/engine/stability.hpp"

#include <numeric>
#include <stdexcept>

namespace taskmatch {

std::string_view stability_name(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Unstable: return "unstable";
        case Stability::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

double trend_slope(const RunMetrics& metrics) {
    double n = 0.0, st = 0.0, sy = 0.0;
    for (const auto& sample : metrics.samples) {
        if (sample.time < metrics.warmup_time) {
            continue;
        }
        n += 1.0;
        st += sample.time;
        sy += static_cast<double>(sample.total);
    }
    if (n < static_cast<double>(kMinStabilitySamples)) {
        throw std::invalid_argument("too few post-warmup samples to classify stability");
    }
    const double tbar = st / n;
    const double ybar = sy / n;
    double sxy = 0.0, sxx = 0.0;
    for (const auto& sample : metrics.samples) {
        if (sample.time < metrics.warmup_time) {
            continue;
        }
        const double dt = sample.time - tbar;
        sxy += dt * (static_cast<double>(sample.total) - ybar);
        sxx += dt * dt;
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

Stability classify_slope(double slope, double lambda, const StabilityThresholds& th) {
    if (slope <= th.low * lambda) {
        return Stability::Stable;
    }
    if (slope >= th.high * lambda) {
        return Stability::Unstable;
    }
    return Stability::Inconclusive;
}

Stability classify_stability(const RunMetrics& metrics, const StabilityThresholds& th) {
    return classify_slope(trend_slope(metrics), metrics.lambda, th);
}

double estimate_delay(const RunMetrics& metrics, double lambda) {
    if (!(lambda > 0.0)) {
        throw std::domain_error("delay undefined for zero arrival rate");
    }
    return metrics.time_avg_n / lambda;
}

double mean_sojourn(const RunMetrics& metrics) {
    if (metrics.sojourn_times.empty()) {
        return 0.0;
    }
    return std::accumulate(metrics.sojourn_times.begin(), metrics.sojourn_times.end(), 0.0) /
           static_cast<double>(metrics.sojourn_times.size());
}

}  // namespace taskmatch
