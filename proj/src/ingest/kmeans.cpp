#include "taskmatch/ingest/kmeans.hpp"

#include <limits>
#include <random>
#include <stdexcept>

namespace taskmatch {

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        d += t * t;
    }
    return d;
}

void check(const std::vector<std::vector<double>>& points, std::size_t k, int max_iter) {
    if (points.empty()) {
        throw std::invalid_argument("k-means needs at least one point");
    }
    if (k == 0) {
        throw std::invalid_argument("k must be positive");
    }
    if (k > points.size()) {
        throw std::invalid_argument("k exceeds the number of points");
    }
    if (max_iter < 0) {
        throw std::invalid_argument("max_iter must be non-negative");
    }
    for (const auto& p : points) {
        if (p.size() != points.front().size()) {
            throw std::invalid_argument("points differ in dimension");
        }
    }
}

std::vector<std::vector<double>> seed_centroids(const std::vector<std::vector<double>>& points,
                                                std::size_t k, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t n = points.size();
    std::vector<std::vector<double>> centroids;
    centroids.push_back(points[static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n]);
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (centroids.size() < k) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double acc = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc > target && d2[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(n)) % n;
        }
        centroids.push_back(points[pick]);
    }
    return centroids;
}

/// Nearest centroid of each point (lowest index on ties). Returns whether any
/// assignment changed.
bool assign(const std::vector<std::vector<double>>& points,
            const std::vector<std::vector<double>>& centroids, std::vector<std::size_t>& assignment,
            std::vector<double>& dist, bool parallel) {
    const auto n = static_cast<std::int64_t>(points.size());
    int changed = 0;
#pragma omp parallel for schedule(static) reduction(| : changed) if (parallel)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        std::size_t best = 0;
        double best_d = sq_dist(p, centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = sq_dist(p, centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = c;
            }
        }
        auto& a = assignment[static_cast<std::size_t>(i)];
        if (a != best) {
            a = best;
            changed |= 1;
        }
        dist[static_cast<std::size_t>(i)] = best_d;
    }
    return changed != 0;
}

ClusterResult cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                      std::uint64_t seed, int max_iter, bool parallel) {
    check(points, k, max_iter);
    const std::size_t n = points.size();
    const std::size_t dim = points.front().size();
    ClusterResult r;
    r.centroids = seed_centroids(points, k, seed);
    r.assignment.assign(n, std::numeric_limits<std::size_t>::max());
    std::vector<double> dist(n, 0.0);

    auto objective = [&] {
        double s = 0.0;
        for (double d : dist) {
            s += d;
        }
        return s;
    };

    assign(points, r.centroids, r.assignment, dist, parallel);
    r.objective_trace.push_back(objective());
    for (int it = 0; it < max_iter; ++it) {
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = r.assignment[i];
            ++counts[c];
            for (std::size_t j = 0; j < dim; ++j) {
                sums[c][j] += points[i][j];
            }
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                continue;
            }
            for (std::size_t j = 0; j < dim; ++j) {
                r.centroids[c][j] = sums[c][j] / static_cast<double>(counts[c]);
            }
        }
        ++r.iterations;
        const bool changed = assign(points, r.centroids, r.assignment, dist, parallel);
        r.objective_trace.push_back(objective());
        if (!changed) {
            break;
        }
    }
    r.sizes.assign(k, 0);
    for (std::size_t c : r.assignment) {
        ++r.sizes[c];
    }
    return r;
}

}  // namespace

ClusterResult kmeans_cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                             std::uint64_t seed, int max_iter) {
    return cluster(points, k, seed, max_iter, true);
}

ClusterResult kmeans_cluster_serial(const std::vector<std::vector<double>>& points,
                                    std::size_t k, std::uint64_t seed, int max_iter) {
    return cluster(points, k, seed, max_iter, false);
}

double kmeans_objective(const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<double>>& centroids,
                        const std::vector<std::size_t>& assignment) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        s += sq_dist(points[i], centroids[assignment[i]]);
    }
    return s;
}

}  // namespace taskmatch
