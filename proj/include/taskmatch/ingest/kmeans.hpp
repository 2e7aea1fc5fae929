#ifndef TASKMATCH_INGEST_KMEANS_HPP
#define TASKMATCH_INGEST_KMEANS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace taskmatch {

struct ClusterResult {
    /// k rows, one per cluster.
    std::vector<std::vector<double>> centroids;
    std::vector<std::size_t> sizes;
    /// Cluster of each input point.
    std::vector<std::size_t> assignment;
    /// Within-cluster sum of squares after each assignment step.
    std::vector<double> objective_trace;
    int iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations with Euclidean distance,
/// stopping at an assignment fixpoint or after max_iter updates. Empty
/// clusters keep their previous centroid. The assignment step runs in
/// parallel; results equal kmeans_cluster_serial exactly.
ClusterResult kmeans_cluster(const std::vector<std::vector<double>>& points, std::size_t k,
                             std::uint64_t seed, int max_iter = 100);

ClusterResult kmeans_cluster_serial(const std::vector<std::vector<double>>& points,
                                    std::size_t k, std::uint64_t seed, int max_iter = 100);

/// Within-cluster sum of squared distances for a given assignment.
double kmeans_objective(const std::vector<std::vector<double>>& points,
                        const std::vector<std::vector<double>>& centroids,
                        const std::vector<std::size_t>& assignment);

}  // namespace taskmatch

#endif
