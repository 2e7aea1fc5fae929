#ifndef TASKMATCH_INGEST_TABLE1_HPP
#define TASKMATCH_INGEST_TABLE1_HPP

#include <string>
#include <vector>

#include "taskmatch/core/model.hpp"
#include "taskmatch/ingest/kmeans.hpp"

namespace taskmatch {

struct ScenarioOptions {
    double lambda = 0.0;
    double mu_default = 1.0;
    /// Scale rates by cluster size (mean rate stays mu_default) instead of
    /// giving every cluster rate mu_default.
    bool size_weighted = false;
};

/// One server per cluster with the centroid as its skill row; classes are
/// the tags.
Scenario build_scenario(const ClusterResult& clusters, const std::vector<std::string>& tags,
                        const std::vector<Prior>& priors, const ScenarioOptions& options = {});

/// The eleven most frequent Math.StackExchange tags, most frequent first.
std::vector<std::string> mathse_tags();

/// Ten expert clusters estimated from Math.StackExchange answer records:
/// centroids (success probability per tag) and cluster sizes.
ClusterResult mathse_clusters();

/// Question counts per tag combination (11 single tags, 5 pairs) used for the
/// arrival distribution. Per-combination frequencies were not published; these
/// are reconstructed so that per-tag totals follow the published popularity
/// ranking (calculus 61184 first, complex-analysis 22813 last) and the
/// random-policy critical rate is close to the observed 2.2.
struct TagSetCount {
    std::vector<std::string> tags;
    double questions = 0.0;
};
std::vector<TagSetCount> mathse_tag_set_counts();

/// Math.StackExchange scenario: 11 classes, 10 unit-rate servers, 16 arrival
/// types.
Scenario mathse_scenario(double lambda = 0.0);

}  // namespace taskmatch

#endif
