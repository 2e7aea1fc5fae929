#include "taskmatch/ingest/table1.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace taskmatch {

Scenario build_scenario(const ClusterResult& clusters, const std::vector<std::string>& tags,
                        const std::vector<Prior>& priors, const ScenarioOptions& options) {
    const std::size_t k = clusters.centroids.size();
    if (k == 0) {
        throw std::invalid_argument("no clusters");
    }
    for (const auto& row : clusters.centroids) {
        if (row.size() != tags.size()) {
            throw std::invalid_argument("centroid dimension does not match the tag count");
        }
    }
    for (const auto& prior : priors) {
        if (prior.type.size() != tags.size()) {
            throw std::invalid_argument("prior dimension does not match the tag count");
        }
    }
    if (!(options.mu_default > 0.0)) {
        throw std::invalid_argument("server rate must be positive");
    }
    std::vector<double> mu(k, options.mu_default);
    if (options.size_weighted) {
        if (clusters.sizes.size() != k) {
            throw std::invalid_argument("size-weighted rates need cluster sizes");
        }
        const double total = static_cast<double>(
            std::accumulate(clusters.sizes.begin(), clusters.sizes.end(), std::size_t{0}));
        if (total <= 0.0 ||
            std::any_of(clusters.sizes.begin(), clusters.sizes.end(),
                        [](std::size_t s) { return s == 0; })) {
            throw std::invalid_argument("size-weighted rates need nonempty clusters");
        }
        for (std::size_t s = 0; s < k; ++s) {
            mu[s] = options.mu_default * static_cast<double>(k) *
                    static_cast<double>(clusters.sizes[s]) / total;
        }
    }
    Scenario sc;
    sc.classes = tags;
    for (std::size_t s = 0; s < k; ++s) {
        sc.servers.push_back("cluster-" + std::to_string(s + 1));
    }
    sc.skills = SkillMatrix(clusters.centroids, mu);
    sc.lambda = options.lambda;
    sc.priors = priors;
    sc.validate();
    return sc;
}

std::vector<std::string> mathse_tags() {
    return {"calculus",        "real-analysis",        "linear-algebra",   "probability",
            "abstract-algebra", "integration",         "sequences-and-series",
            "general-topology", "combinatorics",       "matrices",         "complex-analysis"};
}

ClusterResult mathse_clusters() {
    // Rows are tags, columns clusters 1..10.
    static const double by_tag[11][10] = {
        {.32, .39, .30, .35, .37, .47, .28, .16, .26, .41},
        {.17, .41, .25, .32, .23, .49, .40, .10, .10, .44},
        {.46, .29, .05, .36, .14, .48, .26, .31, .07, .43},
        {.07, .49, .02, .33, .02, .50, .06, .02, .46, .04},
        {.02, .05, .03, .32, .02, .38, .23, .50, .01, .27},
        {.09, .43, .05, .19, .44, .45, .03, .01, .06, .37},
        {.05, .32, .16, .31, .20, .45, .09, .04, .06, .33},
        {.02, .10, .03, .16, .02, .43, .50, .07, .02, .31},
        {.03, .14, .06, .43, .04, .37, .02, .06, .19, .05},
        {.27, .15, .02, .31, .02, .44, .06, .11, .02, .34},
        {.02, .19, .08, .16, .14, .50, .09, .05, .01, .44},
    };
    ClusterResult r;
    r.centroids.assign(10, std::vector<double>(11, 0.0));
    for (std::size_t t = 0; t < 11; ++t) {
        for (std::size_t c = 0; c < 10; ++c) {
            r.centroids[c][t] = by_tag[t][c];
        }
    }
    r.sizes = {165, 188, 313, 200, 179, 183, 231, 187, 178, 176};
    return r;
}

std::vector<TagSetCount> mathse_tag_set_counts() {
    return {
        {{"calculus"}, 40184},
        {{"real-analysis"}, 31000},
        {{"linear-algebra"}, 34000},
        {{"probability"}, 38000},
        {{"abstract-algebra"}, 35000},
        {{"integration"}, 20000},
        {{"sequences-and-series"}, 8000},
        {{"general-topology"}, 20000},
        {{"combinatorics"}, 25000},
        {{"matrices"}, 4000},
        {{"complex-analysis"}, 22813},
        {{"calculus", "integration"}, 14000},
        {{"calculus", "sequences-and-series"}, 7000},
        {{"real-analysis", "sequences-and-series"}, 18000},
        {{"real-analysis", "general-topology"}, 6000},
        {{"linear-algebra", "matrices"}, 20000},
    };
}

Scenario mathse_scenario(double lambda) {
    const auto tags = mathse_tags();
    const auto counts = mathse_tag_set_counts();
    double total = 0.0;
    for (const auto& c : counts) {
        total += c.questions;
    }
    std::vector<Prior> priors;
    for (const auto& c : counts) {
        std::vector<ClassId> support;
        for (const auto& t : c.tags) {
            support.push_back(static_cast<ClassId>(
                std::find(tags.begin(), tags.end(), t) - tags.begin()));
        }
        priors.push_back({MixedType::uniform_over(tags.size(), support), c.questions / total});
    }
    ScenarioOptions opt;
    opt.lambda = lambda;
    return build_scenario(mathse_clusters(), tags, priors, opt);
}

}  // namespace taskmatch
