#include "taskmatch/analysis/y_set.hpp"

#include <stdexcept>
#include <unordered_set>

#include "taskmatch/core/bayes.hpp"

namespace taskmatch {

std::vector<CanonicalKey> construct_y_set(const Scenario& scenario, int depth) {
    if (depth < 0) {
        throw std::invalid_argument("depth must be non-negative");
    }
    scenario.validate();
    std::vector<CanonicalKey> out;
    std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
    std::vector<MixedType> layer;
    for (const Prior& prior : scenario.priors) {
        if (seen.insert(canonical_key(prior.type)).second) {
            out.push_back(canonical_key(prior.type));
            if (!prior.type.is_pure()) {
                layer.push_back(prior.type);
            }
        }
    }
    const SkillMatrix& skills = scenario.skills;
    for (int d = 0; d < depth && !layer.empty(); ++d) {
        std::vector<MixedType> next;
        for (const MixedType& z : layer) {
            for (ServerId s = 0; s < skills.num_servers(); ++s) {
                if (failure_probability(skills, s, z) <= 0.0) {
                    continue;
                }
                MixedType y = posterior_on_failure(skills, s, z);
                CanonicalKey key = canonical_key(y);
                if (seen.insert(key).second) {
                    out.push_back(std::move(key));
                    next.push_back(std::move(y));
                }
            }
        }
        layer = std::move(next);
    }
    return out;
}

}  // namespace taskmatch
