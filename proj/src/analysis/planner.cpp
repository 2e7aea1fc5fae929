#include "taskmatch/analysis/planner.hpp"

#include <stdexcept>

#include "taskmatch/core/bayes.hpp"

namespace taskmatch {

SingleTaskPlan plan_single_task(const SkillMatrix& skills, const MixedType& z0, int tau) {
    if (tau < 0) {
        throw std::invalid_argument("tau must be non-negative");
    }
    if (z0.size() != skills.num_classes() || skills.num_servers() == 0) {
        throw std::invalid_argument("type and skill matrix dimensions disagree");
    }
    SingleTaskPlan plan;
    MixedType z = z0;
    double fail = 1.0;
    for (int t = 0; t <= tau; ++t) {
        ServerId best = 0;
        double best_psi = failure_probability(skills, 0, z);
        for (ServerId s = 1; s < skills.num_servers(); ++s) {
            const double psi = failure_probability(skills, s, z);
            if (psi < best_psi) {
                best = s;
                best_psi = psi;
            }
        }
        plan.sequence.push_back(best);
        fail *= best_psi;
        if (best_psi <= 0.0) {
            fail = 0.0;
            break;
        }
        z = posterior_on_failure(skills, best, z);
    }
    plan.success = 1.0 - fail;
    return plan;
}

double sequence_success(const SkillMatrix& skills, const MixedType& z0,
                        const std::vector<ServerId>& sequence) {
    MixedType z = z0;
    double fail = 1.0;
    for (ServerId s : sequence) {
        const double psi = failure_probability(skills, s, z);
        fail *= psi;
        if (psi <= 0.0) {
            return 1.0;
        }
        z = posterior_on_failure(skills, s, z);
    }
    return 1.0 - fail;
}

}  // namespace taskmatch
