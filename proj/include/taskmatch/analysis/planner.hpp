#ifndef TASKMATCH_ANALYSIS_PLANNER_HPP
#define TASKMATCH_ANALYSIS_PLANNER_HPP

#include <vector>

#include "taskmatch/core/model.hpp"

namespace taskmatch {

struct SingleTaskPlan {
    std::vector<ServerId> sequence;
    /// Probability that the task is resolved by one of the attempts.
    double success = 0.0;
};

/// Greedy attempt sequence for one task of type z0 over steps 0..tau: each
/// step picks the server least likely to fail (lowest index on ties) and
/// moves to the posterior. Stops early once some attempt cannot fail.
SingleTaskPlan plan_single_task(const SkillMatrix& skills, const MixedType& z0, int tau);

/// 1 - prod_t psi_{s(t)}(z(t)) for an arbitrary sequence.
double sequence_success(const SkillMatrix& skills, const MixedType& z0,
                        const std::vector<ServerId>& sequence);

}  // namespace taskmatch

#endif
