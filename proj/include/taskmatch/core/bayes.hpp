#ifndef TASKMATCH_CORE_BAYES_HPP
#define TASKMATCH_CORE_BAYES_HPP

#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// Probability that server s fails an attempt on a task of mixed type z:
/// sum_c z_c (1 - p(s,c)).
double failure_probability(const SkillMatrix& skills, ServerId s, const MixedType& z);

/// Mixed type after a failed attempt by s. Throws UndefinedPosterior when
/// failure is impossible.
MixedType posterior_on_failure(const SkillMatrix& skills, ServerId s, const MixedType& z);

struct FeedbackPosterior {
    MixedType type;
    /// psi_s(z) * sum_c z_c beta(s,c,f)
    double xi = 0.0;
};

/// Posterior after a failure by s that produced feedback f, together with
/// the feedback-failure weight xi used by the modified backpressure rule.
FeedbackPosterior posterior_with_feedback(const SkillMatrix& skills, const FeedbackModel& fb,
                                          ServerId s, const MixedType& z, FeedbackId f);

/// xi_s(z,f) alone; sums over f to psi_s(z).
double feedback_failure_weight(const SkillMatrix& skills, const FeedbackModel& fb, ServerId s,
                               const MixedType& z, FeedbackId f);

}  // namespace taskmatch

#endif
