#include "taskmatch/core/bayes.hpp"

#include <algorithm>

namespace taskmatch {

namespace {

void check_dims(const SkillMatrix& skills, ServerId s, const MixedType& z) {
    if (z.size() != skills.num_classes() || s >= skills.num_servers()) {
        throw InvalidScenario("mixed type or server index does not match skill matrix");
    }
}

// Renormalize in place; the raw sum is returned for callers that need it.
double normalize(std::vector<double>& w) {
    double sum = 0.0;
    for (double x : w) {
        sum += x;
    }
    for (double& x : w) {
        x /= sum;
    }
    return sum;
}

}  // namespace

double failure_probability(const SkillMatrix& skills, ServerId s, const MixedType& z) {
    check_dims(skills, s, z);
    const auto row = skills.row(s);
    double psi = 0.0;
    for (ClassId c = 0; c < z.size(); ++c) {
        psi += z[c] * (1.0 - row[c]);
    }
    return std::clamp(psi, 0.0, 1.0);
}

MixedType posterior_on_failure(const SkillMatrix& skills, ServerId s, const MixedType& z) {
    const double psi = failure_probability(skills, s, z);
    if (!(psi > 0.0)) {
        throw UndefinedPosterior("posterior undefined: failure has probability zero");
    }
    const auto row = skills.row(s);
    std::vector<double> w(z.size());
    for (ClassId c = 0; c < z.size(); ++c) {
        w[c] = z[c] * (1.0 - row[c]) / psi;
    }
    normalize(w);
    return MixedType::unchecked(std::move(w));
}

double feedback_failure_weight(const SkillMatrix& skills, const FeedbackModel& fb, ServerId s,
                               const MixedType& z, FeedbackId f) {
    if (fb.num_classes() != z.size() || fb.num_servers() != skills.num_servers() ||
        f >= fb.num_symbols()) {
        throw InvalidScenario("feedback model dimensions do not match");
    }
    const double psi = failure_probability(skills, s, z);
    // sum_c z_c beta(s,c,f), divided by sum_c z_c (= 1 up to rounding) so a
    // feedback symbol with beta == 1 everywhere yields exactly psi.
    double mass = 0.0;
    double norm = 0.0;
    for (ClassId c = 0; c < z.size(); ++c) {
        mass += z[c] * fb.beta(s, c, f);
        norm += z[c];
    }
    return psi * (mass / norm);
}

FeedbackPosterior posterior_with_feedback(const SkillMatrix& skills, const FeedbackModel& fb,
                                          ServerId s, const MixedType& z, FeedbackId f) {
    const double xi = feedback_failure_weight(skills, fb, s, z, f);
    if (!(xi > 0.0)) {
        throw UndefinedPosterior("posterior undefined: failure with this feedback has probability zero");
    }
    const auto row = skills.row(s);
    std::vector<double> w(z.size());
    for (ClassId c = 0; c < z.size(); ++c) {
        w[c] = z[c] * (1.0 - row[c]) * fb.beta(s, c, f) / xi;
    }
    const double sum = normalize(w);
    if (!(sum > 0.0)) {
        throw UndefinedPosterior("posterior undefined: feedback impossible under every class in support");
    }
    return {MixedType::unchecked(std::move(w)), xi};
}

}  // namespace taskmatch
