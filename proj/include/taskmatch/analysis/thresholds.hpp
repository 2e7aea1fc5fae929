#ifndef TASKMATCH_ANALYSIS_THRESHOLDS_HPP
#define TASKMATCH_ANALYSIS_THRESHOLDS_HPP

#include <stdexcept>

#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// Some class with positive arrival mass has no server able to resolve it.
class InfiniteCongestion : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Closed-form critical rates for the two-server asymmetric system.
struct AsymmetricThresholds {
    /// Largest rate any policy can stabilize.
    double optimal = 0.0;
    double random = 0.0;
    double preemptive_greedy = 0.0;
    /// Non-preemptive greedy is unstable above this rate. It is an upper
    /// bound on that policy's critical rate, not the critical rate itself.
    double nonpreemptive_instability_bound = 0.0;
    /// Critical rate when the class of every task is known on arrival.
    double known_type = 0.0;
};

/// Requires 0 < a <= 1.
AsymmetricThresholds asymmetric_thresholds(double a);

/// Critical rate of the random policy: the inverse of
/// sum_c q_c / (sum_s mu_s p(s,c)), where q_c is the arrival mass of class c.
/// Throws InfiniteCongestion if a class with q_c > 0 has zero capacity.
double random_policy_threshold(const Scenario& scenario);

}  // namespace taskmatch

#endif
