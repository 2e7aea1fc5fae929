#include "taskmatch/analysis/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace taskmatch {

AsymmetricThresholds asymmetric_thresholds(double a) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw std::invalid_argument("asymmetric parameter a must lie in (0, 1]");
    }
    AsymmetricThresholds t;
    t.optimal = std::min(3.0 * a / (a + 1.0), 2.0 * a);
    t.random = 4.0 * a / (2.0 + a);
    t.preemptive_greedy = t.random;
    t.known_type = 2.0 * a;
    // Positive root of (8/a + 1) x^2 + (8/a - 14) x - 16 = 0.
    const double qa = 8.0 / a + 1.0;
    const double qb = 8.0 / a - 14.0;
    const double qc = -16.0;
    t.nonpreemptive_instability_bound = (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
    return t;
}

double random_policy_threshold(const Scenario& scenario) {
    scenario.validate();
    const std::size_t classes = scenario.num_classes();
    std::vector<double> mass(classes, 0.0);
    for (const Prior& prior : scenario.priors) {
        for (ClassId c = 0; c < classes; ++c) {
            mass[c] += prior.prob * prior.type[c];
        }
    }
    double load = 0.0;
    for (ClassId c = 0; c < classes; ++c) {
        if (mass[c] <= 0.0) {
            continue;
        }
        const double cap = scenario.skills.class_capacity(c);
        if (cap <= 0.0) {
            throw InfiniteCongestion("class '" + scenario.classes[c] +
                                     "' receives arrivals but no server can resolve it");
        }
        load += mass[c] / cap;
    }
    if (load <= 0.0) {
        throw InfiniteCongestion("no arrival mass");
    }
    return 1.0 / load;
}

}  // namespace taskmatch
