#ifndef TASKMATCH_TESTS_SUPPORT_HPP
#define TASKMATCH_TESTS_SUPPORT_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "taskmatch/core/model.hpp"

namespace taskmatch::test {

/// Number of randomized cases each property suite must pass.
inline constexpr int kPropertyCases = 10'000;

using TestRng = std::mt19937_64;

inline double uniform(TestRng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t pick(TestRng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random weights on the simplex. With `sparse`, roughly a third of the
/// coordinates are zeroed (at least one stays positive).
inline std::vector<double> random_simplex(TestRng& rng, std::size_t n, bool sparse = false) {
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& x : w) {
        x = uniform(rng, 0.01, 1.0);
        if (sparse && uniform(rng) < 0.33) {
            x = 0.0;
        }
        sum += x;
    }
    if (sum == 0.0) {
        w[pick(rng, 0, n - 1)] = 1.0;
        sum = 1.0;
    }
    for (auto& x : w) {
        x /= sum;
    }
    return w;
}

inline MixedType random_type(TestRng& rng, std::size_t n, bool sparse = false) {
    return MixedType(random_simplex(rng, n, sparse));
}

/// Random skills with p in [0, pmax] and mu in [0.5, 2].
inline SkillMatrix random_skills(TestRng& rng, std::size_t servers, std::size_t classes,
                                 double pmax = 0.95) {
    std::vector<std::vector<double>> p(servers, std::vector<double>(classes));
    std::vector<double> mu(servers);
    for (std::size_t s = 0; s < servers; ++s) {
        for (auto& x : p[s]) {
            x = uniform(rng, 0.0, pmax);
        }
        mu[s] = uniform(rng, 0.5, 2.0);
    }
    return SkillMatrix(std::move(p), std::move(mu));
}

/// Random feedback model: each (s,c) row is a random pmf over `symbols`.
inline FeedbackModel random_feedback(TestRng& rng, std::size_t servers, std::size_t classes,
                                     std::size_t symbols) {
    std::vector<std::string> names;
    for (std::size_t f = 0; f < symbols; ++f) {
        names.push_back("f" + std::to_string(f));
    }
    std::vector<double> beta;
    for (std::size_t i = 0; i < servers * classes; ++i) {
        const auto row = random_simplex(rng, symbols);
        beta.insert(beta.end(), row.begin(), row.end());
    }
    return FeedbackModel(std::move(names), servers, classes, std::move(beta));
}

/// Scenario with random skills and a handful of random priors.
inline Scenario random_scenario(TestRng& rng, std::size_t servers, std::size_t classes,
                                std::size_t priors, double lambda) {
    Scenario sc;
    for (std::size_t c = 0; c < classes; ++c) {
        sc.classes.push_back("c" + std::to_string(c));
    }
    for (std::size_t s = 0; s < servers; ++s) {
        sc.servers.push_back("s" + std::to_string(s));
    }
    sc.skills = random_skills(rng, servers, classes);
    sc.lambda = lambda;
    const auto probs = random_simplex(rng, priors);
    double total = 0.0;
    for (std::size_t i = 0; i < priors; ++i) {
        const double prob = i + 1 < priors ? probs[i] : 1.0 - total;
        total += prob;
        sc.priors.push_back({random_type(rng, classes, true), prob});
    }
    return sc;
}

}  // namespace taskmatch::test

#endif
