// Acceptance run: prints one PASS/FAIL line per criterion and exits nonzero
// if any fails. Seeds are fixed so the run is reproducible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"
#include "taskmatch/analysis/flow_lp.hpp"
#include "taskmatch/analysis/planner.hpp"
#include "taskmatch/analysis/thresholds.hpp"
#include "taskmatch/analysis/y_set.hpp"
#include "taskmatch/core/bayes.hpp"
#include "taskmatch/core/canonical.hpp"
#include "taskmatch/engine/simulator.hpp"
#include "taskmatch/engine/stability.hpp"
#include "taskmatch/engine/sweep.hpp"
#include "taskmatch/ingest/table1.hpp"
#include "taskmatch/policies/policy.hpp"

using namespace taskmatch;
using namespace taskmatch::test;

namespace {

constexpr std::uint64_t kAsymmetricSeed = 2024;
constexpr std::uint64_t kMathSeSeed = 1;
constexpr double kAsymmetricHorizon = 2e5;
constexpr double kMathSeHorizon = 1e5;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

std::string fmt(const std::optional<double>& x) { return x ? fmt(*x) : "none"; }

bool near(const std::optional<double>& x, double target, double tol) {
    return x && std::abs(*x - target) <= tol;
}

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    failures += pass ? 0 : 1;
}

PolicySpec simple(PolicyKind kind) {
    PolicySpec spec;
    spec.kind = kind;
    return spec;
}

PolicySpec asymmetric_backpressure() {
    PolicySpec spec = simple(PolicyKind::BackpressureY);
    spec.y_set = std::vector<CanonicalKey>{canonical_key(MixedType({0.5, 0.5})),
                                           canonical_key(MixedType({0.0, 1.0}))};
    return spec;
}

RunConfig config(double horizon, std::uint64_t seed) {
    RunConfig cfg;
    cfg.horizon = horizon;
    cfg.seed = seed;
    return cfg;
}

std::optional<double> asymmetric_critical(const PolicySpec& spec, double lo, double hi,
                                          double* per_point = nullptr) {
    const auto grid = lambda_grid(lo, hi, 0.05);
    const auto t0 = Clock::now();
    const auto res = sweep(asymmetric_scenario(0.5), spec, grid,
                           config(kAsymmetricHorizon, kAsymmetricSeed));
    if (per_point) {
        // Wall time of the parallel sweep bounds the time of its slowest point.
        *per_point = seconds_since(t0);
    }
    return res.critical;
}

// Criterion 1: backpressure reaches the optimal rate 1.
std::optional<double> criterion1() {
    double wall = 0.0;
    const auto crit = asymmetric_critical(asymmetric_backpressure(), 0.85, 1.15, &wall);
    const bool pass = near(crit, 1.0, 0.05) && wall < 120.0;
    report(1, pass,
           "Asymmetric(0.5) bp-y critical " + fmt(crit) + " (target 1.00 +- 0.05), sweep wall " +
               fmt(wall, 3) + " s");
    return crit;
}

// Criterion 2: greedy stalls at 4a/(2+a) = 0.8.
void criterion2(const std::optional<double>& bp) {
    const auto crit = asymmetric_critical(simple(PolicyKind::PreemptiveGreedy), 0.65, 0.95);
    const bool gain = crit && bp && *bp >= 1.15 * *crit;
    report(2, near(crit, 0.8, 0.05) && gain,
           "greedy critical " + fmt(crit) + " (target 0.80 +- 0.05), bp/greedy " +
               (crit && bp ? fmt(*bp / *crit) : std::string("n/a")) + " (need >= 1.15)");
}

// Criterion 3: random policy, simulated and analytic.
void criterion3() {
    const auto crit = asymmetric_critical(simple(PolicyKind::Random), 0.65, 0.95);
    const double analytic = random_policy_threshold(asymmetric_scenario(0.5));
    report(3, near(crit, 0.8, 0.05) && analytic == 0.8,
           "random critical " + fmt(crit) + " (target 0.80 +- 0.05), analytic " +
               fmt(analytic, 17));
}

// Criterion 4: non-preemptive greedy is unstable above its bound.
void criterion4() {
    auto classify = [](double lambda) {
        const RunMetrics m = run(asymmetric_scenario(0.5, lambda),
                                 simple(PolicyKind::NonPreemptiveGreedy),
                                 config(kAsymmetricHorizon, kAsymmetricSeed));
        return classify_stability(m);
    };
    const Stability high = classify(0.95);
    const Stability low = classify(0.70);
    report(4, high == Stability::Unstable && low == Stability::Stable,
           "np-greedy at 0.95: " + std::string(stability_name(high)) + ", at 0.70: " +
               std::string(stability_name(low)) + " (bound " +
               fmt(asymmetric_thresholds(0.5).nonpreemptive_instability_bound) + ")");
}

// Criterion 5: flow LP recovers min(3a/(a+1), 2a).
void criterion5() {
    const auto t0 = Clock::now();
    bool pass = true;
    std::string detail;
    for (double a : {0.2, 0.5, 0.8}) {
        const double rate = max_stable_rate(asymmetric_scenario(a), {.max_depth = 1});
        const double want = std::min(3.0 * a / (a + 1.0), 2.0 * a);
        pass = pass && std::abs(rate - want) <= 1e-3;
        detail += "a=" + fmt(a) + ": " + fmt(rate, 6) + " vs " + fmt(want, 6) + "; ";
    }
    const double wall = seconds_since(t0);
    report(5, pass && wall < 10.0, detail + "wall " + fmt(wall, 3) + " s");
}

// Criterion 6: Math.SE ordering and levels, plus the delay comparison.
void criterion6() {
    const auto t0 = Clock::now();
    const Scenario sc = mathse_scenario();
    PolicySpec bp = simple(PolicyKind::BackpressureY);
    bp.y_set = construct_y_set(sc, 1);
    bp.greedy_x = true;
    const PolicySpec greedy = simple(PolicyKind::PreemptiveGreedy);
    const RunConfig cfg = config(kMathSeHorizon, kMathSeSeed);

    auto critical = [&](const PolicySpec& spec, double lo, double hi) {
        return sweep(sc, spec, lambda_grid(lo, hi, 0.05), cfg).critical;
    };
    const auto bp_crit = critical(bp, 3.9, 4.4);
    const auto greedy_crit = critical(greedy, 3.6, 4.1);
    const auto random_crit = critical(simple(PolicyKind::Random), 1.9, 2.5);
    const double formula = random_policy_threshold(sc);

    auto delay = [&](const PolicySpec& spec, double lambda) {
        Scenario s = sc;
        s.lambda = lambda;
        return run(s, spec, cfg).time_avg_n / lambda;
    };
    const double g3 = delay(greedy, 3.0), b3 = delay(bp, 3.0);
    const double g4 = delay(greedy, 4.0), b4 = delay(bp, 4.0);
    const double wall = seconds_since(t0);

    const bool pass = bp.y_set->size() == 66 && bp_crit && greedy_crit && *bp_crit > *greedy_crit &&
                      near(bp_crit, 4.10, 0.15) && near(greedy_crit, 3.82, 0.15) &&
                      near(random_crit, 2.2, 0.2) && random_crit &&
                      std::abs(*random_crit - formula) <= 0.05 * formula && g3 < b3 && b4 < g4 &&
                      wall < 1800.0;
    report(6, pass,
           "|Y| " + std::to_string(bp.y_set->size()) + ", bp " + fmt(bp_crit) + " (4.10), greedy " +
               fmt(greedy_crit) + " (3.82), random " + fmt(random_crit) + " vs formula " +
               fmt(formula) + "; delay at 3.0 greedy " + fmt(g3) + " < bp " + fmt(b3) +
               ", at 4.0 bp " + fmt(b4) + " < greedy " + fmt(g4) + "; wall " + fmt(wall, 3) + " s");
}

double l_inf(const MixedType& a, const MixedType& b) {
    double d = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        d = std::max(d, std::abs(a[c] - b[c]));
    }
    return d;
}

// Criterion 7: the randomized property suites.
void criterion7() {
    TestRng gen(7007);
    double commute = 0.0, norm = 0.0, marginal = 0.0;
    for (int i = 0; i < kPropertyCases; ++i) {
        const std::size_t classes = pick(gen, 2, 8);
        const auto sk = random_skills(gen, 2, classes);
        const auto z = random_type(gen, classes, true);
        if (failure_probability(sk, 0, z) > 0.0 && failure_probability(sk, 1, z) > 0.0) {
            const auto a = posterior_on_failure(sk, 0, posterior_on_failure(sk, 1, z));
            const auto b = posterior_on_failure(sk, 1, posterior_on_failure(sk, 0, z));
            commute = std::max(commute, l_inf(a, b));
            for (const auto* p : {&a, &b}) {
                double s = 0.0;
                for (double w : p->weights()) {
                    s += w;
                }
                norm = std::max(norm, std::abs(s - 1.0));
            }
        }
        const auto fb = random_feedback(gen, 2, classes, pick(gen, 1, 5));
        double total = 0.0;
        for (FeedbackId f = 0; f < fb.num_symbols(); ++f) {
            total += feedback_failure_weight(sk, fb, 0, z, f);
        }
        marginal = std::max(marginal, std::abs(total - failure_probability(sk, 0, z)));
    }

    // Conservation and bookkeeping after every event of kPropertyCases runs.
    int broken_runs = 0;
    for (int i = 0; i < kPropertyCases; ++i) {
        const std::size_t classes = pick(gen, 1, 4);
        const std::size_t servers = pick(gen, 1, 3);
        Scenario sc = random_scenario(gen, servers, classes, pick(gen, 1, 3), uniform(gen, 0.2, 3));
        PolicySpec spec = simple(static_cast<PolicyKind>(i % 6));
        if (spec.kind == PolicyKind::ModifiedBackpressureY) {
            sc.feedback = random_feedback(gen, servers, classes, pick(gen, 1, 3));
        }
        if (spec.uses_virtual_queue()) {
            spec.y_set = construct_y_set(sc, 1);
        }
        if (spec.kind == PolicyKind::BackpressureEps) {
            spec.epsilon = 0.5;
        }
        spec.seed = static_cast<std::uint64_t>(i);
        Simulator sim(sc, spec, config(20.0, static_cast<std::uint64_t>(i)));
        bool ok = true;
        sim.set_observer([&](const EventRecord&) {
            ok = ok && !sim.check_invariants() &&
                 sim.arrivals() == sim.completions() + sim.live();
        });
        sim.finish();
        broken_runs += ok ? 0 : 1;
    }

    // Single-symbol modified backpressure against backpressure.
    int mismatches = 0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t classes = pick(gen, 2, 4);
        const std::size_t servers = pick(gen, 1, 3);
        const auto sk = random_skills(gen, servers, classes);
        const FeedbackModel fb = FeedbackModel::uninformative(servers, classes);
        TypeTable table(sk, &fb);
        std::vector<TypeId> ids;
        std::vector<CanonicalKey> keys;
        for (int k = 0; k < 6; ++k) {
            const TypeId z = table.intern(random_type(gen, classes, true));
            ids.push_back(z);
            const TypeId next = table.successor(z, pick(gen, 0, servers - 1));
            if (next != kNoType) {
                ids.push_back(next);
            }
        }
        for (TypeId z : ids) {
            if (uniform(gen) < 0.7) {
                keys.push_back(table.key(z));
            }
        }
        const TrackedSet y(keys);
        Occupancy occ(table, {.greedy_index = false, .virtual_index = true, .epsilon = {}});
        for (TypeId z : ids) {
            const auto n = static_cast<int>(pick(gen, 0, 6));
            for (int k = 0; k < n; ++k) {
                occ.add(z, !y.contains(table, z) || uniform(gen) < 0.2);
            }
        }
        Rng r1(static_cast<std::uint64_t>(i)), r2(static_cast<std::uint64_t>(i));
        const bool greedy_x = i % 2 == 0;
        mismatches += modified_backpressure_assign(table, occ, y, greedy_x, r1) ==
                              backpressure_assign(table, occ, y, greedy_x, r2)
                          ? 0
                          : 1;
    }

    const bool pass = commute <= 1e-10 && norm <= 1e-9 && marginal <= 1e-10 && broken_runs == 0 &&
                      mismatches == 0;
    report(7, pass,
           "commutativity " + fmt(commute, 3) + ", normalization " + fmt(norm, 3) +
               ", marginalization " + fmt(marginal, 3) + ", runs with broken invariants " +
               std::to_string(broken_runs) + "/" + std::to_string(kPropertyCases) +
               ", |F|=1 mismatches " + std::to_string(mismatches) + "/1000");
}

// Criterion 8: closed-form and brute-force oracles.
void criterion8() {
    Scenario mm1;
    mm1.classes = {"c"};
    mm1.servers = {"s"};
    mm1.skills = SkillMatrix({{1.0}}, {1.0});
    mm1.lambda = 0.5;
    mm1.priors = {{MixedType::pure(1, 0), 1.0}};
    const RunMetrics q = run(mm1, simple(PolicyKind::PreemptiveGreedy), config(1e5, 42));
    const bool mm1_ok = std::abs(q.time_avg_n - 1.0) <= 0.1;

    double worst_little = 0.0;
    for (auto [kind, lambda] : {std::pair{PolicyKind::PreemptiveGreedy, 0.6},
                                std::pair{PolicyKind::Random, 0.6},
                                std::pair{PolicyKind::BackpressureY, 0.8}}) {
        PolicySpec spec = kind == PolicyKind::BackpressureY ? asymmetric_backpressure() : simple(kind);
        const RunMetrics m = run(asymmetric_scenario(0.5, lambda), spec, config(1e5, 8));
        worst_little = std::max(worst_little, std::abs(mean_sojourn(m) / estimate_delay(m, lambda) - 1.0));
    }
    worst_little = std::max(worst_little, std::abs(mean_sojourn(q) / estimate_delay(q, 0.5) - 1.0));

    TestRng gen(8008);
    int below = 0;
    std::function<double(const SkillMatrix&, MixedType, int)> best;
    best = [&](const SkillMatrix& sk, MixedType z, int steps) -> double {
        if (steps == 0) {
            return 0.0;
        }
        double top = 0.0;
        for (ServerId s = 0; s < sk.num_servers(); ++s) {
            const double psi = failure_probability(sk, s, z);
            const double g = psi == 0.0 ? 1.0
                                        : 1.0 - psi * (1.0 - best(sk, posterior_on_failure(sk, s, z),
                                                                  steps - 1));
            top = std::max(top, g);
        }
        return top;
    };
    for (int i = 0; i < 200; ++i) {
        const auto sk = random_skills(gen, 2, 3, 1.0);
        const auto z = random_type(gen, 3, true);
        const int tau = static_cast<int>(pick(gen, 0, 3));
        const double g = plan_single_task(sk, z, tau).success;
        below += g >= (1.0 - std::exp(-1.0)) * best(sk, z, tau + 1) - 1e-12 ? 0 : 1;
    }
    const Scenario asym = asymmetric_scenario(0.5);
    const double g = plan_single_task(asym.skills, MixedType({0.5, 0.5}), 1).success;
    const double opt = best(asym.skills, MixedType({0.5, 0.5}), 2);

    const bool pass = mm1_ok && worst_little <= 0.05 && below == 0 && std::abs(g - 0.875) <= 1e-12 &&
                      std::abs(g - opt) <= 1e-12;
    report(8, pass,
           "M/M/1 occupancy " + fmt(q.time_avg_n) + " (1.0 +- 10%), Little vs sojourn worst " +
               fmt(100 * worst_little, 3) + "%, competitive failures " + std::to_string(below) +
               "/200, g " + fmt(g, 6) + " vs optimum " + fmt(opt, 6));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    try {
        const auto bp = criterion1();
        criterion2(bp);
        criterion3();
        criterion4();
        criterion5();
        criterion6();
        criterion7();
        criterion8();
    } catch (const std::exception& e) {
        std::printf("acceptance aborted: %s\n", e.what());
        return 1;
    }
    std::printf("%d of 8 criteria failed; total wall %.1f s\n", failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
