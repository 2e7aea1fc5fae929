#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <map>

#include "support.hpp"
#include "taskmatch/core/bayes.hpp"
#include "taskmatch/policies/policy.hpp"

using namespace taskmatch;
using namespace taskmatch::test;

namespace {

const MixedType kZp({0.5, 0.5});
const MixedType kZpp({0.0, 1.0});

// Asymmetric(0.5) with z' and z'' interned as ids 0 and 1.
struct AsymmetricState {
    Scenario scenario = asymmetric_scenario(0.5, 1.0);
    TypeTable table{scenario.skills};
    TypeId zp = table.intern(kZp);
    TypeId zpp = table.intern(kZpp);

    Occupancy occupancy(Occupancy::Options opt = {}) { return Occupancy(table, opt); }
};

void fill(Occupancy& occ, TypeId z, int tracked, int virt = 0) {
    for (int i = 0; i < tracked; ++i) {
        occ.add(z, false);
    }
    for (int i = 0; i < virt; ++i) {
        occ.add(z, true);
    }
}

TrackedSet tracked_of(const TypeTable& table, std::initializer_list<TypeId> ids) {
    std::vector<CanonicalKey> keys;
    for (TypeId z : ids) {
        keys.push_back(table.key(z));
    }
    return TrackedSet(keys);
}

// Brute-force arg-min of psi_s over the given nonempty types.
std::vector<TypeId> argmin_oracle(const TypeTable& table, const std::vector<TypeId>& nonempty,
                                  ServerId s, bool filter) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<TypeId> out;
    for (TypeId z : nonempty) {
        const double psi = table.psi(z, s);
        if (filter && psi >= 1.0) {
            continue;
        }
        if (psi < best) {
            best = psi;
            out = {z};
        } else if (psi == best) {
            out.push_back(z);
        }
    }
    return out;
}

bool contains(const std::vector<TypeId>& v, TypeId z) {
    return std::find(v.begin(), v.end(), z) != v.end();
}

}  // namespace

TEST(PolicySpec, ValidatesParameters) {
    const Scenario sc = asymmetric_scenario(0.5, 1.0);
    PolicySpec spec;
    spec.kind = PolicyKind::BackpressureY;
    EXPECT_THROW(spec.validate(sc), InvalidPolicy);
    spec.y_set = std::vector<CanonicalKey>{canonical_key(kZp)};
    EXPECT_NO_THROW(spec.validate(sc));

    spec.kind = PolicyKind::BackpressureEps;
    spec.y_set.reset();
    spec.epsilon = 2.5;
    EXPECT_THROW(spec.validate(sc), InvalidPolicy);
    spec.epsilon = 0.5;
    EXPECT_NO_THROW(spec.validate(sc));

    PolicySpec mod;
    mod.kind = PolicyKind::ModifiedBackpressureY;
    mod.y_set = std::vector<CanonicalKey>{};
    EXPECT_THROW(mod.validate(sc), InvalidPolicy);

    EXPECT_EQ(parse_policy_kind("np-greedy"), PolicyKind::NonPreemptiveGreedy);
    EXPECT_THROW(parse_policy_kind("max-weight"), InvalidPolicy);
}

TEST(RandomPolicy, EmptySystemIdles) {
    AsymmetricState st;
    auto occ = st.occupancy();
    Rng rng(1);
    for (const auto& c : random_assign(occ, 2, rng)) {
        EXPECT_EQ(c.kind, ServerChoice::Kind::Idle);
    }
}

TEST(RandomPolicy, SingleTaskIsEveryonesChoice) {
    AsymmetricState st;
    auto occ = st.occupancy();
    occ.add(st.zpp, false);
    Rng rng(1);
    for (const auto& c : random_assign(occ, 2, rng)) {
        ASSERT_EQ(c.kind, ServerChoice::Kind::Sample);
        EXPECT_EQ(occ.resolve_ordinal(c.pool, c.ordinal).first, st.zpp);
    }
}

TEST(RandomPolicy, SamplesByTaskNotByQueue) {
    // Both labelings of the (3,1) state give the same 3/4 split.
    for (bool swap : {false, true}) {
        AsymmetricState st;
        auto occ = st.occupancy();
        const TypeId big = swap ? st.zpp : st.zp;
        const TypeId small = swap ? st.zp : st.zpp;
        fill(occ, big, 3);
        fill(occ, small, 1);
        Rng rng(2024);
        int hits = 0;
        const int draws = 100'000;
        for (int i = 0; i < draws; ++i) {
            const auto c = random_select(occ, rng);
            hits += occ.resolve_ordinal(c.pool, c.ordinal).first == big ? 1 : 0;
        }
        EXPECT_NEAR(hits / static_cast<double>(draws), 0.75, 0.01);
    }
}

TEST(GreedyPolicy, AsymmetricPrefersMixedType) {
    AsymmetricState st;
    auto occ = st.occupancy({.greedy_index = true, .virtual_index = false, .epsilon = {}});
    fill(occ, st.zp, 2);
    fill(occ, st.zpp, 5);
    Rng rng(1);
    const auto a = preemptive_greedy_assign(occ, rng);
    EXPECT_EQ(a[0], ServerChoice::queue(st.zp, Pool::Tracked));
    EXPECT_EQ(a[1], ServerChoice::queue(st.zp, Pool::Tracked));
}

TEST(GreedyPolicy, SingletonQueueServedEvenWithCertainFailure) {
    AsymmetricState st;
    auto occ = st.occupancy({.greedy_index = true, .virtual_index = false, .epsilon = {}});
    fill(occ, st.zpp, 3);
    Rng rng(1);
    const auto a = preemptive_greedy_assign(occ, rng);
    EXPECT_EQ(a[0], ServerChoice::queue(st.zpp, Pool::Tracked));
    EXPECT_EQ(a[1], ServerChoice::queue(st.zpp, Pool::Tracked));
}

TEST(NonPreemptiveGreedy, IdlesWhenOnlyHopelessWorkRemains) {
    AsymmetricState st;
    auto occ = st.occupancy({.greedy_index = true, .virtual_index = false, .epsilon = {}});
    fill(occ, st.zpp, 3);
    Rng rng(1);
    EXPECT_EQ(nonpreemptive_greedy_select(occ, 1, rng), ServerChoice::idle());
    EXPECT_EQ(nonpreemptive_greedy_select(occ, 0, rng), ServerChoice::queue(st.zpp, Pool::Tracked));
}

TEST(GreedyPolicy, MatchesBruteForceArgmin) {
    TestRng gen(7);
    for (int trial = 0; trial < 300; ++trial) {
        auto skills = random_skills(gen, 3, 4);
        // Some zero skills so psi = 1 occurs for the non-preemptive filter.
        std::vector<std::vector<double>> p(3, std::vector<double>(4));
        for (ServerId s = 0; s < 3; ++s) {
            for (ClassId c = 0; c < 4; ++c) {
                p[s][c] = uniform(gen) < 0.3 ? 0.0 : skills.p(s, c);
            }
        }
        const SkillMatrix sk(p, {1.0, 1.0, 1.0});
        TypeTable table(sk);
        for (bool indexed : {false, true}) {
            Occupancy occ(table, {.greedy_index = indexed, .virtual_index = false, .epsilon = {}});
            std::vector<TypeId> nonempty;
            for (int k = 0; k < 6; ++k) {
                const TypeId z = table.intern(uniform(gen) < 0.3
                                                  ? MixedType::pure(4, pick(gen, 0, 3))
                                                  : random_type(gen, 4, true));
                if (!contains(nonempty, z)) {
                    nonempty.push_back(z);
                }
                occ.add(z, false);
            }
            Rng rng(trial);
            for (ServerId s = 0; s < 3; ++s) {
                const auto pre = preemptive_greedy_select(occ, s, rng);
                ASSERT_TRUE(contains(argmin_oracle(table, nonempty, s, false), pre.type));
                const auto np = nonpreemptive_greedy_select(occ, s, rng);
                const auto oracle = argmin_oracle(table, nonempty, s, true);
                if (oracle.empty()) {
                    ASSERT_EQ(np.kind, ServerChoice::Kind::Idle);
                } else {
                    ASSERT_TRUE(contains(oracle, np.type));
                }
            }
        }
    }
}

TEST(GreedyPolicy, InvariantToRelabeling) {
    TestRng gen(8);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sk = random_skills(gen, 3, 3);
        std::vector<MixedType> types;
        for (int k = 0; k < 5; ++k) {
            types.push_back(random_type(gen, 3));
        }
        TypeTable forward(sk);
        TypeTable backward(sk);
        Occupancy fo(forward, {});
        Occupancy bo(backward, {});
        for (const auto& z : types) {
            fo.add(forward.intern(z), false);
        }
        for (auto it = types.rbegin(); it != types.rend(); ++it) {
            bo.add(backward.intern(*it), false);
        }
        Rng r1(1), r2(1);
        const auto a = preemptive_greedy_assign(fo, r1);
        const auto b = preemptive_greedy_assign(bo, r2);
        for (ServerId s = 0; s < 3; ++s) {
            EXPECT_EQ(forward.key(a[s].type), backward.key(b[s].type));
        }
    }
}

TEST(BackpressureWeight, EmptyQueuesGiveZero) {
    AsymmetricState st;
    auto occ = st.occupancy();
    const auto y = tracked_of(st.table, {st.zp, st.zpp});
    EXPECT_EQ(bp_weight(st.table, occ, y, 0, st.zp), 0.0);
    EXPECT_EQ(bp_weight(st.table, occ, y, 1, st.zpp), 0.0);
}

TEST(BackpressureWeight, AsymmetricExample) {
    AsymmetricState st;
    auto occ = st.occupancy();
    fill(occ, st.zp, 10);
    fill(occ, st.zpp, 4);
    const auto y = tracked_of(st.table, {st.zp, st.zpp});
    EXPECT_DOUBLE_EQ(bp_weight(st.table, occ, y, 0, st.zp), 9.0);
    EXPECT_DOUBLE_EQ(bp_weight(st.table, occ, y, 1, st.zp), 8.0);
    EXPECT_DOUBLE_EQ(bp_weight(st.table, occ, y, 0, st.zpp), 2.0);
    EXPECT_DOUBLE_EQ(bp_weight(st.table, occ, y, 1, st.zpp), 0.0);

    Rng rng(1);
    const auto a = backpressure_assign(st.table, occ, y, false, rng);
    EXPECT_EQ(a[0], ServerChoice::queue(st.zp, Pool::Tracked));
    EXPECT_EQ(a[1], ServerChoice::queue(st.zp, Pool::Tracked));
}

TEST(BackpressureWeight, SuccessorOutsideTrackedSetUsesX) {
    AsymmetricState st;
    auto occ = st.occupancy();
    fill(occ, st.zp, 5);
    fill(occ, st.zpp, 0, 20);
    const auto y = tracked_of(st.table, {st.zp});
    EXPECT_DOUBLE_EQ(bp_weight(st.table, occ, y, 1, st.zp), -5.0);
}

TEST(BackpressurePolicy, ModeSelection) {
    AsymmetricState st;
    const auto y = tracked_of(st.table, {st.zp, st.zpp});
    {
        auto occ = st.occupancy();
        fill(occ, st.zp, 1);
        Rng rng(1);
        const auto a = backpressure_assign(st.table, occ, y, false, rng);
        EXPECT_EQ(a[0].pool, Pool::Tracked);
        EXPECT_EQ(a[0].kind, ServerChoice::Kind::Queue);
    }
    {
        // Min class capacity is positive, so with no tracked work X is served.
        ASSERT_GT(st.scenario.skills.min_class_capacity(), 0.0);
        auto occ = st.occupancy();
        fill(occ, st.zpp, 0, 3);
        Rng rng(1);
        for (const auto& c : backpressure_assign(st.table, occ, y, false, rng)) {
            EXPECT_EQ(c.kind, ServerChoice::Kind::Sample);
            EXPECT_EQ(c.pool, Pool::Virtual);
        }
        Rng rng2(1);
        for (const auto& c : backpressure_assign(st.table, occ, y, true, rng2)) {
            EXPECT_EQ(c, ServerChoice::queue(st.zpp, Pool::Virtual));
        }
    }
}

TEST(BackpressurePolicy, WeightsAreLinearInCounts) {
    TestRng gen(9);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sk = random_skills(gen, 2, 3);
        TypeTable table(sk);
        std::vector<TypeId> ids;
        for (int k = 0; k < 4; ++k) {
            ids.push_back(table.intern(random_type(gen, 3, true)));
        }
        std::vector<CanonicalKey> keys;
        for (TypeId z : ids) {
            keys.push_back(table.key(z));
        }
        const TrackedSet y(keys);
        Occupancy once(table, {});
        Occupancy twice(table, {});
        for (TypeId z : ids) {
            const int n = static_cast<int>(pick(gen, 0, 6));
            const int x = static_cast<int>(pick(gen, 0, 3));
            fill(once, z, n, x);
            fill(twice, z, 2 * n, 2 * x);
        }
        for (ServerId s = 0; s < 2; ++s) {
            for (TypeId z : ids) {
                EXPECT_DOUBLE_EQ(2.0 * bp_weight(table, once, y, s, z),
                                 bp_weight(table, twice, y, s, z));
            }
        }
    }
}

TEST(BackpressurePolicy, DeterministicUnderSeed) {
    AsymmetricState st;
    auto occ = st.occupancy();
    fill(occ, st.zp, 3, 1);
    fill(occ, st.zpp, 3, 2);
    const auto y = tracked_of(st.table, {st.zp, st.zpp});
    Rng r1(77), r2(77);
    EXPECT_EQ(backpressure_assign(st.table, occ, y, false, r1),
              backpressure_assign(st.table, occ, y, false, r2));
}

TEST(BackpressureEps, CellsHaveBoundedDiameter) {
    TestRng gen(10);
    for (std::size_t classes : {2u, 3u, 4u}) {
        for (double eps : {0.3, 0.75, 2.0}) {
            std::map<CellIndex, std::vector<MixedType>> cells;
            for (int i = 0; i < 10'000; ++i) {
                auto z = random_type(gen, classes, true);
                cells[bp_eps_cell(z, eps)].push_back(std::move(z));
            }
            double worst = 0.0;
            for (const auto& [cell, members] : cells) {
                for (std::size_t i = 0; i < members.size(); ++i) {
                    for (std::size_t j = i + 1; j < members.size(); ++j) {
                        double d = 0.0;
                        for (std::size_t c = 0; c < classes; ++c) {
                            d += std::abs(members[i][c] - members[j][c]);
                        }
                        worst = std::max(worst, d);
                    }
                }
            }
            EXPECT_LE(worst, eps) << classes << " classes, eps " << eps;
        }
    }
}

TEST(BackpressureEps, SeparatesDistantTypes) {
    const MixedType a = MixedType::pure(3, 0);
    const MixedType b = MixedType::pure(3, 2);
    EXPECT_EQ(bp_eps_cell(a, 0.5), bp_eps_cell(a, 0.5));
    EXPECT_NE(bp_eps_cell(a, 0.5), bp_eps_cell(b, 0.5));
    EXPECT_THROW(bp_eps_cell(a, 0.0), std::invalid_argument);
}

TEST(BackpressureEps, SingleTypeIsEveryonesChoice) {
    AsymmetricState st;
    auto occ = st.occupancy({.greedy_index = false, .virtual_index = false, .epsilon = 0.5});
    fill(occ, st.zpp, 2);
    Rng rng(1);
    for (const auto& c : backpressure_eps_assign(st.table, occ, rng)) {
        EXPECT_EQ(c, ServerChoice::queue(st.zpp, Pool::Tracked));
    }
}

TEST(BackpressureEps, WeightsUseCellAggregates) {
    TestRng gen(12);
    for (int trial = 0; trial < 200; ++trial) {
        const auto sk = random_skills(gen, 2, 3);
        TypeTable table(sk);
        const double eps = uniform(gen, 0.2, 2.0);
        Occupancy occ(table, {.greedy_index = false, .virtual_index = false, .epsilon = eps});
        std::vector<TypeId> ids;
        for (int k = 0; k < 8; ++k) {
            const TypeId z = table.intern(random_type(gen, 3, true));
            ids.push_back(z);
            fill(occ, z, static_cast<int>(pick(gen, 1, 5)));
        }
        auto cell_total = [&](TypeId z) {
            const CellIndex cell = bp_eps_cell(table.type(z), eps);
            std::int64_t n = 0;
            for (TypeId t = 0; t < static_cast<TypeId>(table.size()); ++t) {
                if (bp_eps_cell(table.type(t), eps) == cell) {
                    n += occ.count(t);
                }
            }
            return static_cast<double>(n);
        };
        for (ServerId s = 0; s < 2; ++s) {
            for (TypeId z : ids) {
                const double psi = table.psi(z, s);
                const double expected =
                    psi > 0.0 ? cell_total(z) - psi * cell_total(table.successor(z, s))
                              : cell_total(z);
                ASSERT_NEAR(bp_eps_weight(table, occ, s, z), expected, 1e-12);
            }
        }
    }
}

TEST(BackpressureEps, MatchesBackpressureWhenCellsSeparateTypes) {
    TestRng gen(13);
    for (int trial = 0; trial < 500; ++trial) {
        AsymmetricState st;
        auto eps_occ = st.occupancy({.greedy_index = false, .virtual_index = false, .epsilon = 0.5});
        auto bp_occ = st.occupancy();
        const int a = static_cast<int>(pick(gen, 0, 30));
        const int b = static_cast<int>(pick(gen, a == 0 ? 1 : 0, 30));
        for (auto* occ : {&eps_occ, &bp_occ}) {
            fill(*occ, st.zp, a);
            fill(*occ, st.zpp, b);
        }
        const auto y = tracked_of(st.table, {st.zp, st.zpp});
        Rng r1(trial), r2(trial);
        ASSERT_EQ(backpressure_eps_assign(st.table, eps_occ, r1),
                  backpressure_assign(st.table, bp_occ, y, false, r2))
            << "counts " << a << ", " << b;
    }
}

TEST(ModifiedBackpressure, TwoSymbolWeightMatchesSummation) {
    const SkillMatrix sk({{0.3, 0.7}, {0.6, 0.2}}, {1.0, 1.0});
    const FeedbackModel fb({"u", "v"}, 2, 2, {0.9, 0.1, 0.2, 0.8, 0.5, 0.5, 0.3, 0.7});
    TypeTable table(sk, &fb);
    const MixedType z({0.4, 0.6});
    const TypeId zi = table.intern(z);
    // Track z and its symbol-0 successor under server 0 only.
    const auto next0 = posterior_with_feedback(sk, fb, 0, z, 0);
    const TypeId n0 = table.intern(next0.type);
    const TrackedSet y({table.key(zi), table.key(n0)});
    Occupancy occ(table, {});
    fill(occ, zi, 7);
    fill(occ, n0, 3);
    const TypeId outside = table.intern(MixedType({0.1, 0.9}));
    fill(occ, outside, 0, 4);

    const auto next1 = posterior_with_feedback(sk, fb, 0, z, 1);
    ASSERT_NE(canonical_key(next1.type), table.key(n0));
    ASSERT_NE(canonical_key(next1.type), table.key(zi));
    const double expected = 7.0 - next0.xi * 3.0 - 4.0 * next1.xi;
    EXPECT_NEAR(modified_bp_weight(table, occ, y, 0, zi), expected, 1e-12);
}

TEST(ModifiedBackpressure, NoTrackedWorkServesX) {
    AsymmetricState st;
    const FeedbackModel fb = FeedbackModel::uninformative(2, 2);
    TypeTable table(st.scenario.skills, &fb);
    const TypeId zpp = table.intern(kZpp);
    Occupancy occ(table, {});
    fill(occ, zpp, 0, 2);
    const TrackedSet y({canonical_key(kZp)});
    Rng rng(1);
    for (const auto& c : modified_backpressure_assign(table, occ, y, false, rng)) {
        EXPECT_EQ(c.pool, Pool::Virtual);
    }
}

TEST(PolicyProperty, SingleSymbolModifiedBackpressureEqualsBackpressure) {
    TestRng gen(14);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t classes = pick(gen, 2, 4);
        const std::size_t servers = pick(gen, 1, 3);
        const auto sk = random_skills(gen, servers, classes);
        const FeedbackModel fb = FeedbackModel::uninformative(servers, classes);
        TypeTable table(sk, &fb);
        std::vector<TypeId> ids;
        for (int k = 0; k < 6; ++k) {
            ids.push_back(table.intern(random_type(gen, classes, true)));
        }
        // Include successors so some weights look inside the tracked set.
        for (std::size_t k = 0, n = ids.size(); k < n; ++k) {
            const TypeId next = table.successor(ids[k], pick(gen, 0, servers - 1));
            if (next != kNoType) {
                ids.push_back(next);
            }
        }
        std::vector<CanonicalKey> keys;
        for (TypeId z : ids) {
            if (uniform(gen) < 0.7) {
                keys.push_back(table.key(z));
            }
        }
        const TrackedSet y(keys);
        Occupancy occ(table, {.greedy_index = false, .virtual_index = true, .epsilon = {}});
        for (TypeId z : ids) {
            const bool tracked = y.contains(table, z);
            fill(occ, z, tracked ? static_cast<int>(pick(gen, 0, 8)) : 0,
                 static_cast<int>(pick(gen, 0, tracked ? 2 : 5)));
        }
        for (TypeId z : ids) {
            for (ServerId s = 0; s < servers; ++s) {
                ASSERT_EQ(modified_bp_weight(table, occ, y, s, z), bp_weight(table, occ, y, s, z));
            }
        }
        for (bool greedy_x : {false, true}) {
            Rng r1(trial), r2(trial);
            ASSERT_EQ(modified_backpressure_assign(table, occ, y, greedy_x, r1),
                      backpressure_assign(table, occ, y, greedy_x, r2))
                << "state " << trial;
        }
    }
}

TEST(PolicyProperty, AssignmentsReferenceNonemptyQueues) {
    TestRng gen(15);
    for (int trial = 0; trial < kPropertyCases; ++trial) {
        const std::size_t classes = pick(gen, 2, 4);
        const std::size_t servers = pick(gen, 1, 3);
        Scenario sc = random_scenario(gen, servers, classes, 3, 1.0);
        TypeTable table(sc.skills);
        std::vector<TypeId> ids;
        for (int k = 0; k < 4; ++k) {
            ids.push_back(table.intern(random_type(gen, classes, true)));
        }
        std::vector<CanonicalKey> keys;
        for (TypeId z : ids) {
            keys.push_back(table.key(z));
        }
        const TrackedSet y(std::vector<CanonicalKey>(keys.begin(), keys.begin() + 2));
        // Rules without virtual-queue bookkeeping keep every task tracked.
        Occupancy occ(table, {.greedy_index = true, .virtual_index = false, .epsilon = 0.5});
        Occupancy bp_occ(table, {.greedy_index = false, .virtual_index = true, .epsilon = {}});
        for (TypeId z : ids) {
            const int n = static_cast<int>(pick(gen, 0, 3));
            fill(occ, z, n);
            const bool tracked = y.contains(table, z);
            fill(bp_occ, z, tracked ? n : 0, tracked ? 0 : n);
        }
        Rng rng(trial);
        auto check = [&](const Occupancy& o, const Assignment& a) {
            for (const auto& c : a) {
                if (c.kind == ServerChoice::Kind::Queue) {
                    const auto n = c.pool == Pool::Virtual ? o.virtual_count(c.type)
                                                           : o.tracked(c.type);
                    ASSERT_GT(n, 0);
                } else if (c.kind == ServerChoice::Kind::Sample) {
                    ASSERT_NO_THROW(o.resolve_ordinal(c.pool, c.ordinal));
                } else {
                    ASSERT_EQ(c.kind, ServerChoice::Kind::Idle);
                }
            }
        };
        check(occ, random_assign(occ, servers, rng));
        check(occ, preemptive_greedy_assign(occ, rng));
        check(bp_occ, backpressure_assign(table, bp_occ, y, trial % 2 == 0, rng));
        check(occ, backpressure_eps_assign(table, occ, rng));
        if (occ.total() > 0) {
            // Work-conserving rules never idle a server when tasks exist.
            for (const auto& c : preemptive_greedy_assign(occ, rng)) {
                ASSERT_NE(c.kind, ServerChoice::Kind::Idle);
            }
        }
    }
}
