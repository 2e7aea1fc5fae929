#ifndef TASKMATCH_POLICIES_POLICY_HPP
#define TASKMATCH_POLICIES_POLICY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "taskmatch/core/canonical.hpp"
#include "taskmatch/core/model.hpp"
#include "taskmatch/core/type_table.hpp"
#include "taskmatch/policies/occupancy.hpp"

namespace taskmatch {

class InvalidPolicy : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PolicyKind {
    Random,
    PreemptiveGreedy,
    NonPreemptiveGreedy,
    BackpressureY,
    BackpressureEps,
    ModifiedBackpressureY,
};

/// CLI name of a policy kind (random, greedy, np-greedy, bp-y, bp-eps, bp-feedback).
std::string_view policy_name(PolicyKind kind);
PolicyKind parse_policy_kind(std::string_view name);

struct PolicySpec {
    PolicyKind kind = PolicyKind::Random;
    /// Tracked set for the two Y-policies.
    std::optional<std::vector<CanonicalKey>> y_set;
    /// Grid cell diameter for BackpressureEps, in (0, 2].
    std::optional<double> epsilon;
    /// Serve the virtual queue greedily (arg-min psi) instead of uniformly.
    bool greedy_x = false;
    std::uint64_t seed = 0;

    /// Throws InvalidPolicy when parameters do not match the kind or scenario.
    void validate(const Scenario& scenario) const;

    bool uses_virtual_queue() const {
        return kind == PolicyKind::BackpressureY || kind == PolicyKind::ModifiedBackpressureY;
    }
};

/// What one server works on. `Queue` designates the head (oldest task) of
/// the given pool part of a type's queue; `Sample` designates the task with
/// the given ordinal inside a population, for uniform-over-tasks rules.
struct ServerChoice {
    enum class Kind { Idle, Queue, Sample };
    Kind kind = Kind::Idle;
    TypeId type = kNoType;
    Pool pool = Pool::Tracked;
    std::int64_t ordinal = 0;

    static ServerChoice idle() { return {}; }
    static ServerChoice queue(TypeId z, Pool pool) { return {Kind::Queue, z, pool, 0}; }
    static ServerChoice sample(Pool pool, std::int64_t ordinal) {
        return {Kind::Sample, kNoType, pool, ordinal};
    }

    friend bool operator==(const ServerChoice&, const ServerChoice&) = default;
};

using Assignment = std::vector<ServerChoice>;

using Rng = std::mt19937_64;

/// Membership test for the tracked set Y, memoized per type id.
class TrackedSet {
public:
    TrackedSet() = default;
    explicit TrackedSet(const std::vector<CanonicalKey>& keys);

    bool contains(const TypeTable& table, TypeId z) const;
    std::size_t size() const { return keys_.size(); }

private:
    std::unordered_set<CanonicalKey, CanonicalKeyHash> keys_;
    mutable std::vector<std::int8_t> cache_;
};

// Individual rules. The *_select functions choose for one server; the
// *_assign functions build the full assignment. Ties are broken uniformly
// with `rng`, which is only consulted when a tie actually occurs.

ServerChoice random_select(const Occupancy& occ, Rng& rng);
Assignment random_assign(const Occupancy& occ, std::size_t num_servers, Rng& rng);

ServerChoice preemptive_greedy_select(const Occupancy& occ, ServerId s, Rng& rng);
Assignment preemptive_greedy_assign(const Occupancy& occ, Rng& rng);

/// Arg-min psi over nonempty queues restricted to psi < 1; idle if none.
ServerChoice nonpreemptive_greedy_select(const Occupancy& occ, ServerId s, Rng& rng);

/// N~_z - psi_s(z) N~_{phi_s(z)}, with X in place of N~_{phi_s(z)} when the
/// successor leaves the tracked set.
double bp_weight(TypeTable& table, const Occupancy& occ, const TrackedSet& y, ServerId s, TypeId z);

/// N~_z - sum_{f: phi in Y} xi N~_phi - X sum_{f: phi not in Y} xi.
double modified_bp_weight(TypeTable& table, const Occupancy& occ, const TrackedSet& y, ServerId s,
                          TypeId z);

ServerChoice backpressure_select(TypeTable& table, const Occupancy& occ, const TrackedSet& y,
                                 bool greedy_x, ServerId s, Rng& rng);
Assignment backpressure_assign(TypeTable& table, const Occupancy& occ, const TrackedSet& y,
                               bool greedy_x, Rng& rng);

ServerChoice modified_backpressure_select(TypeTable& table, const Occupancy& occ,
                                          const TrackedSet& y, bool greedy_x, ServerId s, Rng& rng);
Assignment modified_backpressure_assign(TypeTable& table, const Occupancy& occ, const TrackedSet& y,
                                        bool greedy_x, Rng& rng);

/// N(A_i) - psi_s(z) N(A_j) with z in A_i and phi_s(z) in A_j.
double bp_eps_weight(TypeTable& table, Occupancy& occ, ServerId s, TypeId z);
ServerChoice backpressure_eps_select(TypeTable& table, Occupancy& occ, ServerId s, Rng& rng);
Assignment backpressure_eps_assign(TypeTable& table, Occupancy& occ, Rng& rng);

/// A policy instance: the PolicySpec, its tracked set, and the tie-break stream.
class Policy {
public:
    Policy(PolicySpec spec, const Scenario& scenario);

    const PolicySpec& spec() const { return spec_; }
    const TrackedSet& tracked_set() const { return tracked_; }
    Occupancy::Options occupancy_options() const;

    bool preemptive() const { return spec_.kind != PolicyKind::NonPreemptiveGreedy; }
    bool in_tracked_set(const TypeTable& table, TypeId z) const;

    ServerChoice select(TypeTable& table, Occupancy& occ, ServerId s);
    Assignment assign(TypeTable& table, Occupancy& occ);

    Rng& rng() { return rng_; }

private:
    PolicySpec spec_;
    TrackedSet tracked_;
    Rng rng_;
};

}  // namespace taskmatch

#endif
