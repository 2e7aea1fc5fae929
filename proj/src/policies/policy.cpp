#include "taskmatch/policies/policy.hpp"

#include <limits>

namespace taskmatch {

namespace {

template <class T>
const T& pick_uniform(const std::vector<T>& items, Rng& rng) {
    if (items.size() == 1) {
        return items.front();
    }
    std::uniform_int_distribution<std::size_t> dist(0, items.size() - 1);
    return items[dist(rng)];
}

// Arg-min over an ordered (psi, type) index, optionally skipping psi >= 1.
TypeId index_argmin(const Occupancy::GreedyIndex& index, bool require_possible_success, Rng& rng) {
    auto it = index.begin();
    if (it == index.end()) {
        return kNoType;
    }
    const double best = it->first;
    if (require_possible_success && !(best < 1.0)) {
        return kNoType;
    }
    std::vector<TypeId> ties;
    for (; it != index.end() && it->first == best; ++it) {
        ties.push_back(it->second);
    }
    return pick_uniform(ties, rng);
}

// Arg-min by linear scan, for occupancies built without the greedy index.
TypeId scan_argmin(const Occupancy& occ, std::span<const TypeId> types, ServerId s,
                   bool require_possible_success, Rng& rng) {
    double best = std::numeric_limits<double>::infinity();
    std::vector<TypeId> ties;
    for (TypeId z : types) {
        const double psi = occ.table().psi(z, s);
        if (require_possible_success && !(psi < 1.0)) {
            continue;
        }
        if (psi < best) {
            best = psi;
            ties.assign(1, z);
        } else if (psi == best) {
            ties.push_back(z);
        }
    }
    return ties.empty() ? kNoType : pick_uniform(ties, rng);
}

TypeId greedy_argmin(const Occupancy& occ, ServerId s, bool require_possible_success, Rng& rng) {
    if (occ.has_greedy_index()) {
        return index_argmin(occ.greedy_index(s), require_possible_success, rng);
    }
    return scan_argmin(occ, occ.nonempty(), s, require_possible_success, rng);
}

// Mode test and per-server arg-max sets shared by both Y-policies.
struct BackpressureScan {
    bool backpressure_mode = false;
    std::vector<std::vector<TypeId>> argmax;
};

template <class WeightFn>
BackpressureScan scan_backpressure(const Occupancy& occ, WeightFn&& weight,
                                   std::optional<ServerId> only) {
    const SkillMatrix& skills = occ.table().skills();
    const std::size_t m = skills.num_servers();
    const auto candidates = occ.tracked_nonempty();
    BackpressureScan scan;
    scan.argmax.resize(m);
    double lhs = 0.0;
    for (ServerId s = 0; s < m; ++s) {
        if (candidates.empty()) {
            break;  // empty max is 0
        }
        const bool keep = !only || *only == s;
        double best = -std::numeric_limits<double>::infinity();
        auto& arg = scan.argmax[s];
        for (TypeId z : candidates) {
            const double w = weight(s, z);
            if (w > best) {
                best = w;
                if (keep) {
                    arg.assign(1, z);
                }
            } else if (w == best && keep) {
                arg.push_back(z);
            }
        }
        lhs += skills.mu(s) * best;
    }
    const double rhs = static_cast<double>(occ.virtual_total()) * skills.min_class_capacity();
    scan.backpressure_mode = lhs >= rhs;
    return scan;
}

ServerChoice virtual_choice(const Occupancy& occ, bool greedy_x, ServerId s, Rng& rng) {
    if (occ.virtual_total() == 0) {
        return ServerChoice::idle();
    }
    if (greedy_x) {
        TypeId z = kNoType;
        if (occ.has_virtual_index()) {
            z = index_argmin(occ.virtual_index(s), false, rng);
        } else {
            std::vector<TypeId> xs;
            for (TypeId t : occ.nonempty()) {
                if (occ.virtual_count(t) > 0) {
                    xs.push_back(t);
                }
            }
            z = scan_argmin(occ, xs, s, false, rng);
        }
        return ServerChoice::queue(z, Pool::Virtual);
    }
    std::uniform_int_distribution<std::int64_t> dist(0, occ.virtual_total() - 1);
    return ServerChoice::sample(Pool::Virtual, dist(rng));
}

ServerChoice choice_from_scan(const Occupancy& occ, const BackpressureScan& scan, bool greedy_x,
                              ServerId s, Rng& rng) {
    if (scan.backpressure_mode) {
        const auto& arg = scan.argmax[s];
        if (arg.empty()) {
            return ServerChoice::idle();
        }
        return ServerChoice::queue(pick_uniform(arg, rng), Pool::Tracked);
    }
    return virtual_choice(occ, greedy_x, s, rng);
}

}  // namespace

std::string_view policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Random: return "random";
        case PolicyKind::PreemptiveGreedy: return "greedy";
        case PolicyKind::NonPreemptiveGreedy: return "np-greedy";
        case PolicyKind::BackpressureY: return "bp-y";
        case PolicyKind::BackpressureEps: return "bp-eps";
        case PolicyKind::ModifiedBackpressureY: return "bp-feedback";
    }
    return "unknown";
}

PolicyKind parse_policy_kind(std::string_view name) {
    for (auto kind : {PolicyKind::Random, PolicyKind::PreemptiveGreedy,
                      PolicyKind::NonPreemptiveGreedy, PolicyKind::BackpressureY,
                      PolicyKind::BackpressureEps, PolicyKind::ModifiedBackpressureY}) {
        if (policy_name(kind) == name) {
            return kind;
        }
    }
    throw InvalidPolicy("unrecognized policy: " + std::string(name));
}

void PolicySpec::validate(const Scenario& scenario) const {
    if (uses_virtual_queue() != y_set.has_value()) {
        throw InvalidPolicy("tracked set must be given exactly for bp-y and bp-feedback");
    }
    if ((kind == PolicyKind::BackpressureEps) != epsilon.has_value()) {
        throw InvalidPolicy("epsilon must be given exactly for bp-eps");
    }
    if (epsilon && !(*epsilon > 0.0 && *epsilon <= 2.0)) {
        throw InvalidPolicy("epsilon must lie in (0, 2]");
    }
    if (y_set) {
        for (const auto& key : *y_set) {
            if (key.units.size() != scenario.num_classes()) {
                throw InvalidPolicy("tracked-set key has wrong dimension");
            }
        }
    }
    if (kind == PolicyKind::ModifiedBackpressureY && !scenario.feedback) {
        throw InvalidPolicy("bp-feedback requires a scenario with a feedback model");
    }
}

TrackedSet::TrackedSet(const std::vector<CanonicalKey>& keys) : keys_(keys.begin(), keys.end()) {}

bool TrackedSet::contains(const TypeTable& table, TypeId z) const {
    if (z == kNoType) {
        return false;
    }
    const auto i = static_cast<std::size_t>(z);
    if (cache_.size() <= i) {
        cache_.resize(std::max(i + 1, cache_.size() * 2), -1);
    }
    if (cache_[i] < 0) {
        cache_[i] = keys_.contains(table.key(z)) ? 1 : 0;
    }
    return cache_[i] == 1;
}

ServerChoice random_select(const Occupancy& occ, Rng& rng) {
    if (occ.total() == 0) {
        return ServerChoice::idle();
    }
    std::uniform_int_distribution<std::int64_t> dist(0, occ.total() - 1);
    return ServerChoice::sample(Pool::All, dist(rng));
}

Assignment random_assign(const Occupancy& occ, std::size_t num_servers, Rng& rng) {
    Assignment out(num_servers);
    for (auto& choice : out) {
        choice = random_select(occ, rng);
    }
    return out;
}

ServerChoice preemptive_greedy_select(const Occupancy& occ, ServerId s, Rng& rng) {
    const TypeId z = greedy_argmin(occ, s, false, rng);
    return z == kNoType ? ServerChoice::idle() : ServerChoice::queue(z, Pool::Tracked);
}

Assignment preemptive_greedy_assign(const Occupancy& occ, Rng& rng) {
    Assignment out(occ.table().num_servers());
    for (ServerId s = 0; s < out.size(); ++s) {
        out[s] = preemptive_greedy_select(occ, s, rng);
    }
    return out;
}

ServerChoice nonpreemptive_greedy_select(const Occupancy& occ, ServerId s, Rng& rng) {
    const TypeId z = greedy_argmin(occ, s, true, rng);
    return z == kNoType ? ServerChoice::idle() : ServerChoice::queue(z, Pool::Tracked);
}

double bp_weight(TypeTable& table, const Occupancy& occ, const TrackedSet& y, ServerId s,
                 TypeId z) {
    const double own = static_cast<double>(occ.tracked(z));
    const double psi = table.psi(z, s);
    if (!(psi > 0.0)) {
        return own;
    }
    const TypeId next = table.successor(z, s);
    if (y.contains(table, next)) {
        return own - psi * static_cast<double>(occ.tracked(next));
    }
    return own - psi * static_cast<double>(occ.virtual_total());
}

double modified_bp_weight(TypeTable& table, const Occupancy& occ, const TrackedSet& y, ServerId s,
                          TypeId z) {
    const double own = static_cast<double>(occ.tracked(z));
    double inside = 0.0;
    double outside = 0.0;
    for (FeedbackId f = 0; f < table.num_feedback(); ++f) {
        const double xi = table.xi(z, s, f);
        if (!(xi > 0.0)) {
            continue;
        }
        const TypeId next = table.successor(z, s, f);
        if (y.contains(table, next)) {
            inside += xi * static_cast<double>(occ.tracked(next));
        } else {
            outside += xi;
        }
    }
    return own - inside - static_cast<double>(occ.virtual_total()) * outside;
}

ServerChoice backpressure_select(TypeTable& table, const Occupancy& occ, const TrackedSet& y,
                                 bool greedy_x, ServerId s, Rng& rng) {
    auto scan = scan_backpressure(
        occ, [&](ServerId sv, TypeId z) { return bp_weight(table, occ, y, sv, z); }, s);
    return choice_from_scan(occ, scan, greedy_x, s, rng);
}

Assignment backpressure_assign(TypeTable& table, const Occupancy& occ, const TrackedSet& y,
                               bool greedy_x, Rng& rng) {
    auto scan = scan_backpressure(
        occ, [&](ServerId sv, TypeId z) { return bp_weight(table, occ, y, sv, z); }, std::nullopt);
    Assignment out(table.num_servers());
    for (ServerId s = 0; s < out.size(); ++s) {
        out[s] = choice_from_scan(occ, scan, greedy_x, s, rng);
    }
    return out;
}

ServerChoice modified_backpressure_select(TypeTable& table, const Occupancy& occ,
                                          const TrackedSet& y, bool greedy_x, ServerId s,
                                          Rng& rng) {
    auto scan = scan_backpressure(
        occ, [&](ServerId sv, TypeId z) { return modified_bp_weight(table, occ, y, sv, z); }, s);
    return choice_from_scan(occ, scan, greedy_x, s, rng);
}

Assignment modified_backpressure_assign(TypeTable& table, const Occupancy& occ,
                                        const TrackedSet& y, bool greedy_x, Rng& rng) {
    auto scan = scan_backpressure(
        occ, [&](ServerId sv, TypeId z) { return modified_bp_weight(table, occ, y, sv, z); },
        std::nullopt);
    Assignment out(table.num_servers());
    for (ServerId s = 0; s < out.size(); ++s) {
        out[s] = choice_from_scan(occ, scan, greedy_x, s, rng);
    }
    return out;
}

double bp_eps_weight(TypeTable& table, Occupancy& occ, ServerId s, TypeId z) {
    const double own = static_cast<double>(occ.cell_count(z));
    const double psi = table.psi(z, s);
    if (!(psi > 0.0)) {
        return own;
    }
    const TypeId next = table.successor(z, s);
    return own - psi * static_cast<double>(occ.cell_count(next));
}

ServerChoice backpressure_eps_select(TypeTable& table, Occupancy& occ, ServerId s, Rng& rng) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<TypeId> ties;
    // Copy: computing weights may intern successors but never changes counts.
    const std::vector<TypeId> candidates(occ.nonempty().begin(), occ.nonempty().end());
    for (TypeId z : candidates) {
        const double w = bp_eps_weight(table, occ, s, z);
        if (w > best) {
            best = w;
            ties.assign(1, z);
        } else if (w == best) {
            ties.push_back(z);
        }
    }
    if (ties.empty()) {
        return ServerChoice::idle();
    }
    return ServerChoice::queue(pick_uniform(ties, rng), Pool::Tracked);
}

Assignment backpressure_eps_assign(TypeTable& table, Occupancy& occ, Rng& rng) {
    Assignment out(table.num_servers());
    for (ServerId s = 0; s < out.size(); ++s) {
        out[s] = backpressure_eps_select(table, occ, s, rng);
    }
    return out;
}

Policy::Policy(PolicySpec spec, const Scenario& scenario)
    : spec_(std::move(spec)), rng_(spec_.seed) {
    spec_.validate(scenario);
    if (spec_.y_set) {
        tracked_ = TrackedSet(*spec_.y_set);
    }
}

Occupancy::Options Policy::occupancy_options() const {
    Occupancy::Options opt;
    switch (spec_.kind) {
        case PolicyKind::PreemptiveGreedy:
        case PolicyKind::NonPreemptiveGreedy:
            opt.greedy_index = true;
            break;
        case PolicyKind::BackpressureY:
        case PolicyKind::ModifiedBackpressureY:
            opt.virtual_index = spec_.greedy_x;
            break;
        case PolicyKind::BackpressureEps:
            opt.epsilon = spec_.epsilon;
            break;
        case PolicyKind::Random:
            break;
    }
    return opt;
}

bool Policy::in_tracked_set(const TypeTable& table, TypeId z) const {
    return spec_.uses_virtual_queue() ? tracked_.contains(table, z) : true;
}

ServerChoice Policy::select(TypeTable& table, Occupancy& occ, ServerId s) {
    switch (spec_.kind) {
        case PolicyKind::Random: return random_select(occ, rng_);
        case PolicyKind::PreemptiveGreedy: return preemptive_greedy_select(occ, s, rng_);
        case PolicyKind::NonPreemptiveGreedy: return nonpreemptive_greedy_select(occ, s, rng_);
        case PolicyKind::BackpressureY:
            return backpressure_select(table, occ, tracked_, spec_.greedy_x, s, rng_);
        case PolicyKind::BackpressureEps: return backpressure_eps_select(table, occ, s, rng_);
        case PolicyKind::ModifiedBackpressureY:
            return modified_backpressure_select(table, occ, tracked_, spec_.greedy_x, s, rng_);
    }
    throw InvalidPolicy("unrecognized policy");
}

Assignment Policy::assign(TypeTable& table, Occupancy& occ) {
    switch (spec_.kind) {
        case PolicyKind::Random: return random_assign(occ, table.num_servers(), rng_);
        case PolicyKind::PreemptiveGreedy: return preemptive_greedy_assign(occ, rng_);
        case PolicyKind::NonPreemptiveGreedy: {
            Assignment out(table.num_servers());
            for (ServerId s = 0; s < out.size(); ++s) {
                out[s] = nonpreemptive_greedy_select(occ, s, rng_);
            }
            return out;
        }
        case PolicyKind::BackpressureY:
            return backpressure_assign(table, occ, tracked_, spec_.greedy_x, rng_);
        case PolicyKind::BackpressureEps: return backpressure_eps_assign(table, occ, rng_);
        case PolicyKind::ModifiedBackpressureY:
            return modified_backpressure_assign(table, occ, tracked_, spec_.greedy_x, rng_);
    }
    throw InvalidPolicy("unrecognized policy");
}

}  // namespace taskmatch
