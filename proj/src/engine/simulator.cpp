#include "taskmatch/engine/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace taskmatch {

namespace {

enum Stream : std::uint64_t { kEvents = 1, kArrivals, kSuccess, kFeedback, kPolicy };

const Scenario& validated(const Scenario& scenario, const RunConfig& config) {
    scenario.validate();
    config.validate();
    return scenario;
}

PolicySpec with_policy_seed(PolicySpec spec, std::uint64_t run_seed) {
    spec.seed = derive_seed(run_seed ^ spec.seed, kPolicy);
    return spec;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void RunConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (!(sample_interval > 0.0)) {
        throw std::invalid_argument("sample interval must be positive");
    }
    if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) {
        throw std::invalid_argument("warmup fraction must be in [0, 1)");
    }
}

Simulator::Simulator(const Scenario& scenario, const PolicySpec& policy, const RunConfig& config)
    : scenario_(validated(scenario, config)),
      config_(config),
      table_(scenario_.skills, scenario_.feedback ? &*scenario_.feedback : nullptr),
      policy_(with_policy_seed(policy, config.seed), scenario_),
      occ_(table_, policy_.occupancy_options()),
      bookkeeping_(policy.uses_virtual_queue()),
      event_rng_(derive_seed(config.seed, kEvents)),
      arrival_rng_(derive_seed(config.seed, kArrivals)),
      success_rng_(derive_seed(config.seed, kSuccess)),
      feedback_rng_(derive_seed(config.seed, kFeedback)) {
    std::vector<double> probs;
    for (const auto& prior : scenario_.priors) {
        prior_types_.push_back(table_.intern(prior.type));
        probs.push_back(prior.prob);
        const auto w = prior.type.weights();
        class_dist_.emplace_back(w.begin(), w.end());
    }
    prior_dist_ = std::discrete_distribution<std::size_t>(probs.begin(), probs.end());

    double acc = scenario_.lambda;
    cum_rate_.push_back(acc);
    for (ServerId s = 0; s < scenario_.num_servers(); ++s) {
        acc += scenario_.skills.mu(s);
        cum_rate_.push_back(acc);
    }
    total_rate_ = acc;

    if (!policy_.preemptive()) {
        commitment_.assign(scenario_.num_servers(), -1);
    }

    metrics_.lambda = scenario_.lambda;
    metrics_.horizon = config_.horizon;
    metrics_.warmup_time = config_.warmup_fraction * config_.horizon;
    metrics_.sample_interval = config_.sample_interval;
    if (config_.record_queue_counts && policy_.spec().y_set) {
        metrics_.tracked_keys = *policy_.spec().y_set;
        tracked_ids_.assign(metrics_.tracked_keys.size(), kNoType);
    }
}

std::size_t Simulator::list_slot(TypeId z, bool in_virtual) {
    const std::size_t slot = static_cast<std::size_t>(z) * 2 + (in_virtual ? 1 : 0);
    if (heads_.size() <= slot) {
        const std::size_t grow = std::max(slot + 2, heads_.size() * 2);
        heads_.resize(grow, -1);
        tails_.resize(grow, -1);
    }
    return slot;
}

void Simulator::link(std::int64_t id) {
    Task& t = tasks_[static_cast<std::size_t>(id)];
    const std::size_t slot = list_slot(t.type, t.in_virtual);
    t.prev = tails_[slot];
    t.next = -1;
    if (t.prev >= 0) {
        tasks_[static_cast<std::size_t>(t.prev)].next = id;
    } else {
        heads_[slot] = id;
    }
    tails_[slot] = id;
}

void Simulator::unlink(std::int64_t id) {
    Task& t = tasks_[static_cast<std::size_t>(id)];
    const std::size_t slot = list_slot(t.type, t.in_virtual);
    if (t.prev >= 0) {
        tasks_[static_cast<std::size_t>(t.prev)].next = t.next;
    } else {
        heads_[slot] = t.next;
    }
    if (t.next >= 0) {
        tasks_[static_cast<std::size_t>(t.next)].prev = t.prev;
    } else {
        tails_[slot] = t.prev;
    }
    t.prev = t.next = -1;
}

void Simulator::enqueue(std::int64_t id) {
    Task& t = tasks_[static_cast<std::size_t>(id)];
    link(id);
    occ_.add(t.type, t.in_virtual);
}

void Simulator::dequeue(std::int64_t id) {
    Task& t = tasks_[static_cast<std::size_t>(id)];
    unlink(id);
    occ_.remove(t.type, t.in_virtual);
}

void Simulator::record_sample(double t) {
    metrics_.samples.push_back({t, static_cast<std::int64_t>(live_ids_.size())});
    if (!tracked_ids_.empty()) {
        std::vector<std::int64_t> row(tracked_ids_.size(), 0);
        for (std::size_t i = 0; i < tracked_ids_.size(); ++i) {
            if (tracked_ids_[i] == kNoType) {
                if (auto id = table_.find(metrics_.tracked_keys[i])) {
                    tracked_ids_[i] = *id;
                }
            }
            if (tracked_ids_[i] != kNoType) {
                row[i] = occ_.count(tracked_ids_[i]);
            }
        }
        metrics_.tracked_counts.push_back(std::move(row));
    }
}

void Simulator::advance_to(double t) {
    const double n = static_cast<double>(live_ids_.size());
    const double from = std::max(clock_, metrics_.warmup_time);
    if (t > from) {
        area_ += n * (t - from);
    }
    while (next_sample_ <= t && next_sample_ <= config_.horizon) {
        record_sample(next_sample_);
        next_sample_ = static_cast<double>(metrics_.samples.size()) * config_.sample_interval;
    }
    clock_ = t;
}

bool Simulator::step() {
    if (done_) {
        return false;
    }
    std::exponential_distribution<double> gap(total_rate_);
    const double t = clock_ + gap(event_rng_);
    if (t > config_.horizon) {
        advance_to(config_.horizon);
        done_ = true;
        return false;
    }
    advance_to(t);
    std::uniform_real_distribution<double> pick(0.0, total_rate_);
    const double u = pick(event_rng_);
    const auto it = std::upper_bound(cum_rate_.begin(), cum_rate_.end(), u);
    const auto slot = static_cast<std::size_t>(std::distance(cum_rate_.begin(), it));
    if (slot == 0) {
        on_arrival();
    } else {
        on_server_tick(std::min(slot - 1, scenario_.num_servers() - 1));
    }
    return true;
}

void Simulator::on_arrival() {
    const std::size_t k = prior_dist_(arrival_rng_);
    const ClassId truth = class_dist_[k](arrival_rng_);

    std::int64_t id;
    if (!free_ids_.empty()) {
        id = free_ids_.back();
        free_ids_.pop_back();
    } else {
        id = static_cast<std::int64_t>(tasks_.size());
        tasks_.emplace_back();
    }
    Task& t = tasks_[static_cast<std::size_t>(id)];
    t = Task{};
    t.type = prior_types_[k];
    t.true_class = truth;
    t.arrival = clock_;
    t.live = true;
    t.in_virtual = bookkeeping_ && !policy_.in_tracked_set(table_, t.type);
    t.live_pos = static_cast<std::int64_t>(live_ids_.size());
    live_ids_.push_back(id);
    if (t.in_virtual) {
        t.virtual_pos = static_cast<std::int64_t>(virtual_ids_.size());
        virtual_ids_.push_back(id);
    }
    enqueue(id);
    ++arrivals_;

    if (observer_) {
        observer_({clock_, EventKind::Arrival, 0, id, kNoType, t.type});
    }
    if (!policy_.preemptive()) {
        reselect_nonpreemptive(-1);
    }
}

std::int64_t Simulator::resolve(const ServerChoice& choice) {
    switch (choice.kind) {
        case ServerChoice::Kind::Idle:
            return -1;
        case ServerChoice::Kind::Queue: {
            const std::size_t slot = list_slot(choice.type, choice.pool == Pool::Virtual);
            const std::int64_t id = heads_[slot];
            if (id < 0) {
                throw std::logic_error("policy designated an empty queue");
            }
            return id;
        }
        case ServerChoice::Kind::Sample: {
            const auto& pool = choice.pool == Pool::Virtual ? virtual_ids_ : live_ids_;
            return pool.at(static_cast<std::size_t>(choice.ordinal));
        }
    }
    return -1;
}

void Simulator::on_server_tick(ServerId s) {
    std::int64_t id = -1;
    if (policy_.preemptive()) {
        id = resolve(policy_.select(table_, occ_, s));
    } else {
        id = commitment_[s];
    }
    if (id < 0) {
        if (observer_) {
            observer_({clock_, EventKind::IdleTick, s, -1, kNoType, kNoType});
        }
        return;
    }
    attempt(s, id);
    if (!policy_.preemptive()) {
        reselect_nonpreemptive(id);
    }
}

void Simulator::attempt(ServerId s, std::int64_t id) {
    Task& t = tasks_[static_cast<std::size_t>(id)];
    ++t.attempts;
    ++attempts_;
    const TypeId from = t.type;
    std::bernoulli_distribution success(scenario_.skills.p(s, t.true_class));
    if (success(success_rng_)) {
        dequeue(id);
        t.live = false;
        // swap-remove from the population vectors
        const auto lp = static_cast<std::size_t>(t.live_pos);
        live_ids_[lp] = live_ids_.back();
        tasks_[static_cast<std::size_t>(live_ids_[lp])].live_pos = static_cast<std::int64_t>(lp);
        live_ids_.pop_back();
        if (t.in_virtual) {
            const auto vp = static_cast<std::size_t>(t.virtual_pos);
            virtual_ids_[vp] = virtual_ids_.back();
            tasks_[static_cast<std::size_t>(virtual_ids_[vp])].virtual_pos =
                static_cast<std::int64_t>(vp);
            virtual_ids_.pop_back();
        }
        ++completions_;
        if (clock_ >= metrics_.warmup_time) {
            ++completions_after_warmup_;
            metrics_.sojourn_times.push_back(clock_ - t.arrival);
        }
        free_ids_.push_back(id);
        if (observer_) {
            observer_({clock_, EventKind::Success, s, id, from, kNoType});
        }
        return;
    }

    TypeId to = kNoType;
    if (scenario_.feedback) {
        const auto pmf = scenario_.feedback->pmf(s, t.true_class);
        std::discrete_distribution<std::size_t> fdist(pmf.begin(), pmf.end());
        to = table_.successor(from, s, fdist(feedback_rng_));
    } else {
        to = table_.successor(from, s);
    }
    if (to == kNoType) {
        throw std::logic_error("failure observed where the model assigns it probability zero");
    }
    dequeue(id);
    t.type = to;
    if (bookkeeping_ && !t.in_virtual && !policy_.in_tracked_set(table_, to)) {
        t.in_virtual = true;
        t.virtual_pos = static_cast<std::int64_t>(virtual_ids_.size());
        virtual_ids_.push_back(id);
    }
    enqueue(id);
    if (observer_) {
        observer_({clock_, EventKind::Failure, s, id, from, to});
    }
}

void Simulator::reselect_nonpreemptive(std::int64_t touched) {
    for (ServerId s = 0; s < commitment_.size(); ++s) {
        std::int64_t& c = commitment_[s];
        if (c >= 0 && c != touched) {
            continue;
        }
        c = resolve(policy_.select(table_, occ_, s));
    }
}

RunMetrics Simulator::finish() {
    while (step()) {
    }
    RunMetrics out = std::move(metrics_);
    metrics_ = RunMetrics{};
    const double window = out.horizon - out.warmup_time;
    out.time_avg_n = window > 0.0 ? area_ / window : 0.0;
    out.throughput = window > 0.0 ? static_cast<double>(completions_after_warmup_) / window : 0.0;
    out.arrivals = arrivals_;
    out.completions = completions_;
    out.attempts = attempts_;
    out.live = static_cast<std::int64_t>(live_ids_.size());
    out.distinct_types = table_.size();
    return out;
}

std::optional<std::string> Simulator::check_invariants() const {
    std::ostringstream why;
    if (arrivals_ != completions_ + static_cast<std::int64_t>(live_ids_.size())) {
        why << "task conservation violated: arrivals " << arrivals_ << " completions "
            << completions_ << " live " << live_ids_.size();
        return why.str();
    }
    std::vector<std::int64_t> n(table_.size(), 0), tracked(table_.size(), 0),
        virt(table_.size(), 0);
    std::int64_t x_total = 0;
    for (std::int64_t id : live_ids_) {
        const Task& t = tasks_[static_cast<std::size_t>(id)];
        const auto z = static_cast<std::size_t>(t.type);
        ++n[z];
        if (t.in_virtual) {
            ++virt[z];
            ++x_total;
        } else {
            ++tracked[z];
        }
        if (!(table_.type(t.type)[t.true_class] > 0.0)) {
            why << "task " << id << " has a mixed type excluding its true class";
            return why.str();
        }
        if (bookkeeping_ && !t.in_virtual && !policy_.in_tracked_set(table_, t.type)) {
            why << "task " << id << " outside the tracked set is not counted in X";
            return why.str();
        }
    }
    if (x_total != occ_.virtual_total() ||
        x_total != static_cast<std::int64_t>(virtual_ids_.size())) {
        why << "X mismatch: census " << x_total << " occupancy " << occ_.virtual_total();
        return why.str();
    }
    for (std::size_t z = 0; z < table_.size(); ++z) {
        const auto id = static_cast<TypeId>(z);
        if (n[z] != occ_.count(id) || tracked[z] != occ_.tracked(id) ||
            virt[z] != occ_.virtual_count(id)) {
            why << "queue " << z << " census (" << n[z] << "," << tracked[z] << "," << virt[z]
                << ") vs occupancy (" << occ_.count(id) << "," << occ_.tracked(id) << ","
                << occ_.virtual_count(id) << ")";
            return why.str();
        }
        if (occ_.tracked(id) + occ_.virtual_count(id) != occ_.count(id)) {
            why << "N~ + X~ != N at queue " << z;
            return why.str();
        }
    }
    return std::nullopt;
}

RunMetrics run(const Scenario& scenario, const PolicySpec& policy, const RunConfig& config) {
    Simulator sim(scenario, policy, config);
    return sim.finish();
}

}  // namespace taskmatch
