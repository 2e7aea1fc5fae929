#ifndef TASKMATCH_ENGINE_SIMULATOR_HPP
#define TASKMATCH_ENGINE_SIMULATOR_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "taskmatch/core/model.hpp"
#include "taskmatch/core/type_table.hpp"
#include "taskmatch/policies/occupancy.hpp"
#include "taskmatch/policies/policy.hpp"

namespace taskmatch {

struct RunConfig {
    double horizon = 1e4;
    std::uint64_t seed = 1;
    double sample_interval = 1.0;
    /// Fraction of the horizon discarded before steady-state statistics.
    double warmup_fraction = 0.2;
    /// Record per-queue counts for the policy's tracked set at every sample.
    bool record_queue_counts = false;

    void validate() const;
};

struct Sample {
    double time = 0.0;
    std::int64_t total = 0;
};

struct RunMetrics {
    double lambda = 0.0;
    double horizon = 0.0;
    double warmup_time = 0.0;
    double sample_interval = 1.0;

    std::vector<Sample> samples;
    /// Keys of the recorded queues and, per sample, their counts.
    std::vector<CanonicalKey> tracked_keys;
    std::vector<std::vector<std::int64_t>> tracked_counts;

    /// Sojourn times of tasks resolved after the warmup.
    std::vector<double> sojourn_times;
    /// Time-weighted mean number of tasks over [warmup, horizon].
    double time_avg_n = 0.0;
    /// Resolutions per unit time over [warmup, horizon].
    double throughput = 0.0;

    std::int64_t arrivals = 0;
    std::int64_t completions = 0;
    std::int64_t attempts = 0;
    std::int64_t live = 0;
    std::size_t distinct_types = 0;
};

enum class EventKind { Arrival, Success, Failure, IdleTick };

struct EventRecord {
    double time = 0.0;
    EventKind kind = EventKind::Arrival;
    ServerId server = 0;
    std::int64_t task = -1;
    TypeId from = kNoType;
    TypeId to = kNoType;
};

/// Continuous-time simulation of the matching system under one policy.
///
/// The chain is simulated by uniformization: events occur at total rate
/// lambda + sum_s mu_s; each is an arrival or a "tick" of one server. A tick
/// of a busy server completes its attempt on the task the policy designates
/// at that instant; a tick of an idle server changes nothing. Because attempt
/// durations are exponential this is the same process as per-server attempt
/// clocks with preemption and suspended idle clocks.
class Simulator {
public:
    Simulator(const Scenario& scenario, const PolicySpec& policy, const RunConfig& config);

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// Processes the next event. Returns false once the horizon is reached.
    bool step();
    /// Runs to the horizon and returns the metrics.
    RunMetrics finish();

    void set_observer(std::function<void(const EventRecord&)> observer) {
        observer_ = std::move(observer);
    }

    double clock() const { return clock_; }
    const Occupancy& occupancy() const { return occ_; }
    const TypeTable& types() const { return table_; }
    std::int64_t arrivals() const { return arrivals_; }
    std::int64_t completions() const { return completions_; }
    std::int64_t live() const { return static_cast<std::int64_t>(live_ids_.size()); }
    const Policy& policy() const { return policy_; }

    /// Recounts queues from the task records and compares them with the
    /// incremental state. Returns a description of the first mismatch.
    std::optional<std::string> check_invariants() const;

private:
    struct Task {
        TypeId type = kNoType;
        ClassId true_class = 0;
        double arrival = 0.0;
        std::int32_t attempts = 0;
        bool live = false;
        bool in_virtual = false;
        std::int64_t prev = -1;
        std::int64_t next = -1;
        std::int64_t live_pos = -1;
        std::int64_t virtual_pos = -1;
    };

    std::size_t list_slot(TypeId z, bool in_virtual);
    void link(std::int64_t id);
    void unlink(std::int64_t id);
    void enqueue(std::int64_t id);
    void dequeue(std::int64_t id);

    void advance_to(double t);
    void record_sample(double t);

    void on_arrival();
    void on_server_tick(ServerId s);
    void attempt(ServerId s, std::int64_t id);
    std::int64_t resolve(const ServerChoice& choice);
    void reselect_nonpreemptive(std::int64_t touched);

    Scenario scenario_;
    RunConfig config_;
    TypeTable table_;
    Policy policy_;
    Occupancy occ_;
    bool bookkeeping_;

    std::vector<TypeId> prior_types_;
    std::discrete_distribution<std::size_t> prior_dist_;
    std::vector<std::discrete_distribution<std::size_t>> class_dist_;
    std::vector<double> cum_rate_;
    double total_rate_;

    std::mt19937_64 event_rng_, arrival_rng_, success_rng_, feedback_rng_;

    std::vector<Task> tasks_;
    std::vector<std::int64_t> free_ids_;
    std::vector<std::int64_t> live_ids_;
    std::vector<std::int64_t> virtual_ids_;
    std::vector<std::int64_t> heads_, tails_;
    std::vector<std::int64_t> commitment_;  // non-preemptive only

    double clock_ = 0.0;
    bool done_ = false;
    double next_sample_ = 0.0;
    double area_ = 0.0;

    std::int64_t arrivals_ = 0;
    std::int64_t completions_ = 0;
    std::int64_t completions_after_warmup_ = 0;
    std::int64_t attempts_ = 0;

    RunMetrics metrics_;
    std::vector<TypeId> tracked_ids_;

    std::function<void(const EventRecord&)> observer_;
};

/// Simulates to the horizon. Throws on invalid config or policy.
RunMetrics run(const Scenario& scenario, const PolicySpec& policy, const RunConfig& config);

/// Derives an independent 64-bit seed for stream `stream` of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace taskmatch

#endif
