#ifndef TASKMATCH_CORE_MODEL_HPP
#define TASKMATCH_CORE_MODEL_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace taskmatch {

using ClassId = std::size_t;
using ServerId = std::size_t;
using FeedbackId = std::size_t;

/// Tolerance used when checking that a probability vector sums to one.
inline constexpr double kSumTolerance = 1e-9;

class InvalidScenario : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UndefinedPosterior : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Belief over the true class of a task: one probability per class.
class MixedType {
public:
    MixedType() = default;

    /// Validates that every weight is in [0,1] and that they sum to one.
    explicit MixedType(std::vector<double> weights);

    static MixedType pure(std::size_t num_classes, ClassId c);
    static MixedType uniform_over(std::size_t num_classes, std::span<const ClassId> support);

    /// Skips validation. Used on hot paths where the caller normalized already.
    static MixedType unchecked(std::vector<double> weights);

    std::size_t size() const { return weights_.size(); }
    double operator[](ClassId c) const { return weights_[c]; }
    std::span<const double> weights() const { return weights_; }

    bool is_pure() const;
    std::size_t support_size() const;

    friend bool operator==(const MixedType&, const MixedType&) = default;

private:
    std::vector<double> weights_;
};

/// Success probabilities p(s,c) and attempt rates mu(s).
class SkillMatrix {
public:
    SkillMatrix() = default;
    SkillMatrix(std::vector<std::vector<double>> p, std::vector<double> mu);

    std::size_t num_servers() const { return mu_.size(); }
    std::size_t num_classes() const { return classes_; }

    double p(ServerId s, ClassId c) const { return p_[s * classes_ + c]; }
    double mu(ServerId s) const { return mu_[s]; }
    std::span<const double> row(ServerId s) const { return {p_.data() + s * classes_, classes_}; }
    std::span<const double> rates() const { return mu_; }

    /// Total success capacity for class c: sum over servers of mu(s) p(s,c).
    double class_capacity(ClassId c) const;
    /// min over classes of class_capacity.
    double min_class_capacity() const;
    double total_rate() const;

    friend bool operator==(const SkillMatrix&, const SkillMatrix&) = default;

private:
    std::size_t classes_ = 0;
    std::vector<double> p_;
    std::vector<double> mu_;
};

/// beta(s,c,f): probability that server s reports feedback f on failing a
/// task whose true class is c.
class FeedbackModel {
public:
    FeedbackModel() = default;
    FeedbackModel(std::vector<std::string> symbols, std::size_t num_servers, std::size_t num_classes,
                  std::vector<double> beta);

    /// Single-symbol model; every failure yields the same feedback.
    static FeedbackModel uninformative(std::size_t num_servers, std::size_t num_classes);

    std::size_t num_symbols() const { return symbols_.size(); }
    std::size_t num_servers() const { return servers_; }
    std::size_t num_classes() const { return classes_; }
    const std::vector<std::string>& symbols() const { return symbols_; }

    double beta(ServerId s, ClassId c, FeedbackId f) const {
        return beta_[(s * classes_ + c) * symbols_.size() + f];
    }
    std::span<const double> pmf(ServerId s, ClassId c) const {
        return {beta_.data() + (s * classes_ + c) * symbols_.size(), symbols_.size()};
    }

    friend bool operator==(const FeedbackModel&, const FeedbackModel&) = default;

private:
    std::vector<std::string> symbols_;
    std::size_t servers_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> beta_;
};

struct Prior {
    MixedType type;
    double prob = 0.0;

    friend bool operator==(const Prior&, const Prior&) = default;
};

struct Scenario {
    std::vector<std::string> classes;
    std::vector<std::string> servers;
    SkillMatrix skills;
    double lambda = 0.0;
    std::vector<Prior> priors;
    std::optional<FeedbackModel> feedback;

    std::size_t num_classes() const { return classes.size(); }
    std::size_t num_servers() const { return servers.size(); }

    /// Throws InvalidScenario describing the first violated invariant.
    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// The two-class, two-server benchmark: server 1 is flexible (p = 1, a),
/// server 2 only resolves class 1 (p = 1, 0); all arrivals are (1/2, 1/2).
Scenario asymmetric_scenario(double a, double lambda = 0.0);

}  // namespace taskmatch

#endif
