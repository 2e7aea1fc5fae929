#include "taskmatch/core/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace taskmatch {

namespace {

void check_probability_vector(std::span<const double> w, const char* what) {
    if (w.empty()) {
        throw InvalidScenario(std::string(what) + ": empty probability vector");
    }
    double sum = 0.0;
    for (double x : w) {
        if (!(x >= 0.0 && x <= 1.0)) {
            std::ostringstream os;
            os << what << ": weight " << x << " outside [0,1]";
            throw InvalidScenario(os.str());
        }
        sum += x;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": weights sum to " << sum << ", expected 1";
        throw InvalidScenario(os.str());
    }
}

}  // namespace

MixedType::MixedType(std::vector<double> weights) : weights_(std::move(weights)) {
    check_probability_vector(weights_, "mixed type");
}

MixedType MixedType::pure(std::size_t num_classes, ClassId c) {
    if (c >= num_classes) {
        throw InvalidScenario("pure type: class index out of range");
    }
    std::vector<double> w(num_classes, 0.0);
    w[c] = 1.0;
    return unchecked(std::move(w));
}

MixedType MixedType::uniform_over(std::size_t num_classes, std::span<const ClassId> support) {
    if (support.empty()) {
        throw InvalidScenario("uniform mixed type needs a nonempty support");
    }
    std::vector<double> w(num_classes, 0.0);
    for (ClassId c : support) {
        if (c >= num_classes) {
            throw InvalidScenario("uniform mixed type: class index out of range");
        }
        w[c] = 1.0;
    }
    const double n = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& x : w) {
        x /= n;
    }
    return unchecked(std::move(w));
}

MixedType MixedType::unchecked(std::vector<double> weights) {
    MixedType z;
    z.weights_ = std::move(weights);
    return z;
}

bool MixedType::is_pure() const {
    return support_size() == 1;
}

std::size_t MixedType::support_size() const {
    return static_cast<std::size_t>(
        std::count_if(weights_.begin(), weights_.end(), [](double x) { return x > 0.0; }));
}

SkillMatrix::SkillMatrix(std::vector<std::vector<double>> p, std::vector<double> mu)
    : mu_(std::move(mu)) {
    if (p.size() != mu_.size()) {
        throw InvalidScenario("skill matrix: row count does not match number of rates");
    }
    if (p.empty()) {
        throw InvalidScenario("skill matrix: no servers");
    }
    classes_ = p.front().size();
    if (classes_ == 0) {
        throw InvalidScenario("skill matrix: no classes");
    }
    p_.reserve(p.size() * classes_);
    for (const auto& row : p) {
        if (row.size() != classes_) {
            throw InvalidScenario("skill matrix: ragged rows");
        }
        for (double x : row) {
            if (!(x >= 0.0 && x <= 1.0)) {
                throw InvalidScenario("skill matrix: success probability outside [0,1]");
            }
            p_.push_back(x);
        }
    }
    for (double m : mu_) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw InvalidScenario("skill matrix: service rates must be positive and finite");
        }
    }
}

double SkillMatrix::class_capacity(ClassId c) const {
    double cap = 0.0;
    for (ServerId s = 0; s < num_servers(); ++s) {
        cap += mu(s) * p(s, c);
    }
    return cap;
}

double SkillMatrix::min_class_capacity() const {
    double best = class_capacity(0);
    for (ClassId c = 1; c < classes_; ++c) {
        best = std::min(best, class_capacity(c));
    }
    return best;
}

double SkillMatrix::total_rate() const {
    return std::accumulate(mu_.begin(), mu_.end(), 0.0);
}

FeedbackModel::FeedbackModel(std::vector<std::string> symbols, std::size_t num_servers,
                             std::size_t num_classes, std::vector<double> beta)
    : symbols_(std::move(symbols)), servers_(num_servers), classes_(num_classes),
      beta_(std::move(beta)) {
    if (symbols_.empty()) {
        throw InvalidScenario("feedback model: no symbols");
    }
    if (beta_.size() != servers_ * classes_ * symbols_.size()) {
        throw InvalidScenario("feedback model: beta tensor has wrong size");
    }
    for (ServerId s = 0; s < servers_; ++s) {
        for (ClassId c = 0; c < classes_; ++c) {
            check_probability_vector(pmf(s, c), "feedback pmf");
        }
    }
}

FeedbackModel FeedbackModel::uninformative(std::size_t num_servers, std::size_t num_classes) {
    return FeedbackModel({"fail"}, num_servers, num_classes,
                         std::vector<double>(num_servers * num_classes, 1.0));
}

void Scenario::validate() const {
    if (classes.empty()) {
        throw InvalidScenario("scenario: no classes");
    }
    if (servers.empty()) {
        throw InvalidScenario("scenario: no servers");
    }
    if (skills.num_classes() != classes.size() || skills.num_servers() != servers.size()) {
        throw InvalidScenario("scenario: skill matrix dimensions do not match class/server lists");
    }
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidScenario("scenario: arrival rate must be finite and nonnegative");
    }
    if (priors.empty()) {
        throw InvalidScenario("scenario: empty prior support");
    }
    double total = 0.0;
    for (const auto& prior : priors) {
        if (prior.type.size() != classes.size()) {
            throw InvalidScenario("scenario: prior dimension does not match class count");
        }
        check_probability_vector(prior.type.weights(), "prior");
        if (!(prior.prob >= 0.0)) {
            throw InvalidScenario("scenario: negative prior probability");
        }
        total += prior.prob;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw InvalidScenario("scenario: prior probabilities do not sum to 1");
    }
    if (feedback) {
        if (feedback->num_servers() != servers.size() || feedback->num_classes() != classes.size()) {
            throw InvalidScenario("scenario: feedback model dimensions do not match");
        }
    }
}

Scenario asymmetric_scenario(double a, double lambda) {
    if (!(a > 0.0 && a <= 1.0)) {
        throw InvalidScenario("asymmetric scenario requires 0 < a <= 1");
    }
    Scenario sc;
    sc.classes = {"c1", "c2"};
    sc.servers = {"s1", "s2"};
    sc.skills = SkillMatrix({{1.0, a}, {1.0, 0.0}}, {1.0, 1.0});
    sc.lambda = lambda;
    sc.priors = {Prior{MixedType({0.5, 0.5}), 1.0}};
    return sc;
}

}  // namespace taskmatch
