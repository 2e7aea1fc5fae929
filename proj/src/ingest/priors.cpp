#include "taskmatch/ingest/priors.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace taskmatch {

std::vector<Prior> estimate_priors(const std::vector<QuestionTagRecord>& records,
                                   const std::vector<std::string>& tags, double min_fraction) {
    if (records.empty()) {
        throw DataError("no questions", 0);
    }
    if (!(min_fraction >= 0.0 && min_fraction <= 1.0)) {
        throw std::invalid_argument("min_fraction must lie in [0, 1]");
    }
    std::unordered_map<std::string, ClassId> index;
    for (std::size_t i = 0; i < tags.size(); ++i) {
        index.emplace(tags[i], i);
    }
    // Ordered by (size, indices) so the output order is deterministic.
    auto less = [](const std::vector<ClassId>& a, const std::vector<ClassId>& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    };
    std::map<std::vector<ClassId>, std::size_t, decltype(less)> counts(less);
    for (const auto& r : records) {
        std::vector<ClassId> set;
        for (const auto& t : r.tags) {
            const auto it = index.find(t);
            if (it == index.end()) {
                throw DataError("tag '" + t + "' is not in the tag list", r.line);
            }
            set.push_back(it->second);
        }
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        ++counts[set];
    }
    const double total = static_cast<double>(records.size());
    std::size_t kept = 0;
    for (const auto& [set, n] : counts) {
        if (static_cast<double>(n) >= min_fraction * total) {
            kept += n;
        }
    }
    if (kept == 0) {
        throw DataError("no tag combination reaches the minimum frequency", 0);
    }
    std::vector<Prior> priors;
    for (const auto& [set, n] : counts) {
        if (static_cast<double>(n) >= min_fraction * total) {
            priors.push_back({MixedType::uniform_over(tags.size(), set),
                              static_cast<double>(n) / static_cast<double>(kept)});
        }
    }
    return priors;
}

}  // namespace taskmatch
