#ifndef TASKMATCH_INGEST_SKILLS_HPP
#define TASKMATCH_INGEST_SKILLS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "taskmatch/ingest/csv.hpp"

namespace taskmatch {

inline constexpr std::int64_t kDefaultMinAccepted = 5;

struct UserSkills {
    /// Sorted user ids, one row of `p` each.
    std::vector<std::string> users;
    std::vector<std::string> tags;
    /// p[u][t] = accepted / answers when accepted >= min_accepted, else 0.
    std::vector<std::vector<double>> p;
};

/// Tag order is `tags` when given, otherwise order of first appearance.
/// Records for tags outside a given list are ignored. Throws DataError for
/// accepted > answers (including answers = 0 with accepted > 0) and for
/// repeated (user, tag) pairs.
UserSkills estimate_skills(const std::vector<UserTagRecord>& records,
                           const std::vector<std::string>& tags = {},
                           std::int64_t min_accepted = kDefaultMinAccepted);

}  // namespace taskmatch

#endif
