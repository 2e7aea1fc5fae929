#include "taskmatch/ingest/skills.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>

namespace taskmatch {

UserSkills estimate_skills(const std::vector<UserTagRecord>& records,
                           const std::vector<std::string>& tags, std::int64_t min_accepted) {
    if (min_accepted < 0) {
        throw std::invalid_argument("min_accepted must be non-negative");
    }
    UserSkills out;
    std::unordered_map<std::string, std::size_t> tag_index;
    const bool fixed_tags = !tags.empty();
    for (const auto& t : tags) {
        if (!tag_index.emplace(t, out.tags.size()).second) {
            throw std::invalid_argument("duplicate tag '" + t + "' in tag list");
        }
        out.tags.push_back(t);
    }
    std::set<std::string> users;
    for (const auto& r : records) {
        if (r.accepted > r.answers) {
            throw DataError("accepted count exceeds answer count", r.line);
        }
        if (!fixed_tags && !tag_index.count(r.tag)) {
            tag_index.emplace(r.tag, out.tags.size());
            out.tags.push_back(r.tag);
        }
        users.insert(r.user);
    }
    out.users.assign(users.begin(), users.end());
    std::unordered_map<std::string, std::size_t> user_index;
    for (std::size_t i = 0; i < out.users.size(); ++i) {
        user_index.emplace(out.users[i], i);
    }
    out.p.assign(out.users.size(), std::vector<double>(out.tags.size(), 0.0));
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& r : records) {
        const auto t = tag_index.find(r.tag);
        if (t == tag_index.end()) {
            continue;
        }
        const std::size_t u = user_index.at(r.user);
        if (!seen.emplace(u, t->second).second) {
            throw DataError("repeated user/tag pair '" + r.user + "," + r.tag + "'", r.line);
        }
        if (r.accepted >= min_accepted && r.answers > 0) {
            out.p[u][t->second] = static_cast<double>(r.accepted) / static_cast<double>(r.answers);
        }
    }
    return out;
}

}  // namespace taskmatch
