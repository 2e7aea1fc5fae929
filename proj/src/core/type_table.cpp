#include "taskmatch/core/type_table.hpp"

#include "taskmatch/core/bayes.hpp"

namespace taskmatch {

TypeTable::TypeTable(const SkillMatrix& skills, const FeedbackModel* feedback)
    : skills_(&skills), feedback_(feedback), servers_(skills.num_servers()),
      symbols_(feedback ? feedback->num_symbols() : 0) {}

TypeId TypeTable::intern(const MixedType& z) {
    CanonicalKey key = canonical_key(z);
    if (auto it = ids_.find(key); it != ids_.end()) {
        return it->second;
    }
    const auto id = static_cast<TypeId>(types_.size());
    types_.push_back(z);
    ids_.emplace(key, id);
    keys_.push_back(std::move(key));
    for (ServerId s = 0; s < servers_; ++s) {
        psi_.push_back(failure_probability(*skills_, s, z));
        succ_.push_back(kUnknown);
        for (FeedbackId f = 0; f < symbols_; ++f) {
            xi_.push_back(feedback_failure_weight(*skills_, *feedback_, s, z, f));
            fsucc_.push_back(kUnknown);
        }
    }
    return id;
}

std::optional<TypeId> TypeTable::find(const CanonicalKey& key) const {
    if (auto it = ids_.find(key); it != ids_.end()) {
        return it->second;
    }
    return std::nullopt;
}

TypeId TypeTable::successor(TypeId id, ServerId s) {
    const std::size_t i = index(id, s);
    if (succ_[i] != kUnknown) {
        return succ_[i];
    }
    TypeId next = kNoType;
    if (psi_[i] > 0.0) {
        // intern() may reallocate types_, so copy the posterior out first.
        MixedType post = posterior_on_failure(*skills_, s, types_[static_cast<std::size_t>(id)]);
        next = intern(post);
    }
    succ_[i] = next;
    return next;
}

TypeId TypeTable::successor(TypeId id, ServerId s, FeedbackId f) {
    const std::size_t i = findex(id, s, f);
    if (fsucc_[i] != kUnknown) {
        return fsucc_[i];
    }
    TypeId next = kNoType;
    if (xi_[i] > 0.0) {
        try {
            auto post = posterior_with_feedback(*skills_, *feedback_, s,
                                                types_[static_cast<std::size_t>(id)], f);
            next = intern(post.type);
        } catch (const UndefinedPosterior&) {
            next = kNoType;
        }
    }
    fsucc_[i] = next;
    return next;
}

}  // namespace taskmatch
