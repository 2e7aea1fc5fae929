#ifndef TASKMATCH_CORE_TYPE_TABLE_HPP
#define TASKMATCH_CORE_TYPE_TABLE_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "taskmatch/core/canonical.hpp"
#include "taskmatch/core/model.hpp"

namespace taskmatch {

using TypeId = std::int32_t;
inline constexpr TypeId kNoType = -1;

/// Interns mixed types by canonical key and memoizes failure probabilities
/// and posterior successors. The first mixed type interned under a key is its
/// representative; later lookups reuse it.
///
/// Successors are computed lazily, so lookups mutate the table. One table per
/// simulation run.
class TypeTable {
public:
    /// `skills` and `feedback` must outlive the table.
    explicit TypeTable(const SkillMatrix& skills, const FeedbackModel* feedback = nullptr);

    TypeId intern(const MixedType& z);
    std::optional<TypeId> find(const CanonicalKey& key) const;

    std::size_t size() const { return types_.size(); }
    std::size_t num_servers() const { return servers_; }
    std::size_t num_feedback() const { return symbols_; }
    const SkillMatrix& skills() const { return *skills_; }
    const FeedbackModel* feedback() const { return feedback_; }

    const MixedType& type(TypeId id) const { return types_[static_cast<std::size_t>(id)]; }
    const CanonicalKey& key(TypeId id) const { return keys_[static_cast<std::size_t>(id)]; }

    double psi(TypeId id, ServerId s) const { return psi_[index(id, s)]; }

    /// phi_s(z) as an interned id, or kNoType when psi_s(z) = 0.
    TypeId successor(TypeId id, ServerId s);

    /// phi_s(z,f), or kNoType when xi_s(z,f) = 0.
    TypeId successor(TypeId id, ServerId s, FeedbackId f);
    double xi(TypeId id, ServerId s, FeedbackId f) const { return xi_[findex(id, s, f)]; }

private:
    static constexpr TypeId kUnknown = -2;

    std::size_t index(TypeId id, ServerId s) const {
        return static_cast<std::size_t>(id) * servers_ + s;
    }
    std::size_t findex(TypeId id, ServerId s, FeedbackId f) const {
        return (static_cast<std::size_t>(id) * servers_ + s) * symbols_ + f;
    }

    const SkillMatrix* skills_;
    const FeedbackModel* feedback_;
    std::size_t servers_;
    std::size_t symbols_;

    std::vector<MixedType> types_;
    std::vector<CanonicalKey> keys_;
    std::unordered_map<CanonicalKey, TypeId, CanonicalKeyHash> ids_;
    std::vector<double> psi_;
    std::vector<TypeId> succ_;
    std::vector<double> xi_;
    std::vector<TypeId> fsucc_;
};

}  // namespace taskmatch

#endif
