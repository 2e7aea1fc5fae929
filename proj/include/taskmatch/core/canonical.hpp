#ifndef TASKMATCH_CORE_CANONICAL_HPP
#define TASKMATCH_CORE_CANONICAL_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// Resolution of the lattice used to identify mixed types.
inline constexpr double kKeyQuantum = 1e-9;
inline constexpr std::int64_t kKeyTotal = 1'000'000'000;

/// Mixed type rounded onto a 1e-9 lattice with integer weights summing to
/// kKeyTotal. Used only for queue identity, never for arithmetic.
struct CanonicalKey {
    std::vector<std::int64_t> units;

    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

CanonicalKey canonical_key(const MixedType& z);

/// Lattice point back to a (validated) mixed type.
MixedType from_key(const CanonicalKey& key);

struct CanonicalKeyHash {
    std::size_t operator()(const CanonicalKey& key) const noexcept;
};

}  // namespace taskmatch

#endif
