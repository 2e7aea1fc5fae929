#include "taskmatch/core/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace taskmatch {

CanonicalKey canonical_key(const MixedType& z) {
    const std::size_t k = z.size();
    CanonicalKey key;
    key.units.resize(k);
    std::vector<double> residual(k);
    std::int64_t sum = 0;
    for (std::size_t c = 0; c < k; ++c) {
        const double scaled = z[c] * static_cast<double>(kKeyTotal);
        const auto rounded = static_cast<std::int64_t>(std::llround(scaled));
        key.units[c] = rounded;
        residual[c] = scaled - static_cast<double>(rounded);
        sum += rounded;
    }
    // Repair so the units sum to kKeyTotal exactly: push the rounding error
    // onto the coordinates whose rounding was furthest off, ties by index.
    std::int64_t excess = sum - kKeyTotal;
    if (excess != 0) {
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        if (excess > 0) {
            // Too many units: take from those rounded up the most.
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return residual[a] < residual[b]; });
        } else {
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return residual[a] > residual[b]; });
        }
        std::size_t i = 0;
        while (excess != 0) {
            const std::size_t c = order[i % k];
            if (excess > 0 && key.units[c] > 0) {
                --key.units[c];
                --excess;
            } else if (excess < 0) {
                ++key.units[c];
                ++excess;
            }
            ++i;
        }
    }
    return key;
}

MixedType from_key(const CanonicalKey& key) {
    std::vector<double> w(key.units.size());
    for (std::size_t c = 0; c < w.size(); ++c) {
        w[c] = static_cast<double>(key.units[c]) / static_cast<double>(kKeyTotal);
    }
    return MixedType(std::move(w));
}

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& key) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t u : key.units) {
        h ^= static_cast<std::uint64_t>(u) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
}

}  // namespace taskmatch
