#ifndef TASKMATCH_POLICIES_OCCUPANCY_HPP
#define TASKMATCH_POLICIES_OCCUPANCY_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "taskmatch/core/type_table.hpp"

namespace taskmatch {

/// Task populations a server can be pointed at. `Tracked` is the part of a
/// queue that never left the tracked set (N~_z), `Virtual` the part that did
/// (X~_z). `All` is the union, used for population-wide sampling.
enum class Pool { All, Tracked, Virtual };

/// Cell of the axis-aligned grid with step epsilon/|C|; any two mixed types in
/// a cell are within L1 distance epsilon.
using CellIndex = std::vector<std::int64_t>;

CellIndex bp_eps_cell(const MixedType& z, double epsilon);

/// Per-type queue counts and the incremental indexes the policies read.
/// N_z = N~_z + X~_z for every type; for policies without virtual-queue
/// bookkeeping everything lives in the tracked part.
class Occupancy {
public:
    struct Options {
        bool greedy_index = false;    // per-server ordered index over nonempty types
        bool virtual_index = false;   // per-server ordered index over types with X~_z > 0
        std::optional<double> epsilon;  // maintain grid-cell counts
    };

    using GreedyIndex = std::set<std::pair<double, TypeId>>;

    Occupancy(TypeTable& table, Options options);

    void add(TypeId z, bool in_virtual);
    void remove(TypeId z, bool in_virtual);

    std::int64_t count(TypeId z) const { return at(n_, z); }
    std::int64_t tracked(TypeId z) const { return at(tracked_, z); }
    std::int64_t virtual_count(TypeId z) const { return at(virtual_, z); }
    std::int64_t total() const { return total_; }
    std::int64_t virtual_total() const { return virtual_total_; }

    /// Types with N_z > 0, in unspecified order.
    std::span<const TypeId> nonempty() const { return nonempty_.items(); }
    /// Types with N~_z > 0.
    std::span<const TypeId> tracked_nonempty() const { return tracked_nonempty_.items(); }

    const GreedyIndex& greedy_index(ServerId s) const { return greedy_[s]; }
    const GreedyIndex& virtual_index(ServerId s) const { return virtual_greedy_[s]; }
    bool has_greedy_index() const { return options_.greedy_index; }
    bool has_virtual_index() const { return options_.virtual_index; }

    /// N(A) for the grid cell containing type z. Requires Options::epsilon.
    std::int64_t cell_count(TypeId z);

    /// Maps a population ordinal (0-based, < size of pool) to a type and a
    /// position inside that type's pool part, walking nonempty types in
    /// index order. Used to resolve population samples outside the engine.
    std::pair<TypeId, std::int64_t> resolve_ordinal(Pool pool, std::int64_t ordinal) const;

    TypeTable& table() const { return *table_; }
    const Options& options() const { return options_; }

private:
    class IndexedSet {
    public:
        void insert(TypeId z);
        void erase(TypeId z);
        std::span<const TypeId> items() const { return items_; }

    private:
        std::vector<TypeId> items_;
        std::vector<std::int64_t> pos_;
    };

    static std::int64_t at(const std::vector<std::int64_t>& v, TypeId z) {
        const auto i = static_cast<std::size_t>(z);
        return i < v.size() ? v[i] : 0;
    }
    void ensure(TypeId z);
    std::int64_t cell_of(TypeId z);

    TypeTable* table_;
    Options options_;
    std::vector<std::int64_t> n_, tracked_, virtual_;
    std::int64_t total_ = 0;
    std::int64_t virtual_total_ = 0;
    IndexedSet nonempty_, tracked_nonempty_;
    std::vector<GreedyIndex> greedy_, virtual_greedy_;

    std::vector<std::int64_t> cell_of_type_;
    std::map<CellIndex, std::int64_t> cell_ids_;
    std::vector<std::int64_t> cell_counts_;
};

}  // namespace taskmatch

#endif
