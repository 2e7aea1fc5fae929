#include "taskmatch/policies/occupancy.hpp"

#include <cmath>
#include <stdexcept>

namespace taskmatch {

CellIndex bp_eps_cell(const MixedType& z, double epsilon) {
    if (!(epsilon > 0.0 && epsilon <= 2.0)) {
        throw std::invalid_argument("epsilon must be in (0, 2]");
    }
    const double step = epsilon / static_cast<double>(z.size());
    CellIndex cell(z.size());
    for (std::size_t c = 0; c < z.size(); ++c) {
        cell[c] = static_cast<std::int64_t>(std::floor(z[c] / step));
    }
    return cell;
}

void Occupancy::IndexedSet::insert(TypeId z) {
    const auto i = static_cast<std::size_t>(z);
    if (pos_.size() <= i) {
        pos_.resize(i + 1, -1);
    }
    pos_[i] = static_cast<std::int64_t>(items_.size());
    items_.push_back(z);
}

void Occupancy::IndexedSet::erase(TypeId z) {
    const auto i = static_cast<std::size_t>(z);
    const auto p = static_cast<std::size_t>(pos_[i]);
    const TypeId last = items_.back();
    items_[p] = last;
    pos_[static_cast<std::size_t>(last)] = static_cast<std::int64_t>(p);
    items_.pop_back();
    pos_[i] = -1;
}

Occupancy::Occupancy(TypeTable& table, Options options)
    : table_(&table), options_(options) {
    if (options_.greedy_index) {
        greedy_.resize(table.num_servers());
    }
    if (options_.virtual_index) {
        virtual_greedy_.resize(table.num_servers());
    }
}

void Occupancy::ensure(TypeId z) {
    const auto need = static_cast<std::size_t>(z) + 1;
    if (n_.size() < need) {
        const std::size_t grow = std::max(need, n_.size() * 2);
        n_.resize(grow, 0);
        tracked_.resize(grow, 0);
        virtual_.resize(grow, 0);
    }
}

std::int64_t Occupancy::cell_of(TypeId z) {
    const auto i = static_cast<std::size_t>(z);
    if (cell_of_type_.size() <= i) {
        cell_of_type_.resize(std::max(i + 1, cell_of_type_.size() * 2), -1);
    }
    if (cell_of_type_[i] < 0) {
        CellIndex cell = bp_eps_cell(table_->type(z), *options_.epsilon);
        auto [it, inserted] = cell_ids_.try_emplace(std::move(cell),
                                                    static_cast<std::int64_t>(cell_counts_.size()));
        if (inserted) {
            cell_counts_.push_back(0);
        }
        cell_of_type_[i] = it->second;
    }
    return cell_of_type_[i];
}

std::int64_t Occupancy::cell_count(TypeId z) {
    if (!options_.epsilon) {
        throw std::logic_error("cell counts not maintained for this occupancy");
    }
    return cell_counts_[static_cast<std::size_t>(cell_of(z))];
}

void Occupancy::add(TypeId z, bool in_virtual) {
    ensure(z);
    const auto i = static_cast<std::size_t>(z);
    if (n_[i]++ == 0) {
        nonempty_.insert(z);
        if (options_.greedy_index) {
            for (ServerId s = 0; s < greedy_.size(); ++s) {
                greedy_[s].emplace(table_->psi(z, s), z);
            }
        }
    }
    if (in_virtual) {
        if (virtual_[i]++ == 0 && options_.virtual_index) {
            for (ServerId s = 0; s < virtual_greedy_.size(); ++s) {
                virtual_greedy_[s].emplace(table_->psi(z, s), z);
            }
        }
        ++virtual_total_;
    } else if (tracked_[i]++ == 0) {
        tracked_nonempty_.insert(z);
    }
    ++total_;
    if (options_.epsilon) {
        ++cell_counts_[static_cast<std::size_t>(cell_of(z))];
    }
}

void Occupancy::remove(TypeId z, bool in_virtual) {
    const auto i = static_cast<std::size_t>(z);
    if (i >= n_.size() || n_[i] == 0) {
        throw std::logic_error("removing a task from an empty queue");
    }
    if (--n_[i] == 0) {
        nonempty_.erase(z);
        if (options_.greedy_index) {
            for (ServerId s = 0; s < greedy_.size(); ++s) {
                greedy_[s].erase({table_->psi(z, s), z});
            }
        }
    }
    if (in_virtual) {
        if (virtual_[i] == 0) {
            throw std::logic_error("virtual-queue count underflow");
        }
        if (--virtual_[i] == 0 && options_.virtual_index) {
            for (ServerId s = 0; s < virtual_greedy_.size(); ++s) {
                virtual_greedy_[s].erase({table_->psi(z, s), z});
            }
        }
        --virtual_total_;
    } else {
        if (tracked_[i] == 0) {
            throw std::logic_error("tracked-queue count underflow");
        }
        if (--tracked_[i] == 0) {
            tracked_nonempty_.erase(z);
        }
    }
    --total_;
    if (options_.epsilon) {
        --cell_counts_[static_cast<std::size_t>(cell_of(z))];
    }
}

std::pair<TypeId, std::int64_t> Occupancy::resolve_ordinal(Pool pool, std::int64_t ordinal) const {
    // Walk types in increasing id so the mapping does not depend on the
    // insertion history of the nonempty list.
    for (std::size_t i = 0; i < n_.size(); ++i) {
        std::int64_t c = 0;
        switch (pool) {
            case Pool::All: c = n_[i]; break;
            case Pool::Tracked: c = tracked_[i]; break;
            case Pool::Virtual: c = virtual_[i]; break;
        }
        if (ordinal < c) {
            return {static_cast<TypeId>(i), ordinal};
        }
        ordinal -= c;
    }
    throw std::out_of_range("population ordinal out of range");
}

}  // namespace taskmatch
