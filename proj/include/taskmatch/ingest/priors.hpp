#ifndef TASKMATCH_INGEST_PRIORS_HPP
#define TASKMATCH_INGEST_PRIORS_HPP

#include <string>
#include <vector>

#include "taskmatch/core/model.hpp"
#include "taskmatch/ingest/csv.hpp"

namespace taskmatch {

inline constexpr double kDefaultMinFraction = 0.01;

/// Arrival distribution from question tags. Each distinct tag set occurring
/// in at least min_fraction of all questions becomes a type uniform over its
/// tags, with probability equal to its share among the kept questions.
/// Priors are ordered by set size, then by tag position. Throws DataError for
/// tags outside `tags` and when no set survives the filter.
std::vector<Prior> estimate_priors(const std::vector<QuestionTagRecord>& records,
                                   const std::vector<std::string>& tags,
                                   double min_fraction = kDefaultMinFraction);

}  // namespace taskmatch

#endif
