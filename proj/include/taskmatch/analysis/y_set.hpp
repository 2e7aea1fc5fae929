#ifndef TASKMATCH_ANALYSIS_Y_SET_HPP
#define TASKMATCH_ANALYSIS_Y_SET_HPP

#include <vector>

#include "taskmatch/core/canonical.hpp"
#include "taskmatch/core/model.hpp"

namespace taskmatch {

/// The set of types the backpressure policy tracks explicitly: the arrival
/// support plus every type reachable from a non-pure arrival type by at most
/// `depth` failed attempts. Pure types map to themselves and appear once.
/// Keys are returned in discovery order.
std::vector<CanonicalKey> construct_y_set(const Scenario& scenario, int depth);

}  // namespace taskmatch

#endif
