#ifndef TASKMATCH_IO_SCENARIO_JSON_HPP
#define TASKMATCH_IO_SCENARIO_JSON_HPP

#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "taskmatch/core/model.hpp"

namespace taskmatch {

inline constexpr int kFormatVersion = 1;

/// A scenario document that is not valid JSON or misses required fields.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Layout:
///   {"format_version": 1, "classes": [..], "lambda": x,
///    "servers": [{"label": .., "mu": x, "skills": [p per class]}],
///    "priors": [{"weights": [..], "prob": x}],
///    "feedback": {"symbols": [..], "beta": [server][class][symbol]}}
/// with "feedback" optional.
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Throws FormatError for structural problems and InvalidScenario when the
/// values violate the model's invariants.
Scenario scenario_from_json(const nlohmann::json& doc);

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

}  // namespace taskmatch

#endif
