#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "pvar/small_value_bounds.hpp"
#include "pvar/step_function.hpp"
#include "pvar/variation.hpp"

namespace pvar {

using json = nlohmann::json;

/// {"field":"real"|"complex","breakpoints":[0,...,1],"values":[...]}
/// values are numbers for a real function, [re,im] pairs for a complex one.
/// Serialization round-trips bit-exactly.
json step_function_to_json(const StepFunction& f);
StepFunction step_function_from_json(const json& j);

/// Two-column CSV "t,value" (real functions only), one row per value index,
/// first t = 0 and last t = 1. A "t,value" header row is accepted on input.
std::string step_function_to_csv(const StepFunction& f);
StepFunction step_function_from_csv(const std::string& text);

/// Reads a step function from a .json or .csv file (decided by extension).
StepFunction read_step_function(const std::filesystem::path& path);
void write_step_function(const std::filesystem::path& path, const StepFunction& f);

json witness_to_json(const PartitionWitness& w);

/// {pass, max_attained, threshold, worst_selection, seed?} plus diagnostics.
json small_value_report_to_json(const SmallValueReport& report);

}  // namespace pvar
