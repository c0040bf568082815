#pragma once

#include <json.hpp>

#include "blockopt/search_space.hpp"

namespace blockopt {

using json = nlohmann::json;

json to_json(const Value& v);
/// Converts a JSON scalar into a value of the domain's kind. Integral JSON
/// numbers are accepted for continuous variables.
Value value_from_json(const Domain& d, const json& j);

json to_json(const Assignment& a);
/// Every key must name a variable of `space`; values are domain-checked.
Assignment assignment_from_json(const SearchSpace& space, const json& j);

/// Variable declaration: {"name", "type", "bounds" | "labels", "log"}.
json to_json(const Variable& v);
Variable variable_from_json(const json& j);

json to_json(const SearchSpace& space);
SearchSpace space_from_json(const json& j);

}  // namespace blockopt
