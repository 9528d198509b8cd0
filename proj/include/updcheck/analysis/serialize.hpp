#pragma once

// JSON values for embedding analysis results in larger documents.

#include <json.hpp>

#include "updcheck/analysis/diffing.hpp"

namespace updcheck::analysis {

nlohmann::ordered_json function_change_value(const FunctionChange& fc);
FunctionChange function_change_from(const nlohmann::json& j);
nlohmann::ordered_json changeset_value(const ChangeSet& cs);
ChangeSet changeset_from(const nlohmann::json& j);

}  // namespace updcheck::analysis
