#pragma once

#include "holmes/cga.hpp"
#include "json.hpp"

namespace holmes::detail {

nlohmann::ordered_json graph_to_json(const CorrelationGraph& graph);
CorrelationGraph graph_from_json(const nlohmann::json& j);

}  // namespace holmes::detail
