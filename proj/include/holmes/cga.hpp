#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "holmes/event.hpp"
#include "holmes/kernels.hpp"

namespace holmes {

struct GraphNode {
  std::string id;  // event_id
  std::string country;
  std::string src_ip;
  std::string sender;
  std::string subject;

  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string source;  // source < target
  std::string target;
  // Subset of {"src_ip", "sender", "subject"} in that order; never empty.
  std::vector<std::string> shared;

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Undirected correlation graph over flagged events. Nodes are sorted by id
// and links by (source, target).
struct CorrelationGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> links;

  friend bool operator==(const CorrelationGraph&, const CorrelationGraph&) = default;
};

// One node per event (repeated event ids keep the first occurrence). Two
// nodes are linked iff they share src_ip, mail_from, or an identical
// non-empty subject.
CorrelationGraph build_graph(const std::vector<EmailEvent>& events,
                             kernels::Execution exec = kernels::Execution::parallel);

// Components as sorted id lists, ordered by their smallest id.
std::vector<std::vector<std::string>> connected_components(const CorrelationGraph& graph);

enum class GraphFormat { json, dot };

// Throws UnsupportedFormat.
GraphFormat parse_graph_format(std::string_view name);

// Node-link JSON or an undirected graphviz graph. Byte-identical output for
// equal graphs.
std::string export_graph(const CorrelationGraph& graph, GraphFormat format);

// Inverse of export_graph(json). Throws MalformedLine.
CorrelationGraph graph_from_json(std::string_view json);

}  // namespace holmes
