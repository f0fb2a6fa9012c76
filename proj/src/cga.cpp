#include "holmes/cga.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "graph_json.hpp"
#include "holmes/error.hpp"

namespace holmes {

CorrelationGraph build_graph(const std::vector<EmailEvent>& events,
                             kernels::Execution exec) {
  CorrelationGraph graph;
  std::unordered_set<std::string_view> seen;
  std::vector<const EmailEvent*> unique;
  for (const auto& e : events) {
    if (seen.insert(e.event_id).second) unique.push_back(&e);
  }
  std::sort(unique.begin(), unique.end(), [](const EmailEvent* a, const EmailEvent* b) {
    return a->event_id < b->event_id;
  });

  std::vector<AttributeRow> rows;
  rows.reserve(unique.size());
  for (const EmailEvent* e : unique) {
    graph.nodes.push_back({e->event_id, e->src_country, e->src_ip, e->mail_from,
                           e->subject});
    rows.push_back({e->src_ip, e->mail_from, e->subject});
  }

  // Nodes are id-sorted and matches come back in (i, j) order, so links
  // are already sorted by (source, target).
  for (const auto& m : kernels::attribute_matches(rows, exec)) {
    GraphEdge edge{graph.nodes[m.first].id, graph.nodes[m.second].id, {}};
    if (m.shared & kSharedSrcIp) edge.shared.emplace_back("src_ip");
    if (m.shared & kSharedSender) edge.shared.emplace_back("sender");
    if (m.shared & kSharedSubject) edge.shared.emplace_back("subject");
    graph.links.push_back(std::move(edge));
  }
  return graph;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root wins so each root is its set's minimum index.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::vector<std::vector<std::string>> connected_components(const CorrelationGraph& graph) {
  std::vector<std::size_t> order(graph.nodes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return graph.nodes[a].id < graph.nodes[b].id;
  });
  // rank[i] = position of node i in id order
  std::unordered_map<std::string_view, std::size_t> rank;
  for (std::size_t r = 0; r < order.size(); ++r) rank[graph.nodes[order[r]].id] = r;

  DisjointSets sets(order.size());
  for (const auto& e : graph.links) {
    const auto s = rank.find(e.source);
    const auto t = rank.find(e.target);
    if (s != rank.end() && t != rank.end()) sets.unite(s->second, t->second);
  }
  std::vector<std::vector<std::string>> components;
  std::unordered_map<std::size_t, std::size_t> slot;
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t root = sets.find(r);
    auto [it, fresh] = slot.try_emplace(root, components.size());
    if (fresh) components.emplace_back();
    components[it->second].push_back(graph.nodes[order[r]].id);
  }
  return components;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "json") return GraphFormat::json;
  if (name == "dot") return GraphFormat::dot;
  throw Error(ErrorCode::UnsupportedFormat, "unknown graph format '" + std::string(name) + "'");
}

namespace detail {

nlohmann::ordered_json graph_to_json(const CorrelationGraph& graph) {
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  j["links"] = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes) {
    nlohmann::ordered_json node;
    node["id"] = n.id;
    node["country"] = n.country;
    node["src_ip"] = n.src_ip;
    node["sender"] = n.sender;
    node["subject"] = n.subject;
    j["nodes"].push_back(std::move(node));
  }
  for (const auto& e : graph.links) {
    nlohmann::ordered_json link;
    link["source"] = e.source;
    link["target"] = e.target;
    link["shared"] = e.shared;
    j["links"].push_back(std::move(link));
  }
  return j;
}

CorrelationGraph graph_from_json(const nlohmann::json& j) {
  try {
    CorrelationGraph graph;
    for (const auto& n : j.at("nodes")) {
      graph.nodes.push_back({n.at("id").get<std::string>(),
                             n.at("country").get<std::string>(),
                             n.at("src_ip").get<std::string>(),
                             n.at("sender").get<std::string>(),
                             n.at("subject").get<std::string>()});
    }
    for (const auto& l : j.at("links")) {
      graph.links.push_back({l.at("source").get<std::string>(),
                             l.at("target").get<std::string>(),
                             l.at("shared").get<std::vector<std::string>>()});
    }
    return graph;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::MalformedLine, std::string("bad graph JSON: ") + ex.what());
  }
}

}  // namespace detail

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\r') {
      // dropped
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

std::string export_dot(const CorrelationGraph& graph) {
  std::ostringstream out;
  out << "graph cga {\n";
  for (const auto& n : graph.nodes) {
    out << "  " << dot_quote(n.id) << " [country=" << dot_quote(n.country)
        << ", src_ip=" << dot_quote(n.src_ip) << ", sender=" << dot_quote(n.sender)
        << ", subject=" << dot_quote(n.subject) << "];\n";
  }
  for (const auto& e : graph.links) {
    std::string label;
    for (const auto& s : e.shared) {
      if (!label.empty()) label += ',';
      label += s;
    }
    out << "  " << dot_quote(e.source) << " -- " << dot_quote(e.target)
        << " [label=" << dot_quote(label) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_graph(const CorrelationGraph& graph, GraphFormat format) {
  switch (format) {
    case GraphFormat::json:
      return detail::graph_to_json(graph).dump(-1, ' ', false,
                                               nlohmann::json::error_handler_t::replace);
    case GraphFormat::dot:
      return export_dot(graph);
  }
  throw Error(ErrorCode::UnsupportedFormat, "unknown graph format");
}

CorrelationGraph graph_from_json(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error& ex) {
    throw Error(ErrorCode::MalformedLine, std::string("bad graph JSON: ") + ex.what());
  }
  return detail::graph_from_json(j);
}

}  // namespace holmes
