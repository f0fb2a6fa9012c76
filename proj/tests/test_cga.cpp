#include <random>
#include <set>

#include "doctest.h"
#include "holmes/cga.hpp"
#include "holmes/error.hpp"
#include "test_util.hpp"

using namespace holmes;

namespace {

std::vector<EmailEvent> three_plus_two() {
  return {
      testutil::event("e1", testutil::at(0), "6.6.6.6", "p@x", "r@y", "s1"),
      testutil::event("e2", testutil::at(0), "6.6.6.6", "q@x", "r@y", "s2"),
      testutil::event("e3", testutil::at(0), "6.6.6.6", "t@x", "r@y", "s3"),
      testutil::event("e4", testutil::at(0), "7.7.7.1", "u@x", "r@y", "win a prize"),
      testutil::event("e5", testutil::at(0), "7.7.7.2", "v@x", "r@y", "win a prize"),
  };
}

// Union-find free component count: repeated relaxation of labels.
std::size_t oracle_components(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (adj[i][j] && label[j] < label[i]) {
          label[i] = label[j];
          changed = true;
        }
      }
    }
  }
  return std::set<std::size_t>(label.begin(), label.end()).size();
}

}  // namespace

TEST_CASE("three sharing an ip and two sharing a subject form two components") {
  const auto g = build_graph(three_plus_two());
  CHECK(g.nodes.size() == 5);
  CHECK(g.links.size() == 4);
  const auto comps = connected_components(g);
  REQUIRE(comps.size() == 2);
  CHECK(comps[0] == std::vector<std::string>{"e1", "e2", "e3"});
  CHECK(comps[1] == std::vector<std::string>{"e4", "e5"});
  CHECK(g.links.back() == GraphEdge{"e4", "e5", {"subject"}});
}

TEST_CASE("same subject from different sources links all pairs by subject") {
  std::vector<EmailEvent> ev;
  for (int i = 0; i < 4; ++i) {
    ev.push_back(testutil::event("b" + std::to_string(i), testutil::at(0),
                                 "8.8.8." + std::to_string(i), "s" + std::to_string(i) + "@x",
                                 "r@y", "Invoice overdue"));
  }
  const auto g = build_graph(ev);
  CHECK(g.links.size() == 6);
  for (const auto& l : g.links) CHECK(l.shared == std::vector<std::string>{"subject"});
}

TEST_CASE("one source with distinct subjects links by src_ip") {
  std::vector<EmailEvent> ev;
  for (int i = 0; i < 4; ++i) {
    ev.push_back(testutil::event("r" + std::to_string(i), testutil::at(0), "4.4.4.4",
                                 "s" + std::to_string(i) + "@x", "r@y",
                                 "subject " + std::to_string(i)));
  }
  const auto g = build_graph(ev);
  CHECK(g.links.size() == 6);
  for (const auto& l : g.links) CHECK(l.shared == std::vector<std::string>{"src_ip"});
}

TEST_CASE("shared lists every matching attribute") {
  const auto g = build_graph({testutil::event("a", testutil::at(0), "1.1.1.1", "m@x", "r@y", "s"),
                              testutil::event("b", testutil::at(0), "1.1.1.1", "m@x", "z@y", "s")});
  REQUIRE(g.links.size() == 1);
  CHECK(g.links[0].shared == std::vector<std::string>{"src_ip", "sender", "subject"});
}

TEST_CASE("empty subjects never link") {
  const auto g = build_graph({testutil::event("a", testutil::at(0), "1.1.1.1", "m@x", "r@y", ""),
                              testutil::event("b", testutil::at(0), "2.2.2.2", "n@x", "r@y", "")});
  CHECK(g.links.empty());
  CHECK(connected_components(g).size() == 2);
}

TEST_CASE("component examples") {
  std::vector<EmailEvent> ev;
  for (int i = 0; i < 4; ++i) {
    ev.push_back(testutil::event("n" + std::to_string(i), testutil::at(0),
                                 "3.3.3." + std::to_string(i), std::to_string(i) + "@x", "r@y",
                                 "s" + std::to_string(i)));
  }
  CHECK(connected_components(build_graph(ev)).size() == 4);
  for (auto& e : ev) e.subject = "same";
  ev.pop_back();
  CHECK(connected_components(build_graph(ev)).size() == 1);
  CHECK(connected_components(CorrelationGraph{}).empty());
}

TEST_CASE("repeated ids keep the first occurrence and nodes sort by id") {
  auto ev = three_plus_two();
  std::reverse(ev.begin(), ev.end());
  auto dup = ev.front();
  dup.subject = "other";
  ev.push_back(dup);
  const auto g = build_graph(ev);
  REQUIRE(g.nodes.size() == 5);
  CHECK(g.nodes.front().id == "e1");
  CHECK(g.nodes.back().subject == "win a prize");
}

TEST_CASE("exports") {
  CHECK(export_graph({}, GraphFormat::json) == R"({"nodes":[],"links":[]})");
  const auto single = build_graph({testutil::event("only")});
  const auto dot = export_graph(single, GraphFormat::dot);
  CHECK(dot.rfind("graph cga {", 0) == 0);
  CHECK(dot.find("--") == std::string::npos);
  CHECK(dot.find("\"only\"") != std::string::npos);

  const auto g = build_graph(three_plus_two());
  const auto json = export_graph(g, GraphFormat::json);
  CHECK(json.rfind(R"({"nodes":[{"id":"e1","country":"US","src_ip":"6.6.6.6",)", 0) == 0);
  CHECK(graph_from_json(json) == g);
  CHECK(export_graph(graph_from_json(json), GraphFormat::json) == json);
  CHECK(export_graph(build_graph(three_plus_two()), GraphFormat::dot) ==
        export_graph(g, GraphFormat::dot));
  const auto two = export_graph(g, GraphFormat::dot);
  CHECK(two.find("\"e4\" -- \"e5\"") != std::string::npos);

  CHECK(parse_graph_format("json") == GraphFormat::json);
  CHECK(parse_graph_format("dot") == GraphFormat::dot);
  try {
    parse_graph_format("gexf");
    FAIL("expected UnsupportedFormat");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::UnsupportedFormat);
  }
  try {
    graph_from_json("{\"nodes\":");
    FAIL("expected MalformedLine");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::MalformedLine);
  }
}

TEST_CASE("edges and components agree with a pairwise oracle") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 1 + rng() % 50;
    std::vector<EmailEvent> ev;
    for (std::size_t i = 0; i < n; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "x%03zu", i);
      ev.push_back(testutil::event(id, testutil::at(0), "10.0.0." + std::to_string(rng() % 12),
                                   "u" + std::to_string(rng() % 15) + "@x", "r@y",
                                   rng() % 3 == 0 ? "" : "s" + std::to_string(rng() % 20)));
    }
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    std::set<std::pair<std::string, std::string>> expected;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const bool link = ev[i].src_ip == ev[j].src_ip || ev[i].mail_from == ev[j].mail_from ||
                          (!ev[i].subject.empty() && ev[i].subject == ev[j].subject);
        if (link) {
          adj[i][j] = adj[j][i] = true;
          expected.insert({ev[i].event_id, ev[j].event_id});
        }
      }
    }
    const auto g = build_graph(ev);
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& l : g.links) {
      CHECK(l.source < l.target);
      CHECK_FALSE(l.shared.empty());
      got.insert({l.source, l.target});
    }
    CHECK(got == expected);
    CHECK(got.size() == g.links.size());
    CHECK(connected_components(g).size() == oracle_components(adj));
    CHECK(build_graph(ev, kernels::Execution::serial) == g);
    CHECK(graph_from_json(export_graph(g, GraphFormat::json)) == g);
  }
}
