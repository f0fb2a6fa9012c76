#include <functional>
#include <map>
#include <tuple>

#include "doctest.h"
#include "holmes/error.hpp"
#include "holmes/rareness.hpp"
#include "test_util.hpp"

using namespace holmes;

namespace {

std::vector<std::string> ids(const std::vector<EmailEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(e.event_id);
  return out;
}

// Naive count-then-filter over a tuple key.
std::vector<std::string> naive_rare(const std::vector<EmailEvent>& events, int threshold) {
  std::map<std::tuple<std::string, int, std::string, std::string>, int> counts;
  auto key = [](const EmailEvent& e) {
    return std::make_tuple(e.src_ip, static_cast<int>(e.direction), e.mail_from, e.mail_to);
  };
  for (const auto& e : events) ++counts[key(e)];
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (counts[key(e)] <= threshold) out.push_back(e.event_id);
  }
  return out;
}

}  // namespace

TEST_CASE("three of a kind plus a singleton keeps the singleton") {
  std::vector<EmailEvent> ev = {testutil::event("a"), testutil::event("b"),
                                testutil::event("c"), testutil::event("d", testutil::at(0),
                                                                      "9.9.9.9")};
  CHECK(ids(select_rare(ev, 2)) == std::vector<std::string>{"d"});
}

TEST_CASE("a pair is kept at threshold 2") {
  std::vector<EmailEvent> ev = {testutil::event("a"), testutil::event("b")};
  CHECK(ids(select_rare(ev, 2)) == std::vector<std::string>{"a", "b"});
  CHECK(ids(select_rare(ev)) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("threshold 0 and empty input") {
  std::vector<EmailEvent> ev = {testutil::event("a"), testutil::event("b", testutil::at(0),
                                                                      "5.5.5.5")};
  CHECK(select_rare(ev, 0).empty());
  CHECK(select_rare({}, 2).empty());
  try {
    select_rare(ev, -1);
    FAIL("expected InvalidParams");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::InvalidParams);
  }
}

TEST_CASE("direction is part of the key") {
  auto a = testutil::event("a");
  auto b = testutil::event("b");
  auto c = testutil::event("c");
  b.direction = Direction::outbound;
  c.direction = Direction::outbound;
  CHECK(ids(select_rare({a, b, c}, 1)) == std::vector<std::string>{"a"});
}

TEST_CASE("keys joined with a separator do not alias") {
  auto a = testutil::event("a", testutil::at(0), "1.2.3.4", "a", "bc");
  auto b = testutil::event("b", testutil::at(0), "1.2.3.4", "ab", "c");
  CHECK(relation_key(a).joined() != relation_key(b).joined());
  CHECK_FALSE(relation_key(a) == relation_key(b));
  CHECK(ids(select_rare({a, b}, 1)) == std::vector<std::string>{"a", "b"});
  const auto joined = relation_key(a).joined();
  CHECK(std::count(joined.begin(), joined.end(), kKeySeparator) == 3);
  CHECK(joined == std::string("1.2.3.4\x1finbound\x1f" "a\x1f" "bc"));
}

TEST_CASE("exhaustive agreement with a naive counter on small multisets") {
  // Three keys: two differ only in how mail_from/mail_to split "abc".
  const std::vector<EmailEvent> protos = {
      testutil::event("", testutil::at(0), "1.1.1.1", "a", "bc"),
      testutil::event("", testutil::at(0), "1.1.1.1", "ab", "c"),
      testutil::event("", testutil::at(0), "2.2.2.2", "a", "bc"),
  };
  std::size_t checked = 0;
  std::vector<int> seq;
  std::function<void()> rec = [&] {
    std::vector<EmailEvent> events;
    for (std::size_t i = 0; i < seq.size(); ++i) {
      auto e = protos[static_cast<std::size_t>(seq[i])];
      e.event_id = "e" + std::to_string(i);
      events.push_back(e);
    }
    for (int t = 0; t <= 7; ++t) {
      CHECK(ids(select_rare(events, t)) == naive_rare(events, t));
      ++checked;
    }
    if (seq.size() == 6) return;
    for (int k = 0; k < 3; ++k) {
      seq.push_back(k);
      rec();
      seq.pop_back();
    }
  };
  rec();
  // All sequences of length 0..6 over 3 keys, 8 thresholds each.
  CHECK(checked == 8u * (1 + 3 + 9 + 27 + 81 + 243 + 729));
}
