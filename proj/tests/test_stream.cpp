#include <sstream>
#include <thread>

#include "doctest.h"
#include "holmes/error.hpp"
#include "holmes/net.hpp"
#include "holmes/stream.hpp"
#include "test_util.hpp"

using namespace holmes;

namespace {

std::string line_for(const std::string& id, int minute) {
  return serialize_event(testutil::event(id, testutil::at(0, 0, minute))) + "\n";
}

std::vector<std::string> drain(EventSource& src) {
  std::vector<std::string> ids;
  while (auto e = src.next()) ids.push_back(e->event_id);
  return ids;
}

ErrorCode drain_error(EventSource& src) {
  try {
    drain(src);
  } catch (const Error& ex) {
    return ex.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("ordered lines pass straight through") {
  std::istringstream in(line_for("a", 1) + line_for("b", 2) + "\n" + line_for("c", 2));
  LineStreamSource src(in);
  CHECK(src.kind() == SourceKind::line_stream);
  CHECK(drain(src) == std::vector<std::string>{"a", "b", "c"});
  CHECK_FALSE(src.next().has_value());
}

TEST_CASE("strict ordering rejects regressions") {
  std::istringstream in(line_for("a", 5) + line_for("b", 4));
  LineStreamSource src(in);
  CHECK(drain_error(src) == ErrorCode::OutOfOrderEvent);
}

TEST_CASE("lateness buffer reorders within tolerance") {
  std::istringstream in(line_for("a", 5) + line_for("b", 3) + line_for("c", 9) +
                        line_for("d", 6));
  LineStreamSource src(in, Duration{180});
  CHECK(drain(src) == std::vector<std::string>{"b", "a", "d", "c"});

  std::istringstream late(line_for("a", 10) + line_for("b", 6));
  LineStreamSource strict(late, Duration{180});
  CHECK(drain_error(strict) == ErrorCode::OutOfOrderEvent);
}

TEST_CASE("malformed lines report their line number") {
  std::istringstream in(line_for("a", 1) + "{not json}\n");
  LineStreamSource src(in, Duration{0}, "feed");
  CHECK(src.next()->event_id == "a");
  try {
    src.next();
    FAIL("expected MalformedLine");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::MalformedLine);
    CHECK(std::string(ex.what()).find("feed:2") != std::string::npos);
  }
  CHECK_THROWS_AS(LineStreamSource(in, Duration{-1}), Error);
}

TEST_CASE("batch source yields the corpus in order") {
  auto corpus = make_corpus({testutil::event("b", testutil::at(0, 2)),
                             testutil::event("a", testutil::at(0, 1))},
                            "two");
  BatchFileSource src(std::move(corpus));
  CHECK(src.kind() == SourceKind::batch_file);
  CHECK(drain(src) == std::vector<std::string>{"a", "b"});
}

TEST_CASE("replay copies non-blank lines") {
  std::istringstream in("x\n\n y \r\nz");
  std::ostringstream out;
  CHECK(replay_lines(in, out) == 3);
  CHECK(out.str() == "x\n y \nz\n");
}

TEST_CASE("endpoints parse") {
  CHECK(net::parse_endpoint("9000").port == 9000);
  CHECK(net::parse_endpoint(":81").host == "127.0.0.1");
  const auto ep = net::parse_endpoint("localhost:7");
  CHECK(ep.host == "localhost");
  CHECK(ep.port == 7);
  CHECK_THROWS_AS(net::parse_endpoint("host:notaport"), Error);
  CHECK_THROWS_AS(net::parse_endpoint("70000"), Error);
}

TEST_CASE("events survive a TCP loopback round trip") {
  std::string payload;
  for (int i = 0; i < 500; ++i) payload += line_for("e" + std::to_string(i), i);
  auto listener = net::listen_on({"127.0.0.1", 0});
  const auto port = net::local_port(listener);
  REQUIRE(port != 0);
  std::thread sender([&] {
    net::SocketStream out(net::connect_to({"127.0.0.1", port}));
    std::istringstream in(payload);
    replay_lines(in, out);
  });
  net::SocketStream in(net::accept_one(listener));
  LineStreamSource src(in);
  const auto ids = drain(src);
  sender.join();
  REQUIRE(ids.size() == 500);
  CHECK(ids.front() == "e0");
  CHECK(ids.back() == "e499");
}

TEST_CASE("connecting to a closed port fails") {
  std::uint16_t port = 0;
  {
    auto l = net::listen_on({"127.0.0.1", 0});
    port = net::local_port(l);
  }
  try {
    net::connect_to({"127.0.0.1", port}, std::chrono::milliseconds{200});
    FAIL("expected ConnectionFailed");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::ConnectionFailed);
  }
}
