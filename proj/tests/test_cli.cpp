#include <filesystem>
#include <sstream>
#include <thread>

#include "cli.hpp"
#include "doctest.h"
#include "holmes/event.hpp"
#include "holmes/pipeline.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "holmes");
  std::ostringstream out, err;
  const int code = holmes::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> files_in(const fs::path& dir) {
  std::vector<std::string> names;
  if (!fs::exists(dir)) return names;
  for (const auto& e : fs::directory_iterator(dir)) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> small_gen(const fs::path& out, int days, int anomalies = 5) {
  return {"gen",    "--senders", "10",          "--recipients", "4",
          "--rate", "8",         "--days",      std::to_string(days),
          "--anomalies", std::to_string(anomalies), "--seed", "3",
          "-o",     out.string()};
}

std::vector<std::string> fast_detect(std::vector<std::string> args, const fs::path& out) {
  for (std::string a : {"--epochs", "8", "--vector-size", "16", "--out"}) args.push_back(a);
  args.push_back(out.string());
  return args;
}

std::uint16_t wait_for_port(const fs::path& file) {
  for (int i = 0; i < 500 && !fs::exists(file); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  return static_cast<std::uint16_t>(std::stoi(testutil::slurp(file)));
}

}  // namespace

TEST_CASE("gen writes a corpus and labels deterministically") {
  testutil::TempDir dir;
  const auto r = run(small_gen(dir / "a.jsonl", 2));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"events\":645") != std::string::npos);
  CHECK(fs::exists(dir / "a.labels.jsonl"));
  REQUIRE(run(small_gen(dir / "b.jsonl", 2)).code == 0);
  CHECK(testutil::slurp(dir / "a.jsonl") == testutil::slurp(dir / "b.jsonl"));
  CHECK(testutil::slurp(dir / "a.labels.jsonl") == testutil::slurp(dir / "b.labels.jsonl"));
  CHECK(holmes::read_corpus(dir / "a.jsonl").events.size() == 645);
}

TEST_CASE("usage errors exit 2 and help exits 0") {
  CHECK(run({"gen", "--senders", "5"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"detect", "--out", "x"}).code == 2);
  CHECK(run({"detect", "--input", "a", "--stdin", "--out", "x"}).code == 2);
  CHECK(run({"detect", "--input", "a", "--graph-format", "png", "--out", "x"}).code == 2);
  for (std::string sub : {"gen", "detect", "parse-eml", "replay"}) {
    const auto r = run({sub, "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("Usage") != std::string::npos);
  }
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("invalid generator spec exits 1") {
  testutil::TempDir dir;
  const auto r = run({"gen", "--senders", "0", "-o", (dir / "c.jsonl").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("InvalidSpec") != std::string::npos);
}

TEST_CASE("two-file detect writes one report and one graph pair") {
  testutil::TempDir dir;
  REQUIRE(run(small_gen(dir / "c.jsonl", 2)).code == 0);
  const auto corpus = holmes::read_corpus(dir / "c.jsonl");
  const auto cut = holmes::floor_to(corpus.events.front().timestamp, holmes::Duration{86400}) +
                   holmes::Duration{86400};
  holmes::Corpus train, test;
  for (const auto& e : corpus.events) (e.timestamp < cut ? train : test).events.push_back(e);
  holmes::write_corpus(train, dir / "train.jsonl");
  holmes::write_corpus(test, dir / "test.jsonl");
  const auto r = run(fast_detect({"detect", "--train", (dir / "train.jsonl").string(), "--test",
                                  (dir / "test.jsonl").string()},
                                 dir / "out"));
  REQUIRE(r.code == 0);
  const auto names = files_in(dir / "out");
  REQUIRE(names.size() == 3);
  CHECK(names[0].rfind("graph_", 0) == 0);
  CHECK(names[0].ends_with(".dot"));
  CHECK(names[1].ends_with(".json"));
  CHECK(names[2].rfind("report_", 0) == 0);
  const auto report = holmes::report_from_json(testutil::slurp(dir / "out" / names[2]));
  CHECK(report.counts.train_events == train.events.size());
}

TEST_CASE("single-file detect over four days writes three reports") {
  testutil::TempDir dir;
  REQUIRE(run(small_gen(dir / "c.jsonl", 4)).code == 0);
  const auto r = run(fast_detect({"detect", "--input", (dir / "c.jsonl").string(),
                                  "--graph-format", "json", "--dump-vectors"},
                                 dir / "out"));
  REQUIRE(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
  std::size_t reports = 0, vectors = 0, graphs = 0;
  for (const auto& n : files_in(dir / "out")) {
    reports += n.rfind("report_", 0) == 0;
    vectors += n.rfind("vectors_", 0) == 0;
    graphs += n.rfind("graph_", 0) == 0;
  }
  CHECK(reports == 3);
  CHECK(vectors == 3);
  CHECK(graphs == 3);
}

TEST_CASE("k larger than the training window exits 1") {
  testutil::TempDir dir;
  std::vector<holmes::EmailEvent> train, test;
  for (int i = 0; i < 100; ++i) {
    train.push_back(testutil::event("t" + std::to_string(i), testutil::at(0, 0, i)));
  }
  test.push_back(testutil::event("d", testutil::at(1)));
  holmes::write_corpus(holmes::make_corpus(train, "train"), dir / "train.jsonl");
  holmes::write_corpus(holmes::make_corpus(test, "test"), dir / "test.jsonl");
  const auto r = run({"detect", "--train", (dir / "train.jsonl").string(), "--test",
                      (dir / "test.jsonl").string(), "--k", "1000", "--out",
                      (dir / "out").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("TooFewTrainingEvents") != std::string::npos);
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("parse-eml") {
  testutil::TempDir dir;
  fs::create_directories(dir / "eml");
  auto header = [](int i) {
    return "From: User " + std::to_string(i) + " <u" + std::to_string(i) +
           "@example.com>\r\nTo: staff@corp.example\r\nSubject: hello\r\n number " +
           std::to_string(i) + "\r\nUser-Agent: Mutt/2.0\r\n\r\nbody\r\n";
  };
  std::string meta;
  for (int i = 1; i <= 3; ++i) {
    testutil::spit(dir / "eml" / ("m" + std::to_string(i) + ".eml"), header(i));
    meta += R"({"file":"m)" + std::to_string(i) +
            R"(.eml","timestamp":"2020-12-01T10:00:0)" + std::to_string(i) +
            R"(Z","src_ip":"203.0.113.)" + std::to_string(i) +
            R"(","src_country":"de","direction":"inbound","mail_from":"U)" + std::to_string(i) +
            R"(@Example.com"})" + "\n";
  }
  testutil::spit(dir / "meta.jsonl", meta);
  auto parse = [&] {
    return run({"parse-eml", "--dir", (dir / "eml").string(), "--meta",
                (dir / "meta.jsonl").string(), "-o", (dir / "out.jsonl").string()});
  };
  auto r = parse();
  REQUIRE(r.code == 0);
  auto corpus = holmes::read_corpus(dir / "out.jsonl");
  REQUIRE(corpus.events.size() == 3);
  CHECK(corpus.events[0].event_id == "m1.eml");
  CHECK(corpus.events[0].subject == "hello number 1");
  CHECK(corpus.events[0].src_country == "DE");
  CHECK(corpus.events[2].mail_from == "u3@example.com");

  testutil::spit(dir / "eml" / "m2.eml", "this is not a header block\r\n");
  r = parse();
  REQUIRE(r.code == 0);
  CHECK(holmes::read_corpus(dir / "out.jsonl").events.size() == 2);
  CHECK(r.err.find("m2.eml") != std::string::npos);

  fs::create_directories(dir / "empty");
  CHECK(run({"parse-eml", "--dir", (dir / "empty").string(), "--meta",
             (dir / "meta.jsonl").string(), "-o", (dir / "x.jsonl").string()})
            .code == 1);
}

TEST_CASE("replay over TCP matches batch detect byte for byte") {
  testutil::TempDir dir;
  REQUIRE(run(small_gen(dir / "c.jsonl", 3)).code == 0);
  REQUIRE(run(fast_detect({"detect", "--input", (dir / "c.jsonl").string()}, dir / "batch"))
              .code == 0);

  Result detect;
  std::thread server([&] {
    detect = run(fast_detect({"detect", "--listen", "127.0.0.1:0", "--port-file",
                              (dir / "port").string()},
                             dir / "stream"));
  });
  const auto port = wait_for_port(dir / "port");
  const auto replay = run({"replay", "--input", (dir / "c.jsonl").string(), "--connect",
                           "127.0.0.1:" + std::to_string(port)});
  server.join();
  REQUIRE(replay.code == 0);
  REQUIRE(detect.code == 0);
  const auto batch = files_in(dir / "batch");
  REQUIRE(batch.size() == 6);
  CHECK(files_in(dir / "stream") == batch);
  for (const auto& n : batch) {
    CHECK(testutil::slurp(dir / "stream" / n) == testutil::slurp(dir / "batch" / n));
  }
}

TEST_CASE("replay listening, detect connecting") {
  testutil::TempDir dir;
  testutil::spit(dir / "empty.jsonl", "");
  Result replay;
  std::thread server([&] {
    replay = run({"replay", "--input", (dir / "empty.jsonl").string(), "--listen",
                  "127.0.0.1:0", "--port-file", (dir / "port").string()});
  });
  const auto port = wait_for_port(dir / "port");
  const auto detect = run(fast_detect(
      {"detect", "--connect", "127.0.0.1:" + std::to_string(port)}, dir / "out"));
  server.join();
  CHECK(replay.code == 0);
  CHECK(detect.code == 0);
  CHECK(detect.out.empty());
  CHECK(files_in(dir / "out").empty());
}

TEST_CASE("malformed line mid-stream aborts with exit 1") {
  testutil::TempDir dir;
  REQUIRE(run(small_gen(dir / "c.jsonl", 2)).code == 0);
  auto text = testutil::slurp(dir / "c.jsonl");
  const auto pos = text.find('\n', text.size() / 2);
  text.insert(pos + 1, "{\"event_id\": broken\n");
  testutil::spit(dir / "bad.jsonl", text);
  Result detect;
  std::thread server([&] {
    detect = run(fast_detect({"detect", "--listen", "127.0.0.1:0", "--port-file",
                              (dir / "port").string()},
                             dir / "out"));
  });
  const auto port = wait_for_port(dir / "port");
  run({"replay", "--input", (dir / "bad.jsonl").string(), "--connect",
       "127.0.0.1:" + std::to_string(port)});
  server.join();
  CHECK(detect.code == 1);
  CHECK(detect.err.find("MalformedLine") != std::string::npos);
}

TEST_CASE("config file supplies defaults that flags override") {
  testutil::TempDir dir;
  testutil::spit(dir / "gen.conf", "# generator\nsenders = 4\nrecipients=2\nrate=6\ndays=1\n");
  auto r = run({"gen", "--config", (dir / "gen.conf").string(), "-o",
                (dir / "a.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"events\":48") != std::string::npos);
  r = run({"gen", "--config", (dir / "gen.conf").string(), "--rate", "7", "-o",
           (dir / "b.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("\"events\":56") != std::string::npos);
  CHECK(run({"gen", "--config", (dir / "missing.conf").string(), "-o", "x"}).code == 2);
}
