#include <cmath>

#include "doctest.h"
#include "holmes/embedding.hpp"
#include "holmes/error.hpp"
#include "similarity_case.hpp"

using namespace holmes;

namespace {

std::vector<TokenDocument> docs_of(std::vector<std::vector<std::string>> lists) {
  std::vector<TokenDocument> docs;
  for (auto& l : lists) docs.push_back({"d" + std::to_string(docs.size()), std::move(l)});
  return docs;
}

}  // namespace

TEST_CASE("build_vocab") {
  const auto v = build_vocab(docs_of({{"a", "b"}, {"a"}}), 2);
  CHECK(v.size() == 1);
  CHECK(v.contains("a"));
  CHECK_FALSE(v.contains("b"));
  CHECK(v.count(0) == 2);

  try {
    build_vocab(docs_of({{"a"}, {"b"}}), 2);
    FAIL("expected EmptyVocabulary");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::EmptyVocabulary);
  }

  const auto three = build_vocab(docs_of({{"z", "y"}, {"x"}}), 1);
  CHECK(three.size() == 3);
  // Equal counts fall back to lexicographic order.
  CHECK(three.token(0) == "x");
  CHECK(three.token(2) == "z");

  const auto ranked = build_vocab(docs_of({{"b", "b", "a"}, {"c", "b", "c"}}), 1);
  CHECK(ranked.token(0) == "b");
  CHECK(ranked.token(1) == "c");
  CHECK(ranked.token(2) == "a");
  CHECK_THROWS_AS(build_vocab({}, 1), Error);
}

TEST_CASE("train returns one finite vector per document") {
  std::vector<std::vector<std::string>> lists;
  for (int i = 0; i < 30; ++i) lists.push_back({"t" + std::to_string(i % 7), "common", "x" + std::to_string(i)});
  const auto docs = docs_of(lists);
  EmbeddingParams p;  // vector_size 40, min_count 2, epochs 40
  const auto vecs = train_embedding(docs, p);
  REQUIRE(vecs.size() == docs.size());
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    CHECK(vecs[i].event_id == docs[i].event_id);
    REQUIRE(vecs[i].values.size() == 40);
    for (double x : vecs[i].values) CHECK(std::isfinite(x));
  }
}

TEST_CASE("training is bitwise reproducible for a fixed seed") {
  const auto docs = docs_of({{"a", "b", "c"}, {"a", "b"}, {"b", "c"}, {"c", "a", "a"}});
  EmbeddingParams p;
  p.seed = 42;
  const auto first = train_embedding(docs, p);
  const auto second = train_embedding(docs, p);
  CHECK(first == second);
  p.seed = 43;
  CHECK_FALSE(train_embedding(docs, p) == first);
}

TEST_CASE("degenerate corpora still produce finite vectors") {
  EmbeddingParams p;
  p.min_count = 1;
  const auto single = train_embedding(docs_of({{"only", "doc"}}), p);
  REQUIRE(single.size() == 1);
  for (double x : single[0].values) CHECK(std::isfinite(x));

  // The second document has no in-vocabulary token, so it never moves from
  // its initialization.
  p.min_count = 2;
  const auto vecs = train_embedding(docs_of({{"a", "a"}, {"zzz"}}), p);
  const double bound = 0.5 / p.vector_size;
  for (double x : vecs[1].values) {
    CHECK(std::isfinite(x));
    CHECK(std::fabs(x) <= bound);
  }
}

TEST_CASE("invalid parameters") {
  const auto docs = docs_of({{"a", "a"}});
  for (auto mutate : std::vector<void (*)(EmbeddingParams&)>{
           [](EmbeddingParams& p) { p.vector_size = 0; },
           [](EmbeddingParams& p) { p.epochs = 0; },
           [](EmbeddingParams& p) { p.min_count = 0; },
           [](EmbeddingParams& p) { p.negative_samples = 0; },
           [](EmbeddingParams& p) { p.initial_learning_rate = -1; }}) {
    EmbeddingParams p;
    mutate(p);
    try {
      train_embedding(docs, p);
      FAIL("expected InvalidParams");
    } catch (const Error& ex) {
      CHECK(ex.code() == ErrorCode::InvalidParams);
    }
  }
}

TEST_CASE("duplicate documents embed closer than unrelated ones") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = testutil::duplicate_similarity(seed);
    INFO("seed " << seed << " dup " << r.duplicate_mean << " random " << r.random_mean);
    CHECK(r.duplicate_mean - r.random_mean >= 0.2);
  }
}

TEST_CASE("cosine") {
  const DocVector a{"a", {1.0, 2.0, -3.0}};
  const DocVector neg{"n", {-1.0, -2.0, 3.0}};
  CHECK(cosine(a, a) == 1.0);
  CHECK(cosine(a, neg) == -1.0);
  CHECK(cosine(DocVector{"x", {1, 0}}, DocVector{"y", {0, 1}}) == 0.0);
  CHECK(cosine(DocVector{"x", {0, 0}}, DocVector{"y", {0, 1}}) == 0.0);
  try {
    cosine(DocVector{"x", {0, 0}}, DocVector{"y", {0, 0}});
    FAIL("expected ZeroVector");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::ZeroVector);
  }
  try {
    cosine(DocVector{"x", {1}}, DocVector{"y", {0, 1}});
    FAIL("expected LengthMismatch");
  } catch (const Error& ex) {
    CHECK(ex.code() == ErrorCode::LengthMismatch);
  }
}
