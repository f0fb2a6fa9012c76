#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "holmes/featurizer.hpp"

namespace holmes {

struct EmbeddingParams {
  int vector_size = 40;
  int min_count = 2;
  int epochs = 40;
  int negative_samples = 5;
  double initial_learning_rate = 0.025;
  std::uint64_t seed = 1;

  // Throws Error(InvalidParams).
  void validate() const;
};

inline constexpr double kFinalLearningRate = 1e-4;

struct DocVector {
  std::string event_id;
  std::vector<double> values;

  friend bool operator==(const DocVector&, const DocVector&) = default;
};

// Tokens with corpus count >= min_count. Index 0 is the most frequent token;
// ties are broken by lexicographic token order.
class Vocabulary {
 public:
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::optional<std::size_t> index_of(std::string_view token) const;
  const std::string& token(std::size_t index) const { return tokens_[index]; }
  std::size_t count(std::size_t index) const { return counts_[index]; }
  bool contains(std::string_view token) const { return index_of(token).has_value(); }

 private:
  friend Vocabulary build_vocab(const std::vector<TokenDocument>&, int);

  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Throws EmptyCorpus for no documents and EmptyVocabulary when no token
// reaches min_count.
Vocabulary build_vocab(const std::vector<TokenDocument>& docs, int min_count);

// Distributed bag-of-words paragraph vectors trained with negative sampling.
// Returns one vector per document in input order. Deterministic for a fixed
// params.seed.
std::vector<DocVector> train_embedding(const std::vector<TokenDocument>& docs,
                                       const EmbeddingParams& params);

// Throws LengthMismatch, or ZeroVector when both inputs are zero. A single
// zero vector yields 0.
double cosine(std::span<const double> a, std::span<const double> b);
double cosine(const DocVector& a, const DocVector& b);

// {"event_id": ..., "values": [...]} per line.
void write_vectors(const std::vector<DocVector>& vectors, std::ostream& out);

}  // namespace holmes
