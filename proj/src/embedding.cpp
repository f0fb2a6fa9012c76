#include "holmes/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "holmes/error.hpp"
#include "json.hpp"

namespace holmes {

void EmbeddingParams::validate() const {
  if (vector_size < 1 || epochs < 1 || min_count < 1 || negative_samples < 1) {
    throw Error(ErrorCode::InvalidParams,
                "vector_size, epochs, min_count and negative_samples must be >= 1");
  }
  if (!(initial_learning_rate > 0.0) || !std::isfinite(initial_learning_rate)) {
    throw Error(ErrorCode::InvalidParams, "learning rate must be positive");
  }
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocab(const std::vector<TokenDocument>& docs, int min_count) {
  if (docs.empty()) throw Error(ErrorCode::EmptyCorpus, "no documents");
  std::unordered_map<std::string, std::size_t> counts;
  for (const auto& doc : docs) {
    for (const auto& tok : doc.tokens) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [tok, n] : counts) {
    if (n >= static_cast<std::size_t>(min_count)) kept.emplace_back(tok, n);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::EmptyVocabulary,
                "no token occurs at least " + std::to_string(min_count) + " times");
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  Vocabulary vocab;
  vocab.tokens_.reserve(kept.size());
  vocab.counts_.reserve(kept.size());
  for (auto& [tok, n] : kept) {
    vocab.index_.emplace(tok, vocab.tokens_.size());
    vocab.tokens_.push_back(std::move(tok));
    vocab.counts_.push_back(n);
  }
  return vocab;
}

namespace {

// Uniform double in [0, 1) from the top 53 bits.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

class NoiseDistribution {
 public:
  explicit NoiseDistribution(const Vocabulary& vocab) {
    cumulative_.reserve(vocab.size());
    double total = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      total += std::pow(static_cast<double>(vocab.count(i)), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::size_t sample(std::mt19937_64& rng) const {
    const double u = unit_draw(rng) * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
  }

 private:
  std::vector<double> cumulative_;
};

}  // namespace

std::vector<DocVector> train_embedding(const std::vector<TokenDocument>& docs,
                                       const EmbeddingParams& params) {
  params.validate();
  const Vocabulary vocab = build_vocab(docs, params.min_count);
  const auto dim = static_cast<std::size_t>(params.vector_size);
  const std::size_t n_docs = docs.size();

  std::vector<std::vector<std::uint32_t>> doc_tokens(n_docs);
  std::size_t tokens_per_epoch = 0;
  for (std::size_t d = 0; d < n_docs; ++d) {
    for (const auto& tok : docs[d].tokens) {
      if (auto idx = vocab.index_of(tok)) {
        doc_tokens[d].push_back(static_cast<std::uint32_t>(*idx));
      }
    }
    tokens_per_epoch += doc_tokens[d].size();
  }

  std::mt19937_64 rng(params.seed);
  const double half_width = 0.5 / static_cast<double>(dim);
  auto init = [&](std::vector<double>& m) {
    for (auto& x : m) x = (unit_draw(rng) * 2.0 - 1.0) * half_width;
  };
  std::vector<double> doc_vecs(n_docs * dim);
  std::vector<double> out_vecs(vocab.size() * dim);
  init(doc_vecs);
  init(out_vecs);

  const NoiseDistribution noise(vocab);
  const double lr0 = params.initial_learning_rate;
  const double total_updates =
      static_cast<double>(tokens_per_epoch) * params.epochs;
  std::size_t processed = 0;
  std::vector<double> grad(dim);

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t d = 0; d < n_docs; ++d) {
      double* doc = doc_vecs.data() + d * dim;
      for (const std::uint32_t word : doc_tokens[d]) {
        const double alpha =
            lr0 - (lr0 - kFinalLearningRate) *
                      (static_cast<double>(processed) / total_updates);
        std::fill(grad.begin(), grad.end(), 0.0);
        for (int s = 0; s <= params.negative_samples; ++s) {
          std::size_t target = word;
          double label = 1.0;
          if (s > 0) {
            target = noise.sample(rng);
            if (target == word) continue;
            label = 0.0;
          }
          double* out = out_vecs.data() + target * dim;
          double dot = 0.0;
          for (std::size_t i = 0; i < dim; ++i) dot += doc[i] * out[i];
          const double g = (label - sigmoid(dot)) * alpha;
          for (std::size_t i = 0; i < dim; ++i) {
            grad[i] += g * out[i];
            out[i] += g * doc[i];
          }
        }
        for (std::size_t i = 0; i < dim; ++i) doc[i] += grad[i];
        ++processed;
      }
    }
  }

  std::vector<DocVector> result;
  result.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const double* doc = doc_vecs.data() + d * dim;
    result.push_back({docs[d].event_id, std::vector<double>(doc, doc + dim)});
  }
  return result;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 && nb == 0.0) {
    throw Error(ErrorCode::ZeroVector, "both vectors are zero");
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double cosine(const DocVector& a, const DocVector& b) {
  return cosine(std::span<const double>(a.values), std::span<const double>(b.values));
}

void write_vectors(const std::vector<DocVector>& vectors, std::ostream& out) {
  for (const auto& v : vectors) {
    nlohmann::ordered_json j;
    j["event_id"] = v.event_id;
    j["values"] = v.values;
    out << j.dump() << '\n';
  }
}

}  // namespace holmes
