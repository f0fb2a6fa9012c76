#include "holmes/novelty.hpp"

#include <algorithm>
#include <cmath>

#include "holmes/error.hpp"

namespace holmes {

void NoveltyParams::validate() const {
  if (n_neighbors < 1) throw Error(ErrorCode::InvalidParams, "n_neighbors must be >= 1");
  if (!(contamination > 0.0 && contamination <= 0.5)) {
    throw Error(ErrorCode::InvalidParams, "contamination must be in (0, 0.5]");
  }
  if (std::isnan(decision_threshold)) {
    throw Error(ErrorCode::InvalidParams, "decision threshold is NaN");
  }
}

namespace {

double reach_mean(const Neighborhood& nb, const std::vector<double>& k_distance) {
  double sum = 0.0;
  for (std::size_t m = 0; m < nb.ids.size(); ++m) {
    const double reach = std::max(k_distance[nb.ids[m]], nb.distances[m]);
    sum += std::max(reach, kMinReachDistance);
  }
  return sum / static_cast<double>(nb.ids.size());
}

double neighbor_lrd_mean(const Neighborhood& nb, const std::vector<double>& lrd) {
  double sum = 0.0;
  for (const auto id : nb.ids) sum += lrd[id];
  return sum / static_cast<double>(nb.ids.size());
}

bool all_identical(const PointMatrix& m) {
  const auto first = m.row(0);
  for (std::size_t i = 1; i < m.rows(); ++i) {
    if (!std::equal(first.begin(), first.end(), m.row(i).begin())) return false;
  }
  return true;
}

}  // namespace

PointMatrix to_matrix(std::span<const DocVector> vectors) {
  if (vectors.empty()) return {};
  const std::size_t dim = vectors.front().values.size();
  std::vector<double> data;
  data.reserve(vectors.size() * dim);
  for (const auto& v : vectors) {
    if (v.values.size() != dim) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector '" + v.event_id + "' has length " +
                      std::to_string(v.values.size()) + ", expected " +
                      std::to_string(dim));
    }
    data.insert(data.end(), v.values.begin(), v.values.end());
  }
  return PointMatrix(dim, std::move(data));
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::InvalidParams, "quantile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

NoveltyModel fit_novelty(PointMatrix train, const NoveltyParams& params,
                         kernels::Execution exec) {
  params.validate();
  const auto k = static_cast<std::size_t>(params.n_neighbors);
  if (train.rows() <= k) {
    throw Error(ErrorCode::TooFewPoints,
                "need more than " + std::to_string(k) + " training points, have " +
                    std::to_string(train.rows()));
  }
  if (all_identical(train)) {
    throw Error(ErrorCode::DegenerateData, "all training points are identical");
  }

  NoveltyModel model;
  model.k_ = k;
  model.neighborhoods_ = kernels::knn_self(train, k, exec);
  const std::size_t n = train.rows();

  std::vector<double> k_distance(n);
  for (std::size_t i = 0; i < n; ++i) k_distance[i] = model.neighborhoods_[i].k_distance;

  model.lrd_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.lrd_[i] = 1.0 / reach_mean(model.neighborhoods_[i], k_distance);
  }
  model.lof_.resize(n);
  std::vector<double> raw(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.lof_[i] = neighbor_lrd_mean(model.neighborhoods_[i], model.lrd_) / model.lrd_[i];
    raw[i] = -model.lof_[i];
  }
  model.offset_ = quantile_linear(std::move(raw), params.contamination);
  model.train_ = std::move(train);
  return model;
}

NoveltyModel fit_novelty(const std::vector<DocVector>& train,
                         const NoveltyParams& params, kernels::Execution exec) {
  return fit_novelty(to_matrix(train), params, exec);
}

std::vector<double> NoveltyModel::local_outlier_factor(const PointMatrix& queries,
                                                       kernels::Execution exec) const {
  if (queries.rows() > 0 && queries.dim() != train_.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "model dimension " + std::to_string(train_.dim()) + ", queries " +
                    std::to_string(queries.dim()));
  }
  const auto neighborhoods = kernels::knn_query(train_, queries, k_, exec);
  std::vector<double> k_distance(train_.rows());
  for (std::size_t i = 0; i < train_.rows(); ++i) {
    k_distance[i] = neighborhoods_[i].k_distance;
  }
  std::vector<double> lof(queries.rows());
  for (std::size_t q = 0; q < queries.rows(); ++q) {
    const double lrd = 1.0 / reach_mean(neighborhoods[q], k_distance);
    lof[q] = neighbor_lrd_mean(neighborhoods[q], lrd_) / lrd;
  }
  return lof;
}

std::vector<double> NoveltyModel::decision_function(const PointMatrix& queries,
                                                    kernels::Execution exec) const {
  auto values = local_outlier_factor(queries, exec);
  for (auto& v : values) v = -v - offset_;
  return values;
}

std::vector<DecisionScore> decision_scores(const NoveltyModel& model,
                                           const std::vector<DocVector>& test,
                                           kernels::Execution exec) {
  if (test.empty()) return {};
  for (const auto& v : test) {
    if (v.values.size() != model.dim()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "vector '" + v.event_id + "' has length " +
                      std::to_string(v.values.size()) + ", model expects " +
                      std::to_string(model.dim()));
    }
  }
  const auto values = model.decision_function(to_matrix(test), exec);
  std::vector<DecisionScore> scores;
  scores.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    scores.push_back({test[i].event_id, values[i]});
  }
  return scores;
}

std::vector<std::string> filter_novel(const std::vector<DecisionScore>& scores,
                                      double threshold) {
  std::vector<std::string> ids;
  for (const auto& s : scores) {
    if (s.score < threshold) ids.push_back(s.event_id);
  }
  return ids;
}

}  // namespace holmes
