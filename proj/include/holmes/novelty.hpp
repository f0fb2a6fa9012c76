#pragma once

#include <span>
#include <string>
#include <vector>

#include "holmes/embedding.hpp"
#include "holmes/kernels.hpp"

namespace holmes {

struct NoveltyParams {
  int n_neighbors = 20;
  double contamination = 0.5;
  double decision_threshold = 0.0;

  void validate() const;  // throws InvalidParams
};

// Reachability distances of coincident points are floored here so that
// local reachability density stays finite.
inline constexpr double kMinReachDistance = 1e-12;

struct DecisionScore {
  std::string event_id;
  double score = 0.0;  // negative => novel

  friend bool operator==(const DecisionScore&, const DecisionScore&) = default;
};

// Local Outlier Factor fitted on a training set, used for novelty scoring
// of points that were not part of the fit.
class NoveltyModel {
 public:
  std::size_t k() const { return k_; }
  std::size_t dim() const { return train_.dim(); }
  const PointMatrix& train_points() const { return train_; }
  const std::vector<Neighborhood>& neighborhoods() const { return neighborhoods_; }
  const std::vector<double>& local_reachability_density() const { return lrd_; }
  // LOF of each training point against the rest of the training set.
  const std::vector<double>& training_lof() const { return lof_; }
  // The contamination quantile of training -LOF values.
  double offset() const { return offset_; }

  // LOF of external query points against the training set.
  std::vector<double> local_outlier_factor(
      const PointMatrix& queries,
      kernels::Execution exec = kernels::Execution::parallel) const;

  // (-LOF) - offset per query.
  std::vector<double> decision_function(
      const PointMatrix& queries,
      kernels::Execution exec = kernels::Execution::parallel) const;

 private:
  friend NoveltyModel fit_novelty(PointMatrix, const NoveltyParams&,
                                  kernels::Execution);

  std::size_t k_ = 0;
  PointMatrix train_;
  std::vector<Neighborhood> neighborhoods_;
  std::vector<double> lrd_;
  std::vector<double> lof_;
  double offset_ = 0.0;
};

// Throws TooFewPoints (|train| <= n_neighbors), DegenerateData (all
// training points identical) or InvalidParams.
NoveltyModel fit_novelty(PointMatrix train, const NoveltyParams& params,
                         kernels::Execution exec = kernels::Execution::parallel);
NoveltyModel fit_novelty(const std::vector<DocVector>& train,
                         const NoveltyParams& params,
                         kernels::Execution exec = kernels::Execution::parallel);

// Throws DimensionMismatch.
std::vector<DecisionScore> decision_scores(
    const NoveltyModel& model, const std::vector<DocVector>& test,
    kernels::Execution exec = kernels::Execution::parallel);

// Event ids with score < threshold, in input order.
std::vector<std::string> filter_novel(const std::vector<DecisionScore>& scores,
                                      double threshold = 0.0);

// Linear interpolation between order statistics at position (n - 1) * q.
double quantile_linear(std::vector<double> values, double q);

PointMatrix to_matrix(std::span<const DocVector> vectors);

}  // namespace holmes
