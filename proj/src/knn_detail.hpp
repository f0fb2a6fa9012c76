#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "holmes/error.hpp"
#include "holmes/kernels.hpp"

namespace holmes::detail {

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
  double sum = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

inline void check_knn_args(std::size_t candidates, std::size_t k) {
  if (k < 1) throw Error(ErrorCode::TooFewPoints, "k must be >= 1");
  if (candidates < k) {
    throw Error(ErrorCode::TooFewPoints,
                "need at least " + std::to_string(k) + " points, have " +
                    std::to_string(candidates));
  }
}

// Per-thread buffers reused across queries.
struct KnnScratch {
  std::vector<double> squared;
  std::vector<double> select;
};

// Arguments are assumed valid (see check_knn_args).
inline Neighborhood knn_unchecked(const PointMatrix& points, const double* query,
                                  std::size_t k, std::optional<std::size_t> exclude,
                                  KnnScratch& scratch) {
  const std::size_t n = points.rows();
  const std::size_t dim = points.dim();
  const double* base = points.data().data();
  scratch.squared.resize(n);
  scratch.select.clear();
  for (std::size_t j = 0; j < n; ++j) {
    const double sq = squared_distance(query, base + j * dim, dim);
    scratch.squared[j] = sq;
    if (!exclude || *exclude != j) scratch.select.push_back(sq);
  }
  std::nth_element(scratch.select.begin(), scratch.select.begin() + (k - 1),
                   scratch.select.end());
  const double kth_squared = scratch.select[k - 1];

  Neighborhood nb;
  nb.k_distance = std::sqrt(kth_squared);
  // sqrt can merge nearly equal squares, so compare on the rooted distance
  // for anything within rounding of the threshold.
  const double loose = kth_squared * (1.0 + 1e-12);
  for (std::size_t j = 0; j < n; ++j) {
    if (exclude && *exclude == j) continue;
    const double sq = scratch.squared[j];
    if (sq > loose) continue;
    const double d = std::sqrt(sq);
    if (d <= nb.k_distance) {
      nb.ids.push_back(static_cast<std::uint32_t>(j));
      nb.distances.push_back(d);
    }
  }
  return nb;
}

inline void match_row(std::span<const AttributeRow> rows, std::size_t i,
                      std::vector<AttributeMatch>& out) {
  const AttributeRow& a = rows[i];
  for (std::size_t j = i + 1; j < rows.size(); ++j) {
    const AttributeRow& b = rows[j];
    std::uint8_t shared = 0;
    if (a.src_ip == b.src_ip) shared |= kSharedSrcIp;
    if (a.sender == b.sender) shared |= kSharedSender;
    if (!a.subject.empty() && a.subject == b.subject) shared |= kSharedSubject;
    if (shared != 0) {
      out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                     shared});
    }
  }
}

}  // namespace holmes::detail
