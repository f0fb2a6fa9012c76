#include "holmes/kernels.hpp"

#include "knn_detail.hpp"

namespace holmes {

PointMatrix::PointMatrix(std::size_t dim, std::vector<double> data)
    : rows_(dim == 0 ? 0 : data.size() / dim), dim_(dim), data_(std::move(data)) {
  if (dim == 0 || data_.size() % dim != 0) {
    throw Error(ErrorCode::DimensionMismatch,
                "data size is not a multiple of the dimension");
  }
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::DimensionMismatch, "vectors differ in length");
  }
  return std::sqrt(detail::squared_distance(a.data(), b.data(), a.size()));
}

namespace kernels::serial {

Neighborhood knn(const PointMatrix& points, std::span<const double> query,
                 std::size_t k, std::optional<std::size_t> exclude) {
  if (query.size() != points.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "query has wrong dimension");
  }
  const bool member = exclude && *exclude < points.rows();
  detail::check_knn_args(points.rows() - (member ? 1 : 0), k);
  detail::KnnScratch scratch;
  return detail::knn_unchecked(points, query.data(), k,
                               member ? exclude : std::nullopt, scratch);
}

std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k) {
  detail::check_knn_args(points.rows() == 0 ? 0 : points.rows() - 1, k);
  std::vector<Neighborhood> result(points.rows());
  detail::KnnScratch scratch;
  for (std::size_t i = 0; i < points.rows(); ++i) {
    result[i] = detail::knn_unchecked(points, points.row(i).data(), k, i, scratch);
  }
  return result;
}

std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k) {
  if (queries.rows() > 0 && queries.dim() != points.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "queries have wrong dimension");
  }
  std::vector<Neighborhood> result(queries.rows());
  if (queries.rows() == 0) return result;
  detail::check_knn_args(points.rows(), k);
  detail::KnnScratch scratch;
  for (std::size_t i = 0; i < queries.rows(); ++i) {
    result[i] = detail::knn_unchecked(points, queries.row(i).data(), k,
                                      std::nullopt, scratch);
  }
  return result;
}

std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows) {
  std::vector<AttributeMatch> out;
  for (std::size_t i = 0; i < rows.size(); ++i) detail::match_row(rows, i, out);
  return out;
}

}  // namespace kernels::serial

namespace kernels {

std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k,
                                   Execution exec) {
  return exec == Execution::parallel ? omp::knn_self(points, k)
                                     : serial::knn_self(points, k);
}

std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k,
                                    Execution exec) {
  return exec == Execution::parallel ? omp::knn_query(points, queries, k)
                                     : serial::knn_query(points, queries, k);
}

std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows,
                                              Execution exec) {
  return exec == Execution::parallel ? omp::attribute_matches(rows)
                                     : serial::attribute_matches(rows);
}

}  // namespace kernels
}  // namespace holmes
