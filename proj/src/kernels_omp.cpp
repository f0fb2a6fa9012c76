#include "holmes/kernels.hpp"

#ifdef HOLMES_HAVE_OPENMP
#include <omp.h>
#endif

#include "knn_detail.hpp"

namespace holmes::kernels {

bool openmp_enabled() {
#ifdef HOLMES_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef HOLMES_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

namespace {

// Queries are independent; each thread keeps its own scratch buffers and
// writes only its own result slots, so output does not depend on scheduling.
std::vector<Neighborhood> knn_rows(const PointMatrix& points,
                                   const PointMatrix& queries, std::size_t k,
                                   bool self) {
  const auto n = static_cast<std::ptrdiff_t>(queries.rows());
  std::vector<Neighborhood> result(queries.rows());
#pragma omp parallel
  {
    detail::KnnScratch scratch;
#pragma omp for schedule(dynamic, 32)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      result[row] = detail::knn_unchecked(
          points, queries.row(row).data(), k,
          self ? std::optional<std::size_t>(row) : std::nullopt, scratch);
    }
  }
  return result;
}

}  // namespace

std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k) {
  detail::check_knn_args(points.rows() == 0 ? 0 : points.rows() - 1, k);
  return knn_rows(points, points, k, true);
}

std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k) {
  if (queries.rows() > 0 && queries.dim() != points.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "queries have wrong dimension");
  }
  if (queries.rows() == 0) return {};
  detail::check_knn_args(points.rows(), k);
  return knn_rows(points, queries, k, false);
}

std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows) {
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
  std::vector<std::vector<AttributeMatch>> per_row(rows.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    detail::match_row(rows, static_cast<std::size_t>(i),
                      per_row[static_cast<std::size_t>(i)]);
  }
  std::vector<AttributeMatch> out;
  for (auto& r : per_row) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace omp
}  // namespace holmes::kernels
