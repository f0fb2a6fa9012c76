#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

// Data-parallel inner loops. Each kernel has a serial reference in
// kernels::serial and an OpenMP variant in kernels::omp that must produce
// identical output; the dispatching overloads pick one by Execution.
namespace holmes {

// Dense row-major matrix of points.
class PointMatrix {
 public:
  PointMatrix() = default;
  PointMatrix(std::size_t rows, std::size_t dim)
      : rows_(rows), dim_(dim), data_(rows * dim) {}
  PointMatrix(std::size_t dim, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

// The k-distance neighborhood of a query: every point whose distance is at
// most the k-th smallest distance, so ties can make it larger than k.
// Members are listed in ascending point index.
struct Neighborhood {
  std::vector<std::uint32_t> ids;
  std::vector<double> distances;
  double k_distance = 0.0;

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

double euclidean(std::span<const double> a, std::span<const double> b);

// Bit flags for the attributes two flagged events can share.
enum SharedAttribute : std::uint8_t {
  kSharedSrcIp = 1,
  kSharedSender = 2,
  kSharedSubject = 4,
};

struct AttributeRow {
  std::string_view src_ip;
  std::string_view sender;
  std::string_view subject;
};

struct AttributeMatch {
  std::uint32_t first;   // first < second
  std::uint32_t second;
  std::uint8_t shared;   // SharedAttribute bits, nonzero

  friend bool operator==(const AttributeMatch&, const AttributeMatch&) = default;
};

namespace kernels {

enum class Execution { serial, parallel };

bool openmp_enabled();
int max_threads();

namespace serial {
// `exclude` removes one member of `points` (the query itself) from the search.
// Throws TooFewPoints when fewer than k candidates remain.
Neighborhood knn(const PointMatrix& points, std::span<const double> query,
                 std::size_t k, std::optional<std::size_t> exclude = std::nullopt);
std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k);
std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k);
// Pairs (i < j) sharing src_ip, sender, or a non-empty subject, in
// lexicographic (i, j) order.
std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows);
}  // namespace serial

namespace omp {
std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k);
std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k);
std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows);
}  // namespace omp

std::vector<Neighborhood> knn_self(const PointMatrix& points, std::size_t k,
                                   Execution exec);
std::vector<Neighborhood> knn_query(const PointMatrix& points,
                                    const PointMatrix& queries, std::size_t k,
                                    Execution exec);
std::vector<AttributeMatch> attribute_matches(std::span<const AttributeRow> rows,
                                              Execution exec);

}  // namespace kernels
}  // namespace holmes
