#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ballmapper/metric.hpp"

namespace ballmapper {

using PointIndex = std::uint32_t;

/// n points in D coordinates stored row-major, plus the metric that defines
/// distances between them. Immutable once constructed.
class PointCloud {
 public:
  /// Throws InvalidInput unless n >= 1, dim >= 1, coords.size() == n * dim and
  /// every coordinate is finite.
  PointCloud(std::size_t n, std::size_t dim, std::vector<double> coords,
             MetricKind metric = MetricKind::euclidean);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  MetricKind metric() const { return metric_; }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  const double* data() const { return coords_.data(); }
  std::span<const double> coords() const { return coords_; }

  /// Same coordinates under a different metric.
  PointCloud with_metric(MetricKind metric) const;

  double distance(std::size_t i, std::size_t j) const {
    return detail::distance_unchecked(metric_, point(i).data(), point(j).data(), dim_);
  }
  double distance_to(std::span<const double> q, std::size_t i) const {
    return detail::distance_unchecked(metric_, q.data(), point(i).data(), dim_);
  }

 private:
  std::size_t n_;
  std::size_t dim_;
  std::vector<double> coords_;
  MetricKind metric_;
};

/// Per-point values: numeric (for averaging colorings) or categorical labels
/// (for the mode aggregator).
class ValueSeries {
 public:
  static ValueSeries numeric(std::vector<double> values);
  static ValueSeries categorical(std::vector<std::string> labels);

  bool is_categorical() const { return categorical_; }
  std::size_t size() const { return categorical_ ? labels_.size() : values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  ValueSeries() = default;
  std::vector<double> values_;
  std::vector<std::string> labels_;
  bool categorical_ = false;
};

struct NormCache {
  std::vector<double> sq_norms;
};

NormCache precompute_squared_norms(const PointCloud& cloud);

struct CsvOptions {
  bool has_header = false;
  std::optional<std::string> value_column;
  MetricKind metric = MetricKind::euclidean;
};

struct LoadedPoints {
  PointCloud cloud;
  std::optional<ValueSeries> values;
};

/// Reads one point per row. A value column, when named, is split off into a
/// ValueSeries (numeric if every cell parses as a finite number, categorical
/// otherwise). Throws ParseError naming the offending row/column.
LoadedPoints load_points_csv(const std::filesystem::path& path, const CsvOptions& options = {});
LoadedPoints parse_points_csv(std::string_view text, const CsvOptions& options = {});

/// Single-column values file aligned to point rows.
ValueSeries load_values_csv(const std::filesystem::path& path, bool has_header = false);
ValueSeries parse_values_csv(std::string_view text, bool has_header = false);

/// Writes coordinates with 17 significant digits so that reloading is exact.
std::string format_points_csv(const PointCloud& cloud);
void write_points_csv(const std::filesystem::path& path, const PointCloud& cloud);

/// Identifier of the generator behind generate_uniform_cloud, recorded in
/// benchmark metadata.
inline constexpr std::string_view kUniformGeneratorName = "mt19937_64-top53/v1";

/// i.i.d. uniform coordinates on [0, 1). Each draw takes the top 53 bits of
/// one std::mt19937_64 output, so results are bit-identical on every
/// conforming standard library.
PointCloud generate_uniform_cloud(std::size_t n, std::size_t dim, std::uint64_t seed,
                                  MetricKind metric = MetricKind::euclidean);

}  // namespace ballmapper
