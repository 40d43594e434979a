#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ballmapper/cover.hpp"
#include "ballmapper/dataset.hpp"
#include "ballmapper/nerve.hpp"

namespace ballmapper {

struct Aggregator {
  enum class Kind { mean, median, trimmed_mean, min, max, mode, variance, range };

  Kind kind = Kind::mean;
  double trim_fraction = 0.0;  // trimmed_mean only

  static Aggregator trimmed(double fraction) { return {Kind::trimmed_mean, fraction}; }

  /// Parses "mean", "median", "trimmed:F", "min", "max", "mode", "variance",
  /// "range". Throws InvalidInput on anything else or on F outside [0, 0.5).
  static Aggregator parse(std::string_view text);
  std::string name() const;

  /// True when the color always lies between the smallest and largest value
  /// in the ball, which is what the smoothness bounds assume.
  bool respects_range() const;
};

/// One color per landmark: numeric, or a label when the mode of a categorical
/// series was taken.
struct ColorMap {
  Aggregator aggregator;
  bool categorical = false;
  std::vector<double> values;
  std::vector<std::string> labels;

  std::size_t size() const { return categorical ? labels.size() : values.size(); }
};

/// colors[j] = aggregator over { values[i] : i in members[j] }.
///
/// median of an even count averages the two central order statistics;
/// trimmed:F drops floor(F*m) values from each end before averaging; mode
/// breaks ties toward the smallest value (or lexicographically least label);
/// variance is the population variance.
ColorMap aggregate_colors(const Cover& cover, const ValueSeries& values,
                          const Aggregator& aggregator);

struct LipschitzEstimate {
  double k = 0.0;
  /// Set when two coincident points carry different values; k is then +inf.
  bool infinite = false;
};

/// max over pairs with d(x, y) > 0 of |f(x) - f(y)| / d(x, y).
LipschitzEstimate estimate_lipschitz_constant(const PointCloud& cloud, const ValueSeries& values);

inline constexpr double kBoundTolerance = 1e-9;

struct BoundReport {
  double k_used = 0.0;
  double eps = 0.0;
  double max_within_ball_deviation = 0.0;
  double max_adjacent_difference = 0.0;
  bool within_ball_bound_holds = false;  // deviation <= k*eps (+ tolerance)
  bool adjacent_bound_holds = false;     // difference <= 2*k*eps (+ tolerance)
  /// False for aggregators that may leave the value range (variance, range,
  /// mode); the two flags above are then not meaningful.
  bool applicable = false;
};

BoundReport check_color_bounds(const MapperGraph& graph, const Cover& cover,
                               const ValueSeries& values, const ColorMap& colors, double k);

}  // namespace ballmapper
