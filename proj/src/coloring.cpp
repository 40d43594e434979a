#include "ballmapper/coloring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "ballmapper/error.hpp"

namespace ballmapper {

Aggregator Aggregator::parse(std::string_view text) {
  using K = Kind;
  if (text == "mean") return {K::mean};
  if (text == "median") return {K::median};
  if (text == "min") return {K::min};
  if (text == "max") return {K::max};
  if (text == "mode") return {K::mode};
  if (text == "variance") return {K::variance};
  if (text == "range") return {K::range};
  constexpr std::string_view prefix = "trimmed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto num = text.substr(prefix.size());
    double f = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), f);
    if (ec != std::errc() || ptr != num.data() + num.size()) {
      throw InvalidInput("bad trimmed fraction '" + std::string(num) + "'");
    }
    if (!(f >= 0.0 && f < 0.5)) throw InvalidInput("trimmed fraction must lie in [0, 0.5)");
    return trimmed(f);
  }
  throw InvalidInput("unknown aggregator '" + std::string(text) + "'");
}

std::string Aggregator::name() const {
  switch (kind) {
    case Kind::mean:
      return "mean";
    case Kind::median:
      return "median";
    case Kind::trimmed_mean: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "trimmed:%.17g", trim_fraction);
      return buf;
    }
    case Kind::min:
      return "min";
    case Kind::max:
      return "max";
    case Kind::mode:
      return "mode";
    case Kind::variance:
      return "variance";
    case Kind::range:
      return "range";
  }
  return "unknown";
}

bool Aggregator::respects_range() const {
  switch (kind) {
    case Kind::mean:
    case Kind::median:
    case Kind::trimmed_mean:
    case Kind::min:
    case Kind::max:
      return true;
    default:
      return false;
  }
}

namespace {

double mean_of(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += v[i];
  const double m = s / static_cast<double>(to - from);
  // Keep the rounded mean inside [min, max] of the averaged values.
  const auto [lo, hi] = std::minmax_element(v.begin() + from, v.begin() + to);
  return std::clamp(m, *lo, *hi);
}

double aggregate_numeric(std::vector<double> v, const Aggregator& agg) {
  using K = Aggregator::Kind;
  const std::size_t m = v.size();
  switch (agg.kind) {
    case K::mean:
      return mean_of(v, 0, m);
    case K::median: {
      std::sort(v.begin(), v.end());
      if (m % 2 == 1) return v[m / 2];
      return v[m / 2 - 1] + (v[m / 2] - v[m / 2 - 1]) / 2.0;
    }
    case K::trimmed_mean: {
      std::sort(v.begin(), v.end());
      const auto cut = static_cast<std::size_t>(std::floor(agg.trim_fraction * m));
      return mean_of(v, cut, m - cut);
    }
    case K::min:
      return *std::min_element(v.begin(), v.end());
    case K::max:
      return *std::max_element(v.begin(), v.end());
    case K::mode: {
      std::sort(v.begin(), v.end());
      double best = v[0];
      std::size_t best_count = 0;
      for (std::size_t i = 0; i < m;) {
        std::size_t j = i;
        while (j < m && v[j] == v[i]) ++j;
        if (j - i > best_count) {
          best_count = j - i;
          best = v[i];
        }
        i = j;
      }
      return best;
    }
    case K::variance: {
      double mu = 0.0;
      for (double x : v) mu += x;
      mu /= static_cast<double>(m);
      double s = 0.0;
      for (double x : v) s += (x - mu) * (x - mu);
      return s / static_cast<double>(m);
    }
    case K::range: {
      const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
      return *hi - *lo;
    }
  }
  return 0.0;
}

}  // namespace

ColorMap aggregate_colors(const Cover& cover, const ValueSeries& values,
                          const Aggregator& aggregator) {
  if (values.size() != cover.point_count()) {
    throw InvalidInput("value series has " + std::to_string(values.size()) +
                       " entries but the cover spans " + std::to_string(cover.point_count()) +
                       " points");
  }
  if (aggregator.kind == Aggregator::Kind::trimmed_mean &&
      !(aggregator.trim_fraction >= 0.0 && aggregator.trim_fraction < 0.5)) {
    throw InvalidInput("trimmed fraction must lie in [0, 0.5)");
  }

  ColorMap colors;
  colors.aggregator = aggregator;
  if (values.is_categorical()) {
    if (aggregator.kind != Aggregator::Kind::mode) {
      throw InvalidInput("categorical values support only the mode aggregator");
    }
    colors.categorical = true;
    for (const auto& ball : cover.members) {
      std::map<std::string, std::size_t> counts;
      for (PointIndex i : ball) ++counts[values.labels()[i]];
      // std::map iterates in lexicographic order, so the first maximum wins ties.
      const std::string* best = nullptr;
      std::size_t best_count = 0;
      for (const auto& [label, count] : counts) {
        if (count > best_count) {
          best = &label;
          best_count = count;
        }
      }
      colors.labels.push_back(best ? *best : std::string());
    }
    return colors;
  }

  colors.values.reserve(cover.members.size());
  std::vector<double> buf;
  for (const auto& ball : cover.members) {
    if (ball.empty()) throw InvalidInput("cover contains an empty ball");
    buf.clear();
    for (PointIndex i : ball) buf.push_back(values.values()[i]);
    colors.values.push_back(aggregate_numeric(buf, aggregator));
  }
  return colors;
}

LipschitzEstimate estimate_lipschitz_constant(const PointCloud& cloud, const ValueSeries& values) {
  if (cloud.size() < 2) throw InvalidInput("Lipschitz estimate needs at least two points");
  if (values.is_categorical()) throw InvalidInput("Lipschitz estimate needs numeric values");
  if (values.size() != cloud.size()) throw InvalidInput("value series length mismatch");

  const auto& f = values.values();
  LipschitzEstimate est;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      const double df = std::abs(f[i] - f[j]);
      const double d = cloud.distance(i, j);
      if (d > 0.0) {
        est.k = std::max(est.k, df / d);
      } else if (df > 0.0) {
        est.infinite = true;
      }
    }
  }
  if (est.infinite) est.k = std::numeric_limits<double>::infinity();
  return est;
}

BoundReport check_color_bounds(const MapperGraph& graph, const Cover& cover,
                               const ValueSeries& values, const ColorMap& colors, double k) {
  if (colors.categorical || values.is_categorical()) {
    throw InvalidInput("numeric bounds are undefined for categorical colors");
  }
  if (colors.values.size() != cover.members.size()) {
    throw InvalidInput("color map does not match the cover");
  }
  if (values.size() != cover.point_count()) throw InvalidInput("value series length mismatch");
  if (!(k >= 0.0)) throw InvalidInput("Lipschitz constant must be >= 0");

  BoundReport report;
  report.k_used = k;
  report.eps = cover.epsilon;
  report.applicable = colors.aggregator.respects_range();

  const auto& f = values.values();
  for (std::size_t j = 0; j < cover.members.size(); ++j) {
    for (PointIndex i : cover.members[j]) {
      report.max_within_ball_deviation =
          std::max(report.max_within_ball_deviation, std::abs(f[i] - colors.values[j]));
    }
  }
  for (const auto& [a, b] : graph.edges) {
    report.max_adjacent_difference =
        std::max(report.max_adjacent_difference, std::abs(colors.values[a] - colors.values[b]));
  }
  const double bound = k * cover.epsilon;
  report.within_ball_bound_holds = report.max_within_ball_deviation <= bound + kBoundTolerance;
  report.adjacent_bound_holds = report.max_adjacent_difference <= 2.0 * bound + kBoundTolerance;
  return report;
}

}  // namespace ballmapper
