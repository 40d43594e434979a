#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ballmapper/dataset.hpp"
#include "ballmapper/rangequery.hpp"

namespace ballmapper {

/// Landmarks of an eps-net together with the data points of each open ball.
struct Cover {
  double epsilon = 0.0;
  std::vector<PointIndex> landmarks;
  /// members[j] = { i : d(x_landmarks[j], x_i) < epsilon }, sorted.
  std::vector<IndexSet> members;
  /// point_to_balls[i] = landmark positions j with i in members[j], ascending.
  std::vector<std::vector<std::uint32_t>> point_to_balls;

  std::size_t point_count() const { return point_to_balls.size(); }
};

/// Candidate order for the greedy construction.
struct GreedyOrder {
  enum class Kind { index, shuffled } kind = Kind::index;
  std::uint64_t seed = 0;

  static GreedyOrder by_index() { return {}; }
  static GreedyOrder shuffled(std::uint64_t seed) { return {Kind::shuffled, seed}; }
};

/// The permutation a GreedyOrder stands for. The shuffle is a Fisher-Yates
/// pass driven by std::mt19937_64, so it is identical on every platform.
std::vector<PointIndex> candidate_order(std::size_t n, const GreedyOrder& order);

/// Greedy eps-net. Walks candidates in order; each still-uncovered candidate
/// becomes a landmark and one range query marks its ball as covered.
Cover greedy_eps_net(const RangeBackend& backend, double eps,
                     const GreedyOrder& order = GreedyOrder::by_index());

/// Greedy eps-net over an explicit candidate order (a permutation of 0..n-1).
Cover greedy_eps_net(const RangeBackend& backend, double eps,
                     std::span<const PointIndex> order);

/// Farthest point sampling eps-net. Starting from `start`, repeatedly adds the
/// point with the largest distance to its nearest landmark, as long as that
/// distance is >= eps. Ties go to the lowest index. Ball members come from
/// `backend` once selection is finished; the landmark sequence depends only
/// on (cloud, eps, start).
Cover fps_eps_net(const RangeBackend& backend, double eps, PointIndex start = 0);

/// Cover for a given landmark list, with members taken from `backend`.
Cover cover_from_landmarks(const RangeBackend& backend, double eps,
                           std::vector<PointIndex> landmarks);

struct SeparationViolation {
  PointIndex first;
  PointIndex second;
  double distance;
};

struct NetValidation {
  std::vector<PointIndex> coverage_violations;
  std::vector<SeparationViolation> separation_violations;

  bool ok() const { return coverage_violations.empty() && separation_violations.empty(); }
};

/// Re-checks both eps-net conditions with fresh distance evaluations: every
/// point must lie strictly within eps of a landmark listed in its
/// point_to_balls entry, and landmark pairs must be at distance >= eps.
NetValidation validate_eps_net(const PointCloud& cloud, const Cover& cover);

}  // namespace ballmapper
