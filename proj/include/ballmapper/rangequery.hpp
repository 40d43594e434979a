#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "ballmapper/dataset.hpp"

namespace ballmapper {

/// Strictly increasing point indices.
using IndexSet = std::vector<PointIndex>;

struct QueryStats {
  std::size_t nodes_visited = 0;
  std::size_t distances_evaluated = 0;
};

/// { i : d(query, x_i) < eps }, evaluated point by point.
IndexSet linear_scan_range(const PointCloud& cloud, std::span<const double> query, double eps);

inline constexpr std::size_t kDefaultLeafSize = 40;

/// Binary ball tree over a point cloud.
///
/// Each node covers a contiguous span of the permutation `point_order()`. Its
/// center is the per-coordinate midrange of the span's points and its radius
/// is the largest distance (under the cloud's metric) from the center to one
/// of them. Internal nodes split their points around two pivots: p_A, the
/// point farthest from the center, and p_B, the point farthest from p_A.
/// Points strictly closer to p_A form the first child; all others, ties
/// included, form the second. When every point coincides and the split would
/// leave a child empty, the span is halved instead. Nodes with at most
/// `leaf_size` points are leaves.
///
/// The tree keeps no reference to the cloud; queries must pass the same cloud
/// the tree was built from.
class BallTree {
 public:
  struct Node {
    std::uint32_t begin = 0;  // span into point_order()
    std::uint32_t end = 0;
    std::int32_t left = -1;   // child node ids, -1 for leaves
    std::int32_t right = -1;
    double radius = 0.0;

    bool is_leaf() const { return left < 0; }
    std::size_t count() const { return end - begin; }
  };

  static BallTree build(const PointCloud& cloud, std::size_t leaf_size = kDefaultLeafSize);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_size() const { return leaf_size_; }
  std::size_t dim() const { return dim_; }
  MetricKind metric() const { return metric_; }
  const Node& node(std::size_t id) const { return nodes_[id]; }
  std::span<const double> center(std::size_t id) const {
    return {centers_.data() + id * dim_, dim_};
  }
  std::span<const PointIndex> point_order() const { return order_; }
  std::span<const PointIndex> points_of(std::size_t id) const {
    return std::span<const PointIndex>(order_).subspan(nodes_[id].begin, nodes_[id].count());
  }

  /// Exact range query. Subtrees with d(query, center) - radius > eps are
  /// skipped; reached leaves are scanned with the strict test d < eps.
  /// `visited_leaves`, when given, receives the ids of every leaf scanned.
  IndexSet range(const PointCloud& cloud, std::span<const double> query, double eps,
                 QueryStats* stats = nullptr,
                 std::vector<std::size_t>* visited_leaves = nullptr) const;

 private:
  std::vector<Node> nodes_;
  std::vector<double> centers_;
  std::vector<PointIndex> order_;
  std::vector<double> points_;  // coordinates laid out in point_order()
  std::size_t leaf_size_ = kDefaultLeafSize;
  std::size_t dim_ = 0;
  MetricKind metric_ = MetricKind::euclidean;
};

inline BallTree build_ball_tree(const PointCloud& cloud, std::size_t leaf_size = kDefaultLeafSize) {
  return BallTree::build(cloud, leaf_size);
}

inline IndexSet ball_tree_range(const BallTree& tree, const PointCloud& cloud,
                                std::span<const double> query, double eps,
                                QueryStats* stats = nullptr) {
  return tree.range(cloud, query, eps, stats);
}

inline constexpr std::size_t kDefaultBlock = 256;

/// Worker count used when the caller does not choose one.
std::size_t default_thread_count();

struct AlgebraicOptions {
  std::size_t block = kDefaultBlock;
  std::size_t threads = 1;
};

/// Euclidean range query through ||q - x||^2 = ||q||^2 + ||x||^2 - 2<q, x>.
/// Inner products are evaluated for contiguous blocks of `block` points, and
/// blocks are spread over up to `threads` workers. A candidate whose squared
/// distance lands within the boundary window of eps^2 is re-decided with the
/// direct distance, so the result equals linear_scan_range exactly and does
/// not depend on the worker count.
IndexSet algebraic_range(const PointCloud& cloud, const NormCache& norms,
                         std::span<const double> query, double eps,
                         const AlgebraicOptions& options = {});

enum class BackendKind { linear, balltree, algebraic };

std::string_view backend_name(BackendKind kind);
BackendKind parse_backend(std::string_view name);

struct BackendOptions {
  std::size_t leaf_size = kDefaultLeafSize;
  std::size_t block = kDefaultBlock;
  std::size_t threads = 1;
};

/// One of the three range-query strategies bound to a cloud. The cloud must
/// outlive the backend. Queries are const and may run concurrently.
class RangeBackend {
 public:
  virtual ~RangeBackend() = default;

  virtual BackendKind kind() const = 0;
  virtual const PointCloud& cloud() const = 0;

  /// `stats` is filled by the ball tree; the other backends report
  /// distances_evaluated = n and nodes_visited = 0.
  virtual IndexSet query(std::span<const double> q, double eps,
                         QueryStats* stats = nullptr) const = 0;
};

/// Builds the index the backend needs (ball tree, norm cache). Throws
/// UnsupportedMetric for the algebraic backend on a non-euclidean cloud.
std::unique_ptr<RangeBackend> make_backend(BackendKind kind, const PointCloud& cloud,
                                           const BackendOptions& options = {});

/// Runs many queries; result i belongs to queries[i]. Queries are spread over
/// `threads` workers and the output order never depends on scheduling.
std::vector<IndexSet> batch_range(const RangeBackend& backend,
                                  const std::vector<std::vector<double>>& queries, double eps,
                                  std::size_t threads = 1);

}  // namespace ballmapper
