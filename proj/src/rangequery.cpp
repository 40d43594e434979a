#include "ballmapper/rangequery.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>

#include <Eigen/Core>
#include <tbb/blocked_range.h>
#include <tbb/parallel_for.h>
#include <tbb/info.h>
#include <tbb/task_arena.h>

#include "ballmapper/error.hpp"

namespace ballmapper {

namespace {

void check_query(const PointCloud& cloud, std::span<const double> query, double eps) {
  if (query.size() != cloud.dim()) {
    throw InvalidInput("query has dimension " + std::to_string(query.size()) +
                       ", cloud has " + std::to_string(cloud.dim()));
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("eps must be a positive finite number");
  }
}

// Slack added to the pruning test so that rounding in the three distances it
// combines can never discard a subtree holding an in-range point.
double prune_slack(std::size_t dim, double a, double b, double c) {
  return 4.0 * static_cast<double>(dim + 2) * DBL_EPSILON * (a + b + c);
}

}  // namespace

IndexSet linear_scan_range(const PointCloud& cloud, std::span<const double> query, double eps) {
  check_query(cloud, query, eps);
  IndexSet out;
  const std::size_t n = cloud.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.distance_to(query, i) < eps) out.push_back(static_cast<PointIndex>(i));
  }
  return out;
}

BallTree BallTree::build(const PointCloud& cloud, std::size_t leaf_size) {
  if (leaf_size == 0) throw InvalidInput("leaf_size must be >= 1");
  BallTree tree;
  tree.leaf_size_ = leaf_size;
  tree.dim_ = cloud.dim();
  tree.metric_ = cloud.metric();
  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();

  tree.order_.resize(n);
  std::iota(tree.order_.begin(), tree.order_.end(), PointIndex{0});
  tree.nodes_.reserve(2 * (n / leaf_size + 1));
  tree.nodes_.push_back({0, static_cast<std::uint32_t>(n), -1, -1, 0.0});

  std::vector<double> lo(dim), hi(dim);
  std::vector<std::size_t> pending{0};
  while (!pending.empty()) {
    const std::size_t id = pending.back();
    pending.pop_back();
    const std::uint32_t begin = tree.nodes_[id].begin;
    const std::uint32_t end = tree.nodes_[id].end;
    auto* first = tree.order_.data() + begin;
    auto* last = tree.order_.data() + end;

    std::fill(lo.begin(), lo.end(), INFINITY);
    std::fill(hi.begin(), hi.end(), -INFINITY);
    for (auto* it = first; it != last; ++it) {
      const auto p = cloud.point(*it);
      for (std::size_t j = 0; j < dim; ++j) {
        lo[j] = std::min(lo[j], p[j]);
        hi[j] = std::max(hi[j], p[j]);
      }
    }
    // Nodes are processed depth-first but centers are stored by node id.
    const std::size_t base = id * dim;
    if (tree.centers_.size() < tree.nodes_.size() * dim) {
      tree.centers_.resize(tree.nodes_.size() * dim);
    }
    for (std::size_t j = 0; j < dim; ++j) tree.centers_[base + j] = (hi[j] + lo[j]) / 2.0;
    const auto center = std::span<const double>(tree.centers_).subspan(base, dim);

    double radius = 0.0;
    PointIndex far_a = *first;
    for (auto* it = first; it != last; ++it) {
      const double d = cloud.distance_to(center, *it);
      if (d > radius) {
        radius = d;
        far_a = *it;
      }
    }
    tree.nodes_[id].radius = radius;
    if (end - begin <= leaf_size) continue;

    PointIndex far_b = far_a;
    double best = -1.0;
    for (auto* it = first; it != last; ++it) {
      const double d = cloud.distance(far_a, *it);
      if (d > best) {
        best = d;
        far_b = *it;
      }
    }
    auto* mid = std::stable_partition(first, last, [&](PointIndex i) {
      return cloud.distance(i, far_a) < cloud.distance(i, far_b);
    });
    if (mid == first || mid == last) mid = first + (end - begin) / 2;
    const auto split = static_cast<std::uint32_t>(mid - tree.order_.data());

    const auto left = static_cast<std::int32_t>(tree.nodes_.size());
    tree.nodes_.push_back({begin, split, -1, -1, 0.0});
    tree.nodes_.push_back({split, end, -1, -1, 0.0});
    tree.nodes_[id].left = left;
    tree.nodes_[id].right = left + 1;
    pending.push_back(static_cast<std::size_t>(left) + 1);
    pending.push_back(static_cast<std::size_t>(left));
  }
  // Copy coordinates in tree order so each leaf scan reads contiguous memory.
  tree.points_.resize(n * dim);
  for (std::size_t k = 0; k < n; ++k) {
    const auto p = cloud.point(tree.order_[k]);
    std::copy(p.begin(), p.end(), tree.points_.begin() + static_cast<std::ptrdiff_t>(k * dim));
  }
  return tree;
}

IndexSet BallTree::range(const PointCloud& cloud, std::span<const double> query, double eps,
                         QueryStats* stats, std::vector<std::size_t>* visited_leaves) const {
  check_query(cloud, query, eps);
  if (cloud.dim() != dim_ || cloud.size() != order_.size()) {
    throw InvalidInput("ball tree was built over a different cloud");
  }
  QueryStats local;
  IndexSet out;
  // Splits at least halve a node (falling back to the midpoint), so depth
  // stays below 33 and a depth-first stack never holds more than 64 ids.
  std::array<std::size_t, 64> stack;
  std::size_t top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const std::size_t id = stack[--top];
    const Node& node = nodes_[id];
    ++local.nodes_visited;
    ++local.distances_evaluated;
    const double to_center =
        detail::distance_unchecked(metric_, query.data(), centers_.data() + id * dim_, dim_);
    if (to_center - node.radius > eps + prune_slack(dim_, to_center, node.radius, eps)) continue;
    if (node.is_leaf()) {
      if (visited_leaves) visited_leaves->push_back(id);
      for (std::uint32_t k = node.begin; k < node.end; ++k) {
        const double d =
            detail::distance_unchecked(metric_, query.data(), points_.data() + k * dim_, dim_);
        if (d < eps) out.push_back(order_[k]);
      }
      local.distances_evaluated += node.count();
    } else {
      stack[top++] = static_cast<std::size_t>(node.right);
      stack[top++] = static_cast<std::size_t>(node.left);
    }
  }
  std::sort(out.begin(), out.end());
  if (stats) *stats = local;
  return out;
}

namespace {

// Worker count actually granted to an arena: requests beyond the machine's
// concurrency would only be ignored by the scheduler (with a warning).
std::size_t effective_threads(std::size_t requested) {
  const auto available = static_cast<std::size_t>(std::max(1, tbb::info::default_concurrency()));
  return std::min(requested, available);
}

}  // namespace

std::size_t default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

IndexSet algebraic_impl(const PointCloud& cloud, const NormCache& norms,
                        std::span<const double> query, double eps,
                        const AlgebraicOptions& options, tbb::task_arena* arena) {
  check_query(cloud, query, eps);
  if (cloud.metric() != MetricKind::euclidean) {
    throw UnsupportedMetric("algebraic backend supports only the euclidean metric, got " +
                            std::string(metric_name(cloud.metric())));
  }
  if (norms.sq_norms.size() != cloud.size()) {
    throw InvalidInput("norm cache does not match the cloud");
  }
  if (options.block == 0 || options.threads == 0) {
    throw InvalidInput("block and threads must be >= 1");
  }

  const std::size_t n = cloud.size();
  const std::size_t dim = cloud.dim();
  const std::size_t block = options.block;
  const std::size_t blocks = (n + block - 1) / block;
  const double eps2 = eps * eps;
  const double base_window = 1e-9 * std::max(1.0, eps2);
  const double rounding = 4.0 * static_cast<double>(dim + 2) * DBL_EPSILON;

  double qq = 0.0;
  for (double v : query) qq += v * v;
  const Eigen::Map<const Eigen::VectorXd> q(query.data(), static_cast<Eigen::Index>(dim));

  std::vector<IndexSet> hits(blocks);
  auto run_block = [&](std::size_t b, std::vector<double>& dots) {
    const std::size_t start = b * block;
    const std::size_t rows = std::min(block, n - start);
    const Eigen::Map<const RowMatrix> x(cloud.data() + start * dim,
                                        static_cast<Eigen::Index>(rows),
                                        static_cast<Eigen::Index>(dim));
    dots.resize(rows);
    Eigen::Map<Eigen::VectorXd> out(dots.data(), static_cast<Eigen::Index>(rows));
    out.noalias() = x * q;
    IndexSet& mine = hits[b];
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t i = start + r;
      const double xx = norms.sq_norms[i];
      const double d2 = qq + xx - 2.0 * dots[r];
      const double window = std::max(base_window, rounding * (qq + xx));
      bool inside;
      if (std::abs(d2 - eps2) <= window) {
        inside = detail::euclidean(query.data(), cloud.point(i).data(), dim) < eps;
      } else {
        inside = d2 < eps2;
      }
      if (inside) mine.push_back(static_cast<PointIndex>(i));
    }
  };

  if (arena == nullptr || blocks == 1) {
    std::vector<double> dots;
    for (std::size_t b = 0; b < blocks; ++b) run_block(b, dots);
  } else {
    arena->execute([&] {
      tbb::parallel_for(tbb::blocked_range<std::size_t>(0, blocks),
                        [&](const tbb::blocked_range<std::size_t>& r) {
                          std::vector<double> dots;
                          for (std::size_t b = r.begin(); b != r.end(); ++b) run_block(b, dots);
                        });
    });
  }

  IndexSet out;
  for (const auto& h : hits) out.insert(out.end(), h.begin(), h.end());
  return out;
}

}  // namespace

IndexSet algebraic_range(const PointCloud& cloud, const NormCache& norms,
                         std::span<const double> query, double eps,
                         const AlgebraicOptions& options) {
  if (options.threads == 0) throw InvalidInput("threads must be >= 1");
  if (const auto workers = effective_threads(options.threads); workers > 1) {
    tbb::task_arena arena(static_cast<int>(workers));
    return algebraic_impl(cloud, norms, query, eps, options, &arena);
  }
  return algebraic_impl(cloud, norms, query, eps, options, nullptr);
}

std::string_view backend_name(BackendKind kind) {
  switch (kind) {
    case BackendKind::linear:
      return "linear";
    case BackendKind::balltree:
      return "balltree";
    case BackendKind::algebraic:
      return "algebraic";
  }
  return "unknown";
}

BackendKind parse_backend(std::string_view name) {
  if (name == "linear") return BackendKind::linear;
  if (name == "balltree") return BackendKind::balltree;
  if (name == "algebraic") return BackendKind::algebraic;
  throw InvalidInput("unknown backend '" + std::string(name) + "'");
}

namespace {

class LinearBackend final : public RangeBackend {
 public:
  explicit LinearBackend(const PointCloud& cloud) : cloud_(cloud) {}
  BackendKind kind() const override { return BackendKind::linear; }
  const PointCloud& cloud() const override { return cloud_; }
  IndexSet query(std::span<const double> q, double eps, QueryStats* stats) const override {
    auto out = linear_scan_range(cloud_, q, eps);
    if (stats) *stats = {0, cloud_.size()};
    return out;
  }

 private:
  const PointCloud& cloud_;
};

class BallTreeBackend final : public RangeBackend {
 public:
  BallTreeBackend(const PointCloud& cloud, std::size_t leaf_size)
      : cloud_(cloud), tree_(BallTree::build(cloud, leaf_size)) {}
  BackendKind kind() const override { return BackendKind::balltree; }
  const PointCloud& cloud() const override { return cloud_; }
  IndexSet query(std::span<const double> q, double eps, QueryStats* stats) const override {
    return tree_.range(cloud_, q, eps, stats);
  }

 private:
  const PointCloud& cloud_;
  BallTree tree_;
};

class AlgebraicBackend final : public RangeBackend {
 public:
  AlgebraicBackend(const PointCloud& cloud, std::size_t block, std::size_t threads)
      : cloud_(cloud), options_{block, threads} {
    if (cloud.metric() != MetricKind::euclidean) {
      throw UnsupportedMetric("algebraic backend supports only the euclidean metric, got " +
                              std::string(metric_name(cloud.metric())));
    }
    if (block == 0 || threads == 0) throw InvalidInput("block and threads must be >= 1");
    norms_ = precompute_squared_norms(cloud);
    if (const auto workers = effective_threads(threads); workers > 1) {
      arena_ = std::make_unique<tbb::task_arena>(static_cast<int>(workers));
    }
  }
  BackendKind kind() const override { return BackendKind::algebraic; }
  const PointCloud& cloud() const override { return cloud_; }
  IndexSet query(std::span<const double> q, double eps, QueryStats* stats) const override {
    auto out = algebraic_impl(cloud_, norms_, q, eps, options_, arena_.get());
    if (stats) *stats = {0, cloud_.size()};
    return out;
  }

 private:
  const PointCloud& cloud_;
  AlgebraicOptions options_;
  NormCache norms_;
  std::unique_ptr<tbb::task_arena> arena_;
};

}  // namespace

std::unique_ptr<RangeBackend> make_backend(BackendKind kind, const PointCloud& cloud,
                                           const BackendOptions& options) {
  switch (kind) {
    case BackendKind::linear:
      return std::make_unique<LinearBackend>(cloud);
    case BackendKind::balltree:
      return std::make_unique<BallTreeBackend>(cloud, options.leaf_size);
    case BackendKind::algebraic:
      return std::make_unique<AlgebraicBackend>(cloud, options.block, options.threads);
  }
  throw InvalidInput("unknown backend");
}

std::vector<IndexSet> batch_range(const RangeBackend& backend,
                                  const std::vector<std::vector<double>>& queries, double eps,
                                  std::size_t threads) {
  if (threads == 0) throw InvalidInput("threads must be >= 1");
  const PointCloud& cloud = backend.cloud();
  for (const auto& q : queries) check_query(cloud, q, eps);

  std::vector<IndexSet> results(queries.size());
  if (effective_threads(threads) == 1 || queries.size() < 2) {
    for (std::size_t i = 0; i < queries.size(); ++i) results[i] = backend.query(queries[i], eps);
    return results;
  }
  tbb::task_arena arena(static_cast<int>(effective_threads(threads)));
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, queries.size(),
                      [&](std::size_t i) { results[i] = backend.query(queries[i], eps); });
  });
  return results;
}

}  // namespace ballmapper
