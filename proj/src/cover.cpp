#include "ballmapper/cover.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "ballmapper/error.hpp"

namespace ballmapper {

namespace {

void check_eps(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidInput("epsilon must be a positive finite number");
  }
}

void fill_transpose(Cover& cover, std::size_t n) {
  cover.point_to_balls.assign(n, {});
  for (std::size_t j = 0; j < cover.members.size(); ++j) {
    for (PointIndex i : cover.members[j]) {
      cover.point_to_balls[i].push_back(static_cast<std::uint32_t>(j));
    }
  }
}

}  // namespace

std::vector<PointIndex> candidate_order(std::size_t n, const GreedyOrder& order) {
  std::vector<PointIndex> perm(n);
  std::iota(perm.begin(), perm.end(), PointIndex{0});
  if (order.kind == GreedyOrder::Kind::shuffled && n > 1) {
    std::mt19937_64 rng(order.seed);
    for (std::size_t i = n - 1; i > 0; --i) {
      // Unbiased draw from [0, i] by rejection.
      const std::uint64_t bound = i + 1;
      const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
      std::uint64_t r;
      do {
        r = rng();
      } while (r >= limit);
      std::swap(perm[i], perm[r % bound]);
    }
  }
  return perm;
}

Cover greedy_eps_net(const RangeBackend& backend, double eps, const GreedyOrder& order) {
  const auto perm = candidate_order(backend.cloud().size(), order);
  return greedy_eps_net(backend, eps, perm);
}

Cover greedy_eps_net(const RangeBackend& backend, double eps, std::span<const PointIndex> order) {
  check_eps(eps);
  const PointCloud& cloud = backend.cloud();
  const std::size_t n = cloud.size();
  if (order.size() != n) throw InvalidInput("candidate order must list every point once");
  std::vector<char> seen(n, 0);
  for (PointIndex i : order) {
    if (i >= n || seen[i]) throw InvalidInput("candidate order is not a permutation");
    seen[i] = 1;
  }

  Cover cover;
  cover.epsilon = eps;
  std::vector<char> covered(n, 0);
  std::size_t remaining = n;
  for (PointIndex candidate : order) {
    if (remaining == 0) break;
    if (covered[candidate]) continue;
    IndexSet ball = backend.query(cloud.point(candidate), eps);
    for (PointIndex i : ball) {
      if (!covered[i]) {
        covered[i] = 1;
        --remaining;
      }
    }
    cover.landmarks.push_back(candidate);
    cover.members.push_back(std::move(ball));
  }
  fill_transpose(cover, n);
  return cover;
}

Cover fps_eps_net(const RangeBackend& backend, double eps, PointIndex start) {
  check_eps(eps);
  const PointCloud& cloud = backend.cloud();
  const std::size_t n = cloud.size();
  if (start >= n) {
    throw InvalidInput("start index " + std::to_string(start) + " out of range for " +
                       std::to_string(n) + " points");
  }

  std::vector<PointIndex> landmarks{start};
  std::vector<double> nearest(n);
  for (std::size_t i = 0; i < n; ++i) nearest[i] = cloud.distance(start, i);
  while (true) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (nearest[i] > nearest[best]) best = i;
    }
    if (!(nearest[best] >= eps)) break;
    landmarks.push_back(static_cast<PointIndex>(best));
    for (std::size_t i = 0; i < n; ++i) {
      const double d = cloud.distance(best, i);
      if (d < nearest[i]) nearest[i] = d;
    }
  }
  return cover_from_landmarks(backend, eps, std::move(landmarks));
}

Cover cover_from_landmarks(const RangeBackend& backend, double eps,
                           std::vector<PointIndex> landmarks) {
  check_eps(eps);
  const PointCloud& cloud = backend.cloud();
  Cover cover;
  cover.epsilon = eps;
  cover.landmarks = std::move(landmarks);
  cover.members.reserve(cover.landmarks.size());
  for (PointIndex l : cover.landmarks) {
    if (l >= cloud.size()) throw InvalidInput("landmark index out of range");
    cover.members.push_back(backend.query(cloud.point(l), eps));
  }
  fill_transpose(cover, cloud.size());
  return cover;
}

NetValidation validate_eps_net(const PointCloud& cloud, const Cover& cover) {
  NetValidation report;
  const double eps = cover.epsilon;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bool ok = false;
    if (i < cover.point_to_balls.size()) {
      for (std::uint32_t j : cover.point_to_balls[i]) {
        if (j < cover.landmarks.size() && cover.landmarks[j] < cloud.size() &&
            cloud.distance(cover.landmarks[j], i) < eps) {
          ok = true;
          break;
        }
      }
    }
    if (!ok) report.coverage_violations.push_back(static_cast<PointIndex>(i));
  }
  const auto& lm = cover.landmarks;
  for (std::size_t a = 0; a < lm.size(); ++a) {
    for (std::size_t b = a + 1; b < lm.size(); ++b) {
      if (lm[a] >= cloud.size() || lm[b] >= cloud.size()) continue;
      const double d = cloud.distance(lm[a], lm[b]);
      if (d < eps) report.separation_violations.push_back({lm[a], lm[b], d});
    }
  }
  return report;
}

}  // namespace ballmapper
