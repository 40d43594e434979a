#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ballmapper/cover.hpp"

namespace ballmapper {

struct MapperVertex {
  std::uint32_t position;     // landmark position in the cover
  PointIndex landmark;        // point index of the landmark
  std::size_t ball_size;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// 1-skeleton of the nerve. Edges are (i, j) with i < j, sorted.
struct MapperGraph {
  std::vector<MapperVertex> vertices;
  std::vector<Edge> edges;
};

/// Two vertices are joined iff some data point lies in both balls. Pairs are
/// generated per point from its covering balls, then deduplicated.
MapperGraph build_mapper_graph(const Cover& cover);

using Simplex = std::vector<std::uint32_t>;

/// simplices[d] holds the d-simplices as sorted position tuples, in
/// lexicographic order. There is one level per dimension up to the requested
/// k, possibly empty.
struct SimplicialComplex {
  std::vector<std::vector<Simplex>> simplices;

  std::size_t max_dimension() const { return simplices.empty() ? 0 : simplices.size() - 1; }
  std::size_t size() const;
};

inline constexpr std::size_t kDefaultSimplexBudget = 10'000'000;

/// k-skeleton of the nerve restricted to data-witnessed intersections: every
/// point covered by t balls contributes all subsets of size <= k_max + 1 of
/// its covering set. Throws ResourceLimit if the number of subsets generated
/// would exceed `budget`.
SimplicialComplex build_k_skeleton(const Cover& cover, std::size_t k_max,
                                   std::size_t budget = kDefaultSimplexBudget);

}  // namespace ballmapper
