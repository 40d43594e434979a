#include "ballmapper/nerve.hpp"

#include <algorithm>
#include <string>

#include "ballmapper/error.hpp"

namespace ballmapper {

MapperGraph build_mapper_graph(const Cover& cover) {
  MapperGraph graph;
  graph.vertices.reserve(cover.landmarks.size());
  for (std::size_t j = 0; j < cover.landmarks.size(); ++j) {
    graph.vertices.push_back(
        {static_cast<std::uint32_t>(j), cover.landmarks[j], cover.members[j].size()});
  }
  for (const auto& balls : cover.point_to_balls) {
    for (std::size_t a = 0; a < balls.size(); ++a) {
      for (std::size_t b = a + 1; b < balls.size(); ++b) {
        graph.edges.emplace_back(std::min(balls[a], balls[b]), std::max(balls[a], balls[b]));
      }
    }
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
  return graph;
}

std::size_t SimplicialComplex::size() const {
  std::size_t total = 0;
  for (const auto& level : simplices) total += level.size();
  return total;
}

namespace {

// Number of subsets of sizes 1..k+1 of a t-element set, saturating at cap.
std::size_t subset_count(std::size_t t, std::size_t k_max, std::size_t cap) {
  std::size_t total = 0;
  std::size_t binom = 1;  // C(t, 0)
  for (std::size_t s = 1; s <= std::min(t, k_max + 1); ++s) {
    // C(t, s) = C(t, s-1) * (t-s+1) / s, checked against cap.
    const long double next = static_cast<long double>(binom) * (t - s + 1) / s;
    if (next > static_cast<long double>(cap)) return cap + 1;
    binom = static_cast<std::size_t>(next + 0.5L);
    total += binom;
    if (total > cap) return cap + 1;
  }
  return total;
}

void emit_subsets(const std::vector<std::uint32_t>& set, std::size_t max_size,
                  std::vector<std::vector<Simplex>>& out) {
  Simplex current;
  auto recurse = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t i = from; i < set.size(); ++i) {
      current.push_back(set[i]);
      out[current.size() - 1].push_back(current);
      if (current.size() < max_size) self(self, i + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
}

}  // namespace

SimplicialComplex build_k_skeleton(const Cover& cover, std::size_t k_max, std::size_t budget) {
  std::size_t planned = 0;
  for (const auto& balls : cover.point_to_balls) {
    planned += subset_count(balls.size(), k_max, budget);
    if (planned > budget) {
      throw ResourceLimit("skeleton of dimension " + std::to_string(k_max) +
                          " would enumerate more than " + std::to_string(budget) +
                          " simplices; use a smaller skeleton dimension");
    }
  }

  SimplicialComplex complex;
  complex.simplices.resize(k_max + 1);
  for (std::size_t j = 0; j < cover.landmarks.size(); ++j) {
    complex.simplices[0].push_back({static_cast<std::uint32_t>(j)});
  }
  for (const auto& balls : cover.point_to_balls) {
    if (balls.size() < 2 || k_max == 0) continue;
    std::vector<std::uint32_t> sorted = balls;
    std::sort(sorted.begin(), sorted.end());
    emit_subsets(sorted, k_max + 1, complex.simplices);
  }
  for (auto& level : complex.simplices) {
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
  }
  return complex;
}

}  // namespace ballmapper
