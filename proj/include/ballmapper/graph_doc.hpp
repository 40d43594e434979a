#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ballmapper/coloring.hpp"
#include "ballmapper/nerve.hpp"

namespace ballmapper {

struct GraphMeta {
  double epsilon = 0.0;
  std::string metric = "euclidean";
  std::string net = "greedy";
  std::string backend = "linear";
  std::size_t n = 0;
  std::size_t dim = 0;
  std::optional<std::uint64_t> seed;   // generated clouds
  std::optional<std::string> input;    // clouds read from a file
  std::optional<std::string> aggregator;
};

struct GraphNode {
  std::uint32_t id = 0;
  PointIndex landmark_index = 0;
  std::size_t ball_size = 0;
  std::optional<double> color;
  std::optional<std::string> label;
};

/// Interchange form of a Ball Mapper graph.
struct GraphDocument {
  GraphMeta meta;
  std::vector<GraphNode> nodes;
  std::vector<Edge> edges;
  /// Present when a skeleton above dimension 1 was requested.
  std::optional<std::vector<std::vector<Simplex>>> simplices;
};

GraphDocument make_graph_document(GraphMeta meta, const MapperGraph& graph,
                                  const ColorMap* colors = nullptr,
                                  const SimplicialComplex* complex = nullptr);

/// Canonical JSON: keys in byte order, reals printed with 17 significant
/// digits, trailing newline. Parsing and re-serializing gives the same bytes.
std::string to_json(const GraphDocument& doc);

/// Throws ParseError on malformed documents.
GraphDocument graph_document_from_json(std::string_view text);

/// `graph { ... }` with ball_size and color node attributes. Drops meta.
std::string to_dot(const GraphDocument& doc);

}  // namespace ballmapper
