#include "ballmapper/graph_doc.hpp"

#include <cstdio>

#include <json.hpp>

#include "ballmapper/error.hpp"

namespace ballmapper {

using nlohmann::json;

GraphDocument make_graph_document(GraphMeta meta, const MapperGraph& graph,
                                  const ColorMap* colors, const SimplicialComplex* complex) {
  GraphDocument doc;
  doc.meta = std::move(meta);
  if (colors) doc.meta.aggregator = colors->aggregator.name();
  for (const auto& v : graph.vertices) {
    GraphNode node{v.position, v.landmark, v.ball_size, std::nullopt, std::nullopt};
    if (colors) {
      if (colors->categorical) {
        node.label = colors->labels.at(v.position);
      } else {
        node.color = colors->values.at(v.position);
      }
    }
    doc.nodes.push_back(std::move(node));
  }
  doc.edges = graph.edges;
  if (complex && complex->simplices.size() > 2) doc.simplices = complex->simplices;
  return doc;
}

namespace {

std::string format_real(double v) {
  if (v == 0.0) return "0";  // folds -0.0, which would not survive a round trip
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_value(const json& j, std::string& out, int depth, int indent) {
  switch (j.type()) {
    case json::value_t::object: {
      const bool pretty = depth < 2;
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        if (pretty) {
          out += '\n';
          out.append(static_cast<std::size_t>((depth + 1) * indent), ' ');
        }
        out += json(it.key()).dump();
        out += pretty ? ": " : ":";
        write_value(it.value(), out, depth + 1, indent);
      }
      if (pretty && !j.empty()) {
        out += '\n';
        out.append(static_cast<std::size_t>(depth * indent), ' ');
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      const bool pretty = depth < 2 && !j.empty() && j.front().is_structured();
      out += '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ',';
        first = false;
        if (pretty) {
          out += '\n';
          out.append(static_cast<std::size_t>((depth + 1) * indent), ' ');
        }
        write_value(el, out, depth + 1, indent);
      }
      if (pretty) {
        out += '\n';
        out.append(static_cast<std::size_t>(depth * indent), ' ');
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_real(j.get<double>());
      break;
    default:
      out += j.dump();
  }
}

json edge_json(const Edge& e) { return json::array({e.first, e.second}); }

}  // namespace

std::string to_json(const GraphDocument& doc) {
  json meta = json::object();
  meta["epsilon"] = doc.meta.epsilon;
  meta["metric"] = doc.meta.metric;
  meta["net"] = doc.meta.net;
  meta["backend"] = doc.meta.backend;
  meta["n"] = doc.meta.n;
  meta["D"] = doc.meta.dim;
  if (doc.meta.seed) meta["seed"] = *doc.meta.seed;
  if (doc.meta.input) meta["input"] = *doc.meta.input;
  if (doc.meta.aggregator) meta["aggregator"] = *doc.meta.aggregator;

  json nodes = json::array();
  for (const auto& n : doc.nodes) {
    json node = {{"id", n.id}, {"landmark_index", n.landmark_index}, {"ball_size", n.ball_size}};
    if (n.color) node["color"] = *n.color;
    if (n.label) node["color"] = *n.label;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const auto& e : doc.edges) edges.push_back(edge_json(e));

  json root = {{"meta", meta}, {"nodes", nodes}, {"edges", edges}};
  if (doc.simplices) {
    json levels = json::array();
    for (const auto& level : *doc.simplices) {
      json arr = json::array();
      for (const auto& s : level) arr.push_back(s);
      levels.push_back(std::move(arr));
    }
    root["simplices"] = std::move(levels);
  }
  std::string out;
  write_value(root, out, 0, 2);
  out += '\n';
  return out;
}

GraphDocument graph_document_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("graph document is not valid JSON: ") + e.what());
  }
  try {
    GraphDocument doc;
    const json& meta = root.at("meta");
    doc.meta.epsilon = meta.at("epsilon").get<double>();
    doc.meta.metric = meta.at("metric").get<std::string>();
    doc.meta.net = meta.at("net").get<std::string>();
    doc.meta.backend = meta.at("backend").get<std::string>();
    doc.meta.n = meta.at("n").get<std::size_t>();
    doc.meta.dim = meta.at("D").get<std::size_t>();
    if (meta.contains("seed")) doc.meta.seed = meta["seed"].get<std::uint64_t>();
    if (meta.contains("input")) doc.meta.input = meta["input"].get<std::string>();
    if (meta.contains("aggregator")) doc.meta.aggregator = meta["aggregator"].get<std::string>();

    for (const auto& n : root.at("nodes")) {
      GraphNode node;
      node.id = n.at("id").get<std::uint32_t>();
      node.landmark_index = n.at("landmark_index").get<PointIndex>();
      node.ball_size = n.at("ball_size").get<std::size_t>();
      if (n.contains("color")) {
        if (n["color"].is_string()) {
          node.label = n["color"].get<std::string>();
        } else {
          node.color = n["color"].get<double>();
        }
      }
      doc.nodes.push_back(std::move(node));
    }
    for (const auto& e : root.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a pair of node ids");
      doc.edges.emplace_back(e[0].get<std::uint32_t>(), e[1].get<std::uint32_t>());
    }
    if (root.contains("simplices")) {
      std::vector<std::vector<Simplex>> levels;
      for (const auto& level : root["simplices"]) {
        levels.push_back(level.get<std::vector<Simplex>>());
      }
      doc.simplices = std::move(levels);
    }
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph document: ") + e.what());
  }
}

std::string to_dot(const GraphDocument& doc) {
  std::string out = "graph {\n";
  for (const auto& n : doc.nodes) {
    out += "  N" + std::to_string(n.id) + " [ball_size=" + std::to_string(n.ball_size);
    if (n.color) out += ", color=\"" + format_real(*n.color) + "\"";
    if (n.label) out += ", color=" + json(*n.label).dump();
    out += "];\n";
  }
  for (const auto& [a, b] : doc.edges) {
    out += "  N" + std::to_string(a) + " -- N" + std::to_string(b) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace ballmapper
