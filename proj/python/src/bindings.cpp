#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ballmapper/bench.hpp"
#include "ballmapper/coloring.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/dataset.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/graph_doc.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/nerve.hpp"
#include "ballmapper/rangequery.hpp"

namespace py = pybind11;
using namespace ballmapper;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Values = std::variant<std::vector<double>, std::vector<std::string>>;

PointCloud cloud_from_array(const Matrix& coords, const std::string& metric) {
  if (coords.ndim() != 2) throw InvalidInput("coordinates must be a 2-D array");
  const auto n = static_cast<std::size_t>(coords.shape(0));
  const auto dim = static_cast<std::size_t>(coords.shape(1));
  std::vector<double> flat(coords.data(), coords.data() + n * dim);
  return PointCloud(n, dim, std::move(flat), parse_metric(metric));
}

Matrix cloud_to_array(const PointCloud& cloud) {
  Matrix out({cloud.size(), cloud.dim()});
  std::memcpy(out.mutable_data(), cloud.data(), sizeof(double) * cloud.size() * cloud.dim());
  return out;
}

ValueSeries to_series(const Values& values) {
  if (const auto* numeric = std::get_if<std::vector<double>>(&values)) {
    return ValueSeries::numeric(*numeric);
  }
  return ValueSeries::categorical(std::get<std::vector<std::string>>(values));
}

py::object from_series(const std::optional<ValueSeries>& values) {
  if (!values) return py::none();
  if (values->is_categorical()) return py::cast(values->labels());
  return py::cast(values->values());
}

py::dict graph_dict(const MapperGraph& graph) {
  py::list vertices;
  for (const auto& v : graph.vertices) {
    vertices.append(py::make_tuple(v.position, v.landmark, v.ball_size));
  }
  py::dict d;
  d["vertices"] = vertices;
  d["edges"] = graph.edges;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Ball Mapper graphs over exact range queries (linear scan, ball tree, algebraic).";

  static py::exception<Error> base_error(m, "BallMapperError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ResourceLimit& e) {
      PyErr_SetString(PyExc_MemoryError, e.what());
    } catch (const Error& e) {
      base_error(e.what());
    }
  });

  m.def("distance",
        [](const std::string& metric, const std::vector<double>& x, const std::vector<double>& y) {
          return distance(parse_metric(metric), x, y);
        },
        py::arg("metric"), py::arg("x"), py::arg("y"));

  py::class_<PointCloud>(m, "PointCloud")
      .def(py::init(&cloud_from_array), py::arg("coords"), py::arg("metric") = "euclidean")
      .def_property_readonly("n", &PointCloud::size)
      .def_property_readonly("dim", &PointCloud::dim)
      .def_property_readonly("metric",
                             [](const PointCloud& c) { return std::string(metric_name(c.metric())); })
      .def_property_readonly("coords", &cloud_to_array)
      .def("__len__", &PointCloud::size);

  m.def("generate_uniform_cloud",
        [](std::size_t n, std::size_t dim, std::uint64_t seed, const std::string& metric) {
          return generate_uniform_cloud(n, dim, seed, parse_metric(metric));
        },
        py::arg("n"), py::arg("dim"), py::arg("seed") = 0, py::arg("metric") = "euclidean");

  m.def("load_points_csv",
        [](const std::string& path, bool header, std::optional<std::string> value_column,
           const std::string& metric) {
          CsvOptions opts;
          opts.has_header = header;
          opts.value_column = std::move(value_column);
          opts.metric = parse_metric(metric);
          auto loaded = load_points_csv(path, opts);
          return py::make_tuple(std::move(loaded.cloud), from_series(loaded.values));
        },
        py::arg("path"), py::arg("header") = false, py::arg("value_column") = py::none(),
        py::arg("metric") = "euclidean");
  m.def("write_points_csv",
        [](const std::string& path, const PointCloud& cloud) { write_points_csv(path, cloud); },
        py::arg("path"), py::arg("cloud"));

  m.def("linear_scan_range",
        [](const PointCloud& cloud, const std::vector<double>& q, double eps) {
          return linear_scan_range(cloud, q, eps);
        },
        py::arg("cloud"), py::arg("query"), py::arg("eps"));

  py::class_<BallTree>(m, "BallTree")
      .def(py::init([](const PointCloud& cloud, std::size_t leaf_size) {
             return BallTree::build(cloud, leaf_size);
           }),
           py::arg("cloud"), py::arg("leaf_size") = kDefaultLeafSize)
      .def_property_readonly("node_count", &BallTree::node_count)
      .def_property_readonly("leaf_size", &BallTree::leaf_size)
      .def("range",
           [](const BallTree& tree, const PointCloud& cloud, const std::vector<double>& q,
              double eps) {
             QueryStats stats;
             auto result = tree.range(cloud, q, eps, &stats);
             return py::make_tuple(std::move(result), stats.nodes_visited,
                                   stats.distances_evaluated);
           },
           py::arg("cloud"), py::arg("query"), py::arg("eps"),
           "Returns (indices, nodes_visited, distances_evaluated).");

  m.def("algebraic_range",
        [](const PointCloud& cloud, const std::vector<double>& q, double eps, std::size_t block,
           std::size_t threads) {
          return algebraic_range(cloud, precompute_squared_norms(cloud), q, eps, {block, threads});
        },
        py::arg("cloud"), py::arg("query"), py::arg("eps"), py::arg("block") = kDefaultBlock,
        py::arg("threads") = 1);

  py::class_<RangeBackend>(m, "Backend")
      .def_property_readonly("kind",
                             [](const RangeBackend& b) { return std::string(backend_name(b.kind())); })
      .def("query", [](const RangeBackend& b, const std::vector<double>& q,
                       double eps) { return b.query(q, eps); },
           py::arg("query"), py::arg("eps"))
      .def("batch", &batch_range, py::arg("queries"), py::arg("eps"), py::arg("threads") = 1);

  m.def("make_backend",
        [](const std::string& kind, const PointCloud& cloud, std::size_t leaf_size,
           std::size_t block, std::size_t threads) {
          return make_backend(parse_backend(kind), cloud, {leaf_size, block, threads});
        },
        py::arg("kind"), py::arg("cloud"), py::arg("leaf_size") = kDefaultLeafSize,
        py::arg("block") = kDefaultBlock, py::arg("threads") = 1,
        py::keep_alive<0, 2>());

  py::class_<Cover>(m, "Cover")
      .def_readonly("epsilon", &Cover::epsilon)
      .def_readonly("landmarks", &Cover::landmarks)
      .def_readonly("members", &Cover::members)
      .def_readonly("point_to_balls", &Cover::point_to_balls);

  m.def("greedy_eps_net",
        [](const RangeBackend& backend, double eps, const std::string& order, std::uint64_t seed) {
          if (order == "index") return greedy_eps_net(backend, eps, GreedyOrder::by_index());
          if (order == "shuffle") return greedy_eps_net(backend, eps, GreedyOrder::shuffled(seed));
          throw InvalidInput("order must be 'index' or 'shuffle'");
        },
        py::arg("backend"), py::arg("eps"), py::arg("order") = "index", py::arg("seed") = 0);
  m.def("fps_eps_net", &fps_eps_net, py::arg("backend"), py::arg("eps"), py::arg("start") = 0);
  m.def("cover_from_landmarks", &cover_from_landmarks, py::arg("backend"), py::arg("eps"),
        py::arg("landmarks"));
  m.def("validate_eps_net",
        [](const PointCloud& cloud, const Cover& cover) {
          const auto v = validate_eps_net(cloud, cover);
          py::list separation;
          for (const auto& s : v.separation_violations) {
            separation.append(py::make_tuple(s.first, s.second, s.distance));
          }
          py::dict d;
          d["coverage"] = v.coverage_violations;
          d["separation"] = separation;
          d["ok"] = v.ok();
          return d;
        },
        py::arg("cloud"), py::arg("cover"));

  m.def("build_mapper_graph", [](const Cover& cover) { return graph_dict(build_mapper_graph(cover)); },
        py::arg("cover"));
  m.def("build_k_skeleton",
        [](const Cover& cover, std::size_t k_max, std::size_t budget) {
          return build_k_skeleton(cover, k_max, budget).simplices;
        },
        py::arg("cover"), py::arg("k_max"), py::arg("budget") = kDefaultSimplexBudget);

  m.def("aggregate_colors",
        [](const Cover& cover, const Values& values, const std::string& aggregator) -> py::object {
          const auto colors = aggregate_colors(cover, to_series(values), Aggregator::parse(aggregator));
          if (colors.categorical) return py::cast(colors.labels);
          return py::cast(colors.values);
        },
        py::arg("cover"), py::arg("values"), py::arg("aggregator") = "mean");
  m.def("estimate_lipschitz_constant",
        [](const PointCloud& cloud, const std::vector<double>& values) {
          return estimate_lipschitz_constant(cloud, ValueSeries::numeric(values)).k;
        },
        py::arg("cloud"), py::arg("values"));
  m.def("check_color_bounds",
        [](const Cover& cover, const std::vector<double>& values, const std::string& aggregator,
           double k) {
          const auto series = ValueSeries::numeric(values);
          const auto colors = aggregate_colors(cover, series, Aggregator::parse(aggregator));
          const auto r = check_color_bounds(build_mapper_graph(cover), cover, series, colors, k);
          py::dict d;
          d["max_within_ball_deviation"] = r.max_within_ball_deviation;
          d["max_adjacent_difference"] = r.max_adjacent_difference;
          d["within_ball_bound_holds"] = r.within_ball_bound_holds;
          d["adjacent_bound_holds"] = r.adjacent_bound_holds;
          d["applicable"] = r.applicable;
          return d;
        },
        py::arg("cover"), py::arg("values"), py::arg("aggregator"), py::arg("k"));

  m.def("fit_power_law",
        [](const std::vector<double>& xs, const std::vector<double>& ys) {
          const auto fit = fit_power_law(xs, ys);
          return py::make_tuple(fit.p, fit.k, fit.r_squared);
        },
        py::arg("xs"), py::arg("ys"), "Returns (p, k, r_squared) for y = k * x**p.");

  m.def("graph_json",
        [](const Cover& cover, const PointCloud& cloud, const std::string& backend) {
          GraphMeta meta;
          meta.epsilon = cover.epsilon;
          meta.metric = std::string(metric_name(cloud.metric()));
          meta.backend = backend;
          meta.n = cloud.size();
          meta.dim = cloud.dim();
          return to_json(make_graph_document(meta, build_mapper_graph(cover)));
        },
        py::arg("cover"), py::arg("cloud"), py::arg("backend") = "linear");
}
