#include "ballmapper/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "ballmapper/bench.hpp"
#include "ballmapper/coloring.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/dataset.hpp"
#include "ballmapper/error.hpp"
#include "ballmapper/graph_doc.hpp"
#include "ballmapper/nerve.hpp"
#include "ballmapper/rangequery.hpp"

namespace ballmapper {

namespace {

struct InputOptions {
  std::string input;
  bool header = false;
  std::string value_col;
  std::string values_path;
  std::size_t generate = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::string metric = "euclidean";
};

struct NetOptions {
  double epsilon = 0.0;
  std::string backend = "balltree";
  std::size_t leaf_size = kDefaultLeafSize;
  std::size_t threads = default_thread_count();
  std::size_t block = kDefaultBlock;
  std::string net = "greedy";
  std::string order = "index";
  std::uint32_t start = 0;
  std::string aggregator = "mean";
};

void add_input_options(CLI::App* cmd, InputOptions& o) {
  cmd->add_option("--input", o.input, "Points CSV file");
  cmd->add_flag("--header", o.header, "First CSV row is a header");
  cmd->add_option("--value-col", o.value_col, "Header name of the value column");
  cmd->add_option("--values", o.values_path, "Single-column values CSV aligned to point rows");
  cmd->add_option("--generate", o.generate, "Generate N uniform points instead of reading a file");
  cmd->add_option("--dim", o.dim, "Dimension of generated points");
  cmd->add_option("--seed", o.seed, "Seed for generation and shuffling")->capture_default_str();
  cmd->add_option("--metric", o.metric, "Distance function")
      ->check(CLI::IsMember({"euclidean", "manhattan", "chebyshev"}))
      ->capture_default_str();
}

void add_net_options(CLI::App* cmd, NetOptions& o, bool require_epsilon) {
  auto* eps = cmd->add_option("--epsilon", o.epsilon, "Ball radius");
  if (require_epsilon) eps->required();
  cmd->add_option("--backend", o.backend, "Range-query backend")
      ->check(CLI::IsMember({"linear", "balltree", "algebraic"}))
      ->capture_default_str();
  cmd->add_option("--leaf-size", o.leaf_size, "Ball tree leaf size")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  cmd->add_option("--block", o.block, "Points per inner-product block")->capture_default_str();
  cmd->add_option("--net", o.net, "Net construction")
      ->check(CLI::IsMember({"greedy", "fps"}))
      ->capture_default_str();
  cmd->add_option("--order", o.order, "Greedy candidate order")
      ->check(CLI::IsMember({"index", "shuffle"}))
      ->capture_default_str();
  cmd->add_option("--start", o.start, "First FPS landmark")->capture_default_str();
  cmd->add_option("--aggregator", o.aggregator,
                  "mean|median|trimmed:F|min|max|mode|variance|range")
      ->capture_default_str();
}

struct LoadedInput {
  std::optional<PointCloud> cloud;
  std::optional<ValueSeries> values;
  GraphMeta meta;
};

LoadedInput load_input(const InputOptions& o) {
  LoadedInput in;
  const MetricKind metric = parse_metric(o.metric);
  if (!o.input.empty()) {
    if (o.generate) throw InvalidInput("--input and --generate are mutually exclusive");
    CsvOptions csv;
    csv.has_header = o.header;
    csv.metric = metric;
    if (!o.value_col.empty()) csv.value_column = o.value_col;
    auto loaded = load_points_csv(o.input, csv);
    in.cloud.emplace(std::move(loaded.cloud));
    in.values = std::move(loaded.values);
    in.meta.input = o.input;
  } else if (o.generate) {
    if (o.dim == 0) throw InvalidInput("--generate needs --dim");
    in.cloud.emplace(generate_uniform_cloud(o.generate, o.dim, o.seed, metric));
    in.meta.seed = o.seed;
  } else {
    throw InvalidInput("either --input or --generate is required");
  }
  if (!o.values_path.empty()) {
    if (in.values) throw InvalidInput("--values conflicts with --value-col");
    in.values = load_values_csv(o.values_path);
  }
  if (in.values && in.values->size() != in.cloud->size()) {
    throw InvalidInput("values have " + std::to_string(in.values->size()) + " rows, points have " +
                       std::to_string(in.cloud->size()));
  }
  in.meta.metric = o.metric;
  in.meta.n = in.cloud->size();
  in.meta.dim = in.cloud->dim();
  return in;
}

Cover build_cover(const RangeBackend& backend, const NetOptions& o, std::uint64_t seed) {
  if (o.net == "fps") return fps_eps_net(backend, o.epsilon, o.start);
  const GreedyOrder order =
      o.order == "shuffle" ? GreedyOrder::shuffled(seed) : GreedyOrder::by_index();
  return greedy_eps_net(backend, o.epsilon, order);
}

std::unique_ptr<RangeBackend> backend_for(const PointCloud& cloud, const NetOptions& o) {
  return make_backend(parse_backend(o.backend), cloud, {o.leaf_size, o.block, o.threads});
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const unsigned long long v = std::stoull(item, &used);
    if (used != item.size()) throw InvalidInput("bad list element '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  return out;
}

// Appends violations of the color bounds; returns false if any were found.
bool report_bounds(const MapperGraph& graph, const Cover& cover, const PointCloud& cloud,
                   const ValueSeries& values, const ColorMap& colors,
                   std::optional<double> lipschitz, std::ostream& out) {
  if (values.is_categorical() || !colors.aggregator.respects_range()) {
    out << "color bounds: not applicable for aggregator " << colors.aggregator.name() << "\n";
    return true;
  }
  double k = 0.0;
  if (lipschitz) {
    k = *lipschitz;
  } else {
    if (cloud.size() < 2) {
      out << "color bounds: skipped (single point)\n";
      return true;
    }
    const auto est = estimate_lipschitz_constant(cloud, values);
    if (est.infinite) {
      out << "color bounds: skipped (values differ on coincident points; not Lipschitz)\n";
      return true;
    }
    k = est.k;
  }
  const auto report = check_color_bounds(graph, cover, values, colors, k);
  out << "color bounds (k=" << k << ", eps=" << cover.epsilon << "):\n"
      << "  max within-ball deviation " << report.max_within_ball_deviation << " vs bound "
      << k * cover.epsilon << (report.within_ball_bound_holds ? " ok" : " VIOLATED") << "\n"
      << "  max adjacent difference " << report.max_adjacent_difference << " vs bound "
      << 2 * k * cover.epsilon << (report.adjacent_bound_holds ? " ok" : " VIOLATED") << "\n";
  return report.within_ball_bound_holds && report.adjacent_bound_holds;
}

bool report_net(const PointCloud& cloud, const Cover& cover, std::ostream& out) {
  const auto v = validate_eps_net(cloud, cover);
  out << "eps-net: " << cover.landmarks.size() << " landmarks, eps=" << cover.epsilon << "\n";
  for (PointIndex i : v.coverage_violations) out << "  uncovered point " << i << "\n";
  for (const auto& s : v.separation_violations) {
    out << "  landmarks " << s.first << " and " << s.second << " are at distance " << s.distance
        << " < eps\n";
  }
  if (v.ok()) out << "  coverage and separation ok\n";
  return v.ok();
}

int cmd_cover_graph(const InputOptions& io, const NetOptions& no, std::size_t skeleton,
                    const std::string& format, const std::string& out_path, std::ostream& out) {
  auto in = load_input(io);
  const PointCloud& cloud = *in.cloud;
  const auto backend = backend_for(cloud, no);
  const Cover cover = build_cover(*backend, no, io.seed);
  const MapperGraph graph = build_mapper_graph(cover);

  std::optional<SimplicialComplex> complex;
  if (skeleton > 1) complex = build_k_skeleton(cover, skeleton);
  std::optional<ColorMap> colors;
  if (in.values) colors = aggregate_colors(cover, *in.values, Aggregator::parse(no.aggregator));

  GraphMeta meta = in.meta;
  meta.epsilon = no.epsilon;
  meta.net = no.net;
  meta.backend = no.backend;
  const auto doc = make_graph_document(meta, graph, colors ? &*colors : nullptr,
                                       complex ? &*complex : nullptr);
  emit(out_path, format == "dot" ? to_dot(doc) : to_json(doc), out);
  return 0;
}

int cmd_validate(const InputOptions& io, NetOptions no, const std::string& graph_path,
                 std::optional<double> lipschitz, std::ostream& out) {
  bool ok = true;
  if (graph_path.empty()) {
    if (!(no.epsilon > 0.0)) throw InvalidInput("--epsilon is required without --graph");
    auto in = load_input(io);
    const auto backend = backend_for(*in.cloud, no);
    const Cover cover = build_cover(*backend, no, io.seed);
    ok = report_net(*in.cloud, cover, out) && ok;
    if (in.values) {
      const auto graph = build_mapper_graph(cover);
      const auto colors = aggregate_colors(cover, *in.values, Aggregator::parse(no.aggregator));
      ok = report_bounds(graph, cover, *in.cloud, *in.values, colors, lipschitz, out) && ok;
    }
  } else {
    const auto doc = graph_document_from_json(read_text(graph_path));
    InputOptions with_metric = io;
    with_metric.metric = doc.meta.metric;
    auto in = load_input(with_metric);
    const PointCloud& cloud = *in.cloud;
    if (doc.meta.n != cloud.size() || doc.meta.dim != cloud.dim()) {
      out << "document describes " << doc.meta.n << "x" << doc.meta.dim << " points, input has "
          << cloud.size() << "x" << cloud.dim() << "\n";
      return 1;
    }
    std::vector<PointIndex> landmarks(doc.nodes.size());
    for (std::size_t j = 0; j < doc.nodes.size(); ++j) {
      const auto& node = doc.nodes[j];
      if (node.id != j) {
        out << "node ids are not consecutive positions (node " << j << " has id " << node.id
            << ")\n";
        return 1;
      }
      if (node.landmark_index >= cloud.size()) {
        out << "node " << j << " names landmark " << node.landmark_index << " out of range\n";
        return 1;
      }
      landmarks[j] = node.landmark_index;
    }
    const auto oracle = make_backend(BackendKind::linear, cloud);
    const Cover cover = cover_from_landmarks(*oracle, doc.meta.epsilon, landmarks);
    ok = report_net(cloud, cover, out) && ok;

    const auto graph = build_mapper_graph(cover);
    for (std::size_t j = 0; j < doc.nodes.size(); ++j) {
      if (doc.nodes[j].ball_size != cover.members[j].size()) {
        out << "  node " << j << " lists ball size " << doc.nodes[j].ball_size << ", actual "
            << cover.members[j].size() << "\n";
        ok = false;
      }
    }
    const std::set<Edge> actual(graph.edges.begin(), graph.edges.end());
    const std::set<Edge> listed(doc.edges.begin(), doc.edges.end());
    for (const auto& e : doc.edges) {
      if (!actual.count(e)) {
        out << "  edge (" << e.first << ", " << e.second << ") has no witness point\n";
        ok = false;
      }
    }
    for (const auto& e : graph.edges) {
      if (!listed.count(e)) {
        out << "  missing edge (" << e.first << ", " << e.second << ")\n";
        ok = false;
      }
    }
    if (ok) out << "graph: " << graph.edges.size() << " edges, all witnessed\n";

    if (in.values && doc.meta.aggregator) {
      const auto colors = aggregate_colors(cover, *in.values, Aggregator::parse(*doc.meta.aggregator));
      for (std::size_t j = 0; j < doc.nodes.size(); ++j) {
        const auto& node = doc.nodes[j];
        if (!colors.categorical && node.color &&
            std::abs(*node.color - colors.values[j]) > kBoundTolerance) {
          out << "  node " << j << " color " << *node.color << " differs from recomputed "
              << colors.values[j] << "\n";
          ok = false;
        }
        if (colors.categorical && node.label && *node.label != colors.labels[j]) {
          out << "  node " << j << " label " << *node.label << " differs from recomputed "
              << colors.labels[j] << "\n";
          ok = false;
        }
      }
      ok = report_bounds(graph, cover, cloud, *in.values, colors, lipschitz, out) && ok;
    }
  }
  out << (ok ? "valid\n" : "INVALID\n");
  return ok ? 0 : 1;
}

struct BenchOptions {
  std::string preset;
  std::string sizes;
  std::string dims;
  std::size_t trials = 0;
  double epsilon = 0.0;
  std::string baseline = "linear";
  std::string backends = "linear,balltree,algebraic";
  std::size_t leaf_size = kDefaultLeafSize;
  std::size_t threads = default_thread_count();
  std::size_t block = kDefaultBlock;
  std::uint64_t seed = 0;
  bool time_query_only = false;
  bool no_warmup = false;
  bool quiet = false;
  std::string out;
  std::string summary;
  std::string fit;
};

int cmd_bench(const BenchOptions& o, bool threads_given, bool leaf_given, std::ostream& out,
              std::ostream& err) {
  BenchConfig config;
  if (o.preset == "paper") {
    config = paper_preset();
  } else if (!o.preset.empty()) {
    throw InvalidInput("unknown preset '" + o.preset + "'");
  }
  config.backends.clear();
  std::stringstream ss(o.backends);
  for (std::string b; std::getline(ss, b, ',');) {
    if (!b.empty()) config.backends.push_back(parse_backend(b));
  }
  if (!o.sizes.empty()) config.sizes = parse_list<std::size_t>(o.sizes);
  if (!o.dims.empty()) config.dims = parse_list<std::size_t>(o.dims);
  if (o.trials) config.trials = o.trials;
  if (o.epsilon > 0.0) config.epsilon = EpsilonRule::fixed(o.epsilon);
  if (leaf_given || o.preset.empty()) config.leaf_size = o.leaf_size;
  if (threads_given || o.preset.empty()) config.threads = o.threads;
  config.block = o.block;
  config.base_seed = o.seed;
  config.time_query_only = o.time_query_only;
  config.warmup = !o.no_warmup;

  const BackendKind baseline = parse_backend(o.baseline);
  bool has_baseline = false;
  for (auto b : config.backends) has_baseline = has_baseline || b == baseline;
  if (!has_baseline) config.backends.insert(config.backends.begin(), baseline);

  BenchProgress progress;
  if (!o.quiet) {
    progress = [&err](const BenchRecord& r) {
      err << backend_name(r.backend) << " n=" << r.n << " D=" << r.dim << " trial=" << r.trial
          << " landmarks=" << r.landmarks << " runtime_ms=" << r.runtime_ms
          << (r.failed ? " FAILED" : "") << "\n";
    };
  }
  const auto records = run_benchmark_suite(config, progress);
  emit(o.out, format_records_csv(records), out);
  const auto summary = summarize_benchmarks(records, baseline);
  for (const auto& w : summary.warnings) err << "warning: " << w << "\n";
  if (!o.summary.empty()) emit(o.summary, format_summary_csv(summary.rows), out);
  if (!o.fit.empty()) emit(o.fit, format_fits_csv(fit_scaling_over_dim(summary.rows)), out);
  return 0;
}

int cmd_export(const std::string& in_path, const std::string& format, const std::string& out_path,
               std::ostream& out) {
  const auto doc = graph_document_from_json(read_text(in_path));
  emit(out_path, format == "dot" ? to_dot(doc) : to_json(doc), out);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ball Mapper covers, graphs and range-query benchmarks", "ballmapper"};
  app.require_subcommand(1);

  InputOptions cg_in;
  NetOptions cg_net;
  std::size_t skeleton = 1;
  std::string cg_format = "json";
  std::string cg_out;
  auto* cover_graph = app.add_subcommand("cover-graph", "Build an eps-net and its Ball Mapper graph");
  add_input_options(cover_graph, cg_in);
  add_net_options(cover_graph, cg_net, true);
  cover_graph->add_option("--skeleton", skeleton, "Highest simplex dimension to emit")
      ->capture_default_str();
  cover_graph->add_option("--format", cg_format, "Output format")
      ->check(CLI::IsMember({"json", "dot"}))
      ->capture_default_str();
  cover_graph->add_option("--out", cg_out, "Output path (default stdout)");

  InputOptions va_in;
  NetOptions va_net;
  std::string va_graph;
  std::optional<double> va_lipschitz;
  auto* validate = app.add_subcommand("validate", "Check eps-net conditions, graph edges and color bounds");
  add_input_options(validate, va_in);
  add_net_options(validate, va_net, false);
  validate->add_option("--graph", va_graph, "Graph document to check against the points");
  validate->add_option("--lipschitz", va_lipschitz,
                       "Lipschitz constant of the values (estimated if omitted)");

  BenchOptions bo;
  auto* bench = app.add_subcommand("bench", "Time cover construction over a (backend, n, D) grid");
  bench->add_option("--preset", bo.preset, "Named grid: paper");
  bench->add_option("--sizes", bo.sizes, "Comma-separated point counts");
  bench->add_option("--dims", bo.dims, "Comma-separated dimensions");
  bench->add_option("--trials", bo.trials, "Trials per cell");
  bench->add_option("--epsilon", bo.epsilon, "Fixed eps (default 0.5*sqrt(D/6))");
  bench->add_option("--baseline", bo.baseline, "Backend speedups are relative to")
      ->check(CLI::IsMember({"linear", "balltree", "algebraic"}))
      ->capture_default_str();
  bench->add_option("--backends", bo.backends, "Comma-separated backends")->capture_default_str();
  auto* leaf_opt = bench->add_option("--leaf-size", bo.leaf_size, "Ball tree leaf size");
  auto* threads_opt = bench->add_option("--threads", bo.threads, "Worker threads");
  bench->add_option("--block", bo.block, "Points per inner-product block")->capture_default_str();
  bench->add_option("--seed", bo.seed, "Base seed")->capture_default_str();
  bench->add_flag("--time-query-only", bo.time_query_only, "Exclude index construction from timing");
  bench->add_flag("--no-warmup", bo.no_warmup, "Skip the untimed warm-up run per cell");
  bench->add_flag("--quiet", bo.quiet, "No per-trial progress on stderr");
  bench->add_option("--out", bo.out, "Per-trial CSV (default stdout)");
  bench->add_option("--summary", bo.summary, "Summary CSV path");
  bench->add_option("--fit", bo.fit, "Scaling-fit CSV path");

  std::string ex_in;
  std::string ex_format = "dot";
  std::string ex_out;
  auto* exporter = app.add_subcommand("export", "Convert a graph document to JSON or DOT");
  exporter->add_option("--in", ex_in, "Graph document (JSON)")->required();
  exporter->add_option("--format", ex_format, "Output format")
      ->check(CLI::IsMember({"json", "dot"}))
      ->capture_default_str();
  exporter->add_option("--out", ex_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 2;
  }

  try {
    if (*cover_graph) return cmd_cover_graph(cg_in, cg_net, skeleton, cg_format, cg_out, out);
    if (*validate) return cmd_validate(va_in, va_net, va_graph, va_lipschitz, out);
    if (*bench) return cmd_bench(bo, threads_opt->count() > 0, leaf_opt->count() > 0, out, err);
    if (*exporter) return cmd_export(ex_in, ex_format, ex_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ballmapper
