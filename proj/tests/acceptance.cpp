// Acceptance checks. Run with a criterion number (1-10) or with no argument
// to run all of them; prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "ballmapper/bench.hpp"
#include "ballmapper/cli.hpp"
#include "ballmapper/coloring.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/graph_doc.hpp"
#include "ballmapper/nerve.hpp"
#include "ballmapper/rangequery.hpp"
#include "test_support.hpp"

using namespace ballmapper;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, const std::string& line) {
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += line;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Backend oracle equivalence.
Outcome backend_equivalence() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t sizes[] = {100, 500, 2000};
  const std::size_t dims[] = {2, 10, 100, 500};
  std::size_t mismatches = 0, queries = 0;
  for (std::uint32_t c = 0; c < 50; ++c) {
    const std::size_t n = sizes[c % 3], dim = dims[(c / 3) % 4];
    const auto cloud = generate_uniform_cloud(n, dim, 1000 + c);
    const auto tree = build_ball_tree(cloud, 1 + c % 40);
    const auto norms = precompute_squared_norms(cloud);
    std::mt19937 rng(c);
    std::normal_distribution<double> jitter(0.0, 0.05);
    std::uniform_real_distribution<double> scale(0.2, 1.2);
    for (int t = 0; t < 10; ++t) {
      const auto base = cloud.point(rng() % n);
      std::vector<double> q(base.begin(), base.end());
      if (t % 2) {
        for (auto& x : q) x += jitter(rng);
      }
      const double eps = scale(rng) * std::sqrt(static_cast<double>(dim) / 6.0);
      const auto expect = linear_scan_range(cloud, q, eps);
      if (tree.range(cloud, q, eps) != expect) ++mismatches;
      if (algebraic_range(cloud, norms, q, eps, {kDefaultBlock, static_cast<std::size_t>(1 + t % 4)}) != expect) ++mismatches;
      ++queries;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.pass = mismatches == 0 && secs < 120.0;
  note(o, std::to_string(queries) + " queries x 2 backends, " + std::to_string(mismatches) +
              " mismatches, " + fmt("%.1f s", secs));
  return o;
}

// 2. eps-net validity for greedy and FPS.
Outcome net_validity() {
  Outcome o;
  std::size_t coverage = 0, separation = 0;
  for (std::uint32_t s = 0; s < 100; ++s) {
    std::mt19937 rng(s);
    const std::size_t n = 20 + rng() % 1000;
    const std::size_t dim = std::vector<std::size_t>{1, 2, 5, 10, 50}[s % 5];
    const auto cloud = generate_uniform_cloud(n, dim, 5000 + s);
    const double eps = std::uniform_real_distribution<double>(0.1, 1.0)(rng) *
                       std::sqrt(static_cast<double>(dim) / 6.0);
    const auto backend = make_backend(static_cast<BackendKind>(s % 3), cloud);
    for (const auto& cover :
         {greedy_eps_net(*backend, eps), fps_eps_net(*backend, eps, rng() % n)}) {
      const auto v = validate_eps_net(cloud, cover);
      coverage += v.coverage_violations.size();
      separation += v.separation_violations.size();
    }
  }
  o.pass = coverage == 0 && separation == 0;
  note(o, "200 covers, " + std::to_string(coverage) + " coverage / " +
              std::to_string(separation) + " separation violations");
  return o;
}

// 3. FPS determinism and greedy order-dependence.
Outcome determinism() {
  Outcome o;
  const auto cloud = generate_uniform_cloud(1500, 20, 77);
  const double eps = 0.8;
  std::vector<PointIndex> reference;
  bool identical = true;
  for (auto kind : {BackendKind::linear, BackendKind::balltree, BackendKind::algebraic}) {
    for (int run = 0; run < 5; ++run) {
      const auto backend = make_backend(kind, cloud, {kDefaultLeafSize, kDefaultBlock,
                                                      static_cast<std::size_t>(1 + run)});
      const auto landmarks = fps_eps_net(*backend, eps, 11).landmarks;
      if (reference.empty()) reference = landmarks;
      identical = identical && landmarks == reference;
    }
  }
  note(o, "FPS: 15 runs (3 backends x 5), " + std::to_string(reference.size()) +
              " landmarks, " + (identical ? "identical" : "DIFFERENT"));

  const auto line = testing::line_cloud({0, 1, 2});
  const auto backend = make_backend(BackendKind::linear, line);
  const auto by_index = greedy_eps_net(*backend, 1.5).landmarks;
  const std::vector<PointIndex> middle_first{1, 0, 2};
  const auto from_middle = greedy_eps_net(*backend, 1.5, middle_first).landmarks;
  const bool witness = by_index == std::vector<PointIndex>{0, 2} &&
                       from_middle == std::vector<PointIndex>{1};
  note(o, std::string("greedy witness on {0,1,2}, eps=1.5: ") +
              (witness ? "(0,2) vs (1)" : "NOT REPRODUCED"));
  o.pass = identical && witness;
  return o;
}

// 4. Coloring bounds with a coordinate projection. The within-ball and
// adjacent bounds are checked as stated (k*eps and 2*k*eps). The detail line
// also reports the largest observed ratios to those bounds, and whether the
// weaker 2*k*eps / 4*k*eps bounds (members of one ball can be up to 2*eps
// apart) held.
Outcome coloring_bounds() {
  Outcome o;
  std::size_t within = 0, adjacent = 0, lipschitz_mismatch = 0, weak = 0;
  double worst_within = 0.0, worst_adjacent = 0.0;
  std::map<std::string, std::size_t> by_aggregator;
  for (std::uint32_t s = 0; s < 500; ++s) {
    std::mt19937 rng(s);
    const std::size_t n = 2 + rng() % 200, dim = 1 + rng() % 8;
    const auto cloud = generate_uniform_cloud(n, dim, 9000 + s);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = cloud.point(i)[0];
    const auto values = ValueSeries::numeric(f);
    const double k = 1.0;
    const auto est = estimate_lipschitz_constant(cloud, values);
    const double oracle = testing::brute_force_lipschitz(cloud, f);
    if (est.infinite || est.k > k + 1e-12 ||
        std::abs(est.k - oracle) > 1e-12 * std::max(1.0, oracle)) {
      ++lipschitz_mismatch;
    }
    const double eps = std::uniform_real_distribution<double>(0.05, 1.0)(rng) *
                       std::sqrt(static_cast<double>(dim));
    const auto backend = make_backend(BackendKind::balltree, cloud);
    const auto cover = greedy_eps_net(*backend, eps);
    const auto graph = build_mapper_graph(cover);
    for (const char* agg : {"mean", "median", "min", "max"}) {
      const auto colors = aggregate_colors(cover, values, Aggregator::parse(agg));
      const auto r = check_color_bounds(graph, cover, values, colors, k);
      const bool bad_within = !r.applicable || !r.within_ball_bound_holds;
      const bool bad_adjacent = !r.applicable || !r.adjacent_bound_holds;
      within += bad_within;
      adjacent += bad_adjacent;
      if (bad_within || bad_adjacent) ++by_aggregator[agg];
      worst_within = std::max(worst_within, r.max_within_ball_deviation / (k * eps));
      worst_adjacent = std::max(worst_adjacent, r.max_adjacent_difference / (2 * k * eps));
      if (r.max_within_ball_deviation > 2 * k * eps + kBoundTolerance ||
          r.max_adjacent_difference > 4 * k * eps + kBoundTolerance) {
        ++weak;
      }
    }
  }
  o.pass = within == 0 && adjacent == 0 && lipschitz_mismatch == 0;
  note(o, "2000 colorings: " + std::to_string(within) + " within-ball (k*eps) and " +
              std::to_string(adjacent) + " adjacent (2k*eps) violations");
  std::string per;
  for (const auto& [agg, count] : by_aggregator) {
    per += (per.empty() ? "" : ", ") + agg + " " + std::to_string(count);
  }
  if (!per.empty()) note(o, "failing colorings by aggregator: " + per);
  note(o, "worst deviation/(k*eps) " + fmt("%.3f", worst_within) + ", worst difference/(2k*eps) " +
              fmt("%.3f", worst_adjacent));
  note(o, std::to_string(weak) + " exceed 2k*eps / 4k*eps");
  note(o, std::to_string(lipschitz_mismatch) + " Lipschitz oracle disagreements");
  return o;
}

// 5. Nerve correctness.
Outcome nerve_correctness() {
  Outcome o;
  std::size_t edge_mismatch = 0, not_closed = 0, inconsistent = 0;
  for (std::uint32_t s = 0; s < 50; ++s) {
    std::mt19937 rng(s);
    const std::size_t n = 2 + rng() % 199, dim = 1 + rng() % 5;
    const auto cloud = generate_uniform_cloud(n, dim, 300 + s);
    const double eps = std::uniform_real_distribution<double>(0.2, 0.9)(rng) *
                       std::sqrt(static_cast<double>(dim));
    const auto backend = make_backend(BackendKind::linear, cloud);
    const auto cover = greedy_eps_net(*backend, eps);
    const auto graph = build_mapper_graph(cover);
    if (graph.edges != testing::brute_force_edges(cover)) ++edge_mismatch;
    for (std::size_t k = 0; k <= 3; ++k) {
      const auto complex = build_k_skeleton(cover, k);
      if (!testing::downward_closed(complex.simplices)) ++not_closed;
      bool ok = complex.simplices.size() == k + 1 &&
                complex.simplices[0].size() == graph.vertices.size();
      if (ok && k >= 1) {
        std::vector<Edge> edges;
        for (const auto& e : complex.simplices[1]) edges.emplace_back(e[0], e[1]);
        ok = edges == graph.edges;
      }
      if (!ok) ++inconsistent;
    }
  }
  o.pass = edge_mismatch == 0 && not_closed == 0 && inconsistent == 0;
  note(o, "50 instances: " + std::to_string(edge_mismatch) + " edge-set mismatches, " +
              std::to_string(not_closed) + " non-closed skeletons, " +
              std::to_string(inconsistent) + " skeleton/graph inconsistencies");
  return o;
}

// 6. Power-law fit.
Outcome power_law() {
  Outcome o;
  const std::vector<double> xs{10, 50, 100, 200, 500, 1000};
  double worst_dp = 0.0, worst_r2 = 0.0;
  for (double p : {0.5, 1.0, 1.5, 2.0, 2.045}) {
    for (double k : {1e-3, 1.0, 3.0}) {
      std::vector<double> ys;
      for (double x : xs) ys.push_back(k * std::pow(x, p));
      const auto fit = fit_power_law(xs, ys);
      worst_dp = std::max(worst_dp, std::abs(fit.p - p));
      worst_r2 = std::max(worst_r2, std::abs(fit.r_squared - 1.0));
    }
  }
  const bool exact = worst_dp <= 1e-9 && worst_r2 <= 1e-9;
  note(o, "noiseless: max |dp| " + fmt("%.2e", worst_dp) + ", max |r2-1| " + fmt("%.2e", worst_r2));

  int good = 0;
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * std::pow(x, 1.7) * std::exp(noise(rng)));
    const auto fit = fit_power_law(xs, ys);
    if (std::abs(fit.p - 1.7) <= 0.1 && fit.r_squared >= 0.9) ++good;
  }
  note(o, "5% lognormal noise: " + std::to_string(good) + "/100 seeds within tolerance");
  o.pass = exact && good >= 95;
  return o;
}

BenchConfig desk_config(std::vector<BackendKind> backends, std::vector<std::size_t> sizes,
                        std::vector<std::size_t> dims, std::size_t trials) {
  BenchConfig c;
  c.backends = std::move(backends);
  c.sizes = std::move(sizes);
  c.dims = std::move(dims);
  c.trials = trials;
  c.threads = default_thread_count();
  c.base_seed = 2024;
  return c;
}

const SummaryRow* find_row(const BenchSummary& s, BackendKind b, std::size_t n, std::size_t d) {
  for (const auto& r : s.rows) {
    if (r.backend == b && r.n == n && r.dim == d) return &r;
  }
  return nullptr;
}

// 7. Desk-scale runtime claims.
Outcome runtime_claims() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();

  const auto high_d = summarize_benchmarks(
      run_benchmark_suite(desk_config({BackendKind::linear, BackendKind::algebraic}, {5000}, {500}, 5)),
      BackendKind::linear);
  const auto* lin = find_row(high_d, BackendKind::linear, 5000, 500);
  const auto* alg = find_row(high_d, BackendKind::algebraic, 5000, 500);
  const bool a = lin && alg && alg->median_runtime_ms <= lin->median_runtime_ms / 5.0;
  if (lin && alg) {
    note(o, "n=5000 D=500: linear " + fmt("%.0f ms", lin->median_runtime_ms) + ", algebraic " +
                fmt("%.0f ms", alg->median_runtime_ms) + " (speedup " + fmt("%.2f", alg->speedup) +
                ", need >= 5)");
  }

  const auto low_d = summarize_benchmarks(
      run_benchmark_suite(desk_config({BackendKind::linear, BackendKind::balltree}, {5000}, {10}, 5)),
      BackendKind::linear);
  const auto* lin10 = find_row(low_d, BackendKind::linear, 5000, 10);
  const auto* tree10 = find_row(low_d, BackendKind::balltree, 5000, 10);
  const bool b = lin10 && tree10 && tree10->median_runtime_ms <= lin10->median_runtime_ms;
  if (lin10 && tree10) {
    note(o, "n=5000 D=10: linear " + fmt("%.0f ms", lin10->median_runtime_ms) + ", balltree " +
                fmt("%.0f ms", tree10->median_runtime_ms));
  }

  const std::vector<std::size_t> ns{100, 1000, 5000};
  const auto grow = summarize_benchmarks(
      run_benchmark_suite(desk_config({BackendKind::linear, BackendKind::algebraic}, ns, {100}, 5)),
      BackendKind::linear);
  bool c = true;
  double prev = 0.0;
  std::string speedups;
  for (std::size_t n : ns) {
    const auto* r = find_row(grow, BackendKind::algebraic, n, 100);
    if (!r) {
      c = false;
      continue;
    }
    speedups += (speedups.empty() ? "" : ", ") + fmt("%.2f", r->speedup);
    c = c && r->speedup >= prev;
    prev = r->speedup;
  }
  note(o, "D=100 algebraic speedup over n={100,1000,5000}: " + speedups);

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  note(o, fmt("%.0f s", secs));
  o.pass = a && b && c && secs <= 900.0;
  return o;
}

// 8. Scaling exponents over D.
Outcome scaling_exponents() {
  Outcome o;
  const auto summary = summarize_benchmarks(
      run_benchmark_suite(desk_config({BackendKind::linear, BackendKind::balltree,
                                       BackendKind::algebraic},
                                      {2000}, {50, 100, 200, 500, 1000}, 3)),
      BackendKind::linear);
  const auto fits = fit_scaling_over_dim(summary.rows);
  double base_p = 0, base_r2 = 0;
  double tree_p = INFINITY, alg_p = INFINITY;
  for (const auto& f : fits) {
    note(o, std::string(backend_name(f.backend)) + " p=" + fmt("%.3f", f.fit.p) +
                " r2=" + fmt("%.3f", f.fit.r_squared));
    if (f.backend == BackendKind::linear) {
      base_p = f.fit.p;
      base_r2 = f.fit.r_squared;
    } else if (f.backend == BackendKind::balltree) {
      tree_p = f.fit.p;
    } else {
      alg_p = f.fit.p;
    }
  }
  o.pass = base_p >= 1.5 && base_r2 >= 0.95 && tree_p < base_p && alg_p < base_p;
  return o;
}

// 9. Peak memory grows with n.
Outcome memory_trend() {
  Outcome o;
  const std::vector<std::size_t> ns{100, 1000, 5000};
  const auto summary = summarize_benchmarks(
      run_benchmark_suite(desk_config({BackendKind::linear, BackendKind::balltree,
                                       BackendKind::algebraic},
                                      ns, {100}, 3)),
      BackendKind::linear);
  for (auto b : {BackendKind::linear, BackendKind::balltree, BackendKind::algebraic}) {
    double prev = -1.0;
    std::string line = std::string(backend_name(b)) + " MB:";
    for (std::size_t n : ns) {
      const auto* r = find_row(summary, b, n, 100);
      if (!r) {
        o.pass = false;
        continue;
      }
      line += " " + fmt("%.3f", r->median_peak_mem_mb);
      if (r->median_peak_mem_mb < prev) o.pass = false;
      prev = r->median_peak_mem_mb;
    }
    note(o, line);
  }
  return o;
}

// 10. Round-trips and the CLI exit-code contract.
Outcome round_trips() {
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ballmapper_acceptance";
  fs::create_directories(dir);

  const auto cloud = generate_uniform_cloud(500, 7, 3);
  write_points_csv(dir / "cloud.csv", cloud);
  const auto back = load_points_csv(dir / "cloud.csv").cloud;
  const bool csv = back.size() == cloud.size() && back.dim() == cloud.dim() &&
                   std::memcmp(back.data(), cloud.data(), sizeof(double) * 500 * 7) == 0;
  note(o, std::string("CSV round-trip ") + (csv ? "exact" : "DIFFERS"));

  const auto backend = make_backend(BackendKind::balltree, cloud);
  const auto cover = greedy_eps_net(*backend, 0.6);
  const auto graph = build_mapper_graph(cover);
  std::vector<double> f(cloud.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(cloud.point(i)[1] * 7.0);
  const auto colors = aggregate_colors(cover, ValueSeries::numeric(f), Aggregator::parse("mean"));
  const auto complex = build_k_skeleton(cover, 2);
  GraphMeta meta;
  meta.epsilon = 0.6;
  meta.backend = "balltree";
  meta.n = cloud.size();
  meta.dim = cloud.dim();
  meta.seed = 3;
  meta.aggregator = "mean";
  const auto text = to_json(make_graph_document(meta, graph, &colors, &complex));
  const bool json = to_json(graph_document_from_json(text)) == text;
  note(o, std::string("JSON round-trip ") + (json ? "byte-identical" : "DIFFERS"));

  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "ballmapper");
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return std::make_tuple(code, out.str(), err.str());
  };
  std::ofstream(dir / "pts.csv") << "0\n1\n2\n3\n10\n11\n";
  const auto pts = (dir / "pts.csv").string(), g = (dir / "g.json").string();
  fs::remove(g);
  const auto [c1, o1, e1] =
      run({"cover-graph", "--input", pts, "--epsilon", "1.5", "--backend", "balltree", "--out", g});
  const bool happy = c1 == 0 && fs::exists(g);
  const auto [c2, o2, e2] = run({"cover-graph", "--frobnicate"});
  const bool usage = c2 == 2 && e2.find("Usage") != std::string::npos;

  std::ifstream in(g);
  std::stringstream ss;
  ss << in.rdbuf();
  bool corrupt = false;
  if (happy) {
    auto doc = graph_document_from_json(ss.str());
    doc.edges.emplace_back(1, 2);
    std::ofstream(dir / "bad.json") << to_json(doc);
    const auto [c3, o3, e3] = run({"validate", "--input", pts, "--epsilon", "1.5", "--graph",
                                   (dir / "bad.json").string()});
    corrupt = c3 == 1 && o3.find("edge (1, 2)") != std::string::npos;
  }
  note(o, std::string("CLI: happy path ") + (happy ? "exit 0" : "FAILED") + ", unknown flag " +
              (usage ? "exit 2 + usage" : "FAILED") + ", corrupted graph " +
              (corrupt ? "exit 1 naming edge" : "FAILED"));
  fs::remove_all(dir);
  o.pass = csv && json && happy && usage && corrupt;
  return o;
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {"backend oracle equivalence", backend_equivalence},
    {"eps-net validity", net_validity},
    {"determinism and order-dependence", determinism},
    {"coloring bounds", coloring_bounds},
    {"nerve correctness", nerve_correctness},
    {"power-law fit", power_law},
    {"desk-scale runtime claims", runtime_claims},
    {"scaling exponents over D", scaling_exponents},
    {"memory trend over n", memory_trend},
    {"round-trips and CLI exit codes", round_trips},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) {
    for (int i = 1; i <= 10; ++i) selected.push_back(i);
  }
  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > 10) {
      std::fprintf(stderr, "unknown criterion %d\n", id);
      return 2;
    }
    const auto& c = kCriteria[id - 1];
    Outcome result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %d (%s): %s\n", result.pass ? "PASS" : "FAIL", id, c.title,
                result.detail.c_str());
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
