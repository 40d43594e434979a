#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "ballmapper/bench.hpp"
#include "ballmapper/error.hpp"

using namespace ballmapper;

namespace {

BenchRecord record(BackendKind b, std::size_t n, std::size_t dim, std::size_t trial, double ms) {
  BenchRecord r;
  r.backend = b;
  r.n = n;
  r.dim = dim;
  r.trial = trial;
  r.landmarks = 1;
  r.runtime_ms = ms;
  r.peak_mem_mb = ms / 10;
  return r;
}

}  // namespace

TEST_CASE("suite produces one record per grid point") {
  BenchConfig config;
  config.sizes = {30, 60};
  config.dims = {2, 5};
  config.trials = 5;
  config.base_seed = 3;
  const auto records = run_benchmark_suite(config);
  CHECK(records.size() == 60);

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::size_t> landmarks;
  for (const auto& r : records) {
    CHECK_FALSE(r.failed);
    CHECK(r.runtime_ms > 0.0);
    CHECK(r.landmarks >= 1);
    CHECK(r.peak_mem_mb >= 0.0);
    CHECK(r.epsilon == EpsilonRule::cube_default().resolve(r.dim));
    CHECK(r.seed == derive_cell_seed(3, r.n, r.dim, r.trial));
    const auto key = std::make_tuple(r.n, r.dim, r.trial);
    const auto [it, fresh] = landmarks.emplace(key, r.landmarks);
    if (!fresh) CHECK(it->second == r.landmarks);
  }
}

TEST_CASE("config validation and preset") {
  BenchConfig config;
  CHECK_THROWS_AS(config.validate(), InvalidInput);
  config.sizes = {10};
  config.dims = {2};
  config.trials = 0;
  CHECK_THROWS_AS(config.validate(), InvalidInput);
  config.trials = 1;
  CHECK_NOTHROW(config.validate());
  config.epsilon = EpsilonRule::fixed(0.0);
  CHECK_THROWS_AS(config.validate(), InvalidInput);

  const auto paper = paper_preset();
  CHECK(paper.sizes == std::vector<std::size_t>{100, 500, 1000, 2000, 5000});
  CHECK(paper.dims == std::vector<std::size_t>{10, 50, 100, 200, 500, 1000});
  CHECK(paper.trials == 65);
  CHECK(paper.leaf_size == 40);
  CHECK(paper.threads == 12);
}

TEST_CASE("epsilon rule") {
  CHECK(EpsilonRule::cube_default().resolve(6) == 0.5);
  CHECK(EpsilonRule::cube_default().resolve(24) == 1.0);
  CHECK(EpsilonRule::fixed(0.3).resolve(100) == 0.3);
}

TEST_CASE("cell seeds") {
  CHECK(derive_cell_seed(1, 100, 10, 0) == derive_cell_seed(1, 100, 10, 0));
  CHECK(derive_cell_seed(1, 100, 10, 0) != derive_cell_seed(1, 100, 10, 1));
  CHECK(derive_cell_seed(1, 100, 10, 0) != derive_cell_seed(1, 10, 100, 0));
  CHECK(derive_cell_seed(1, 100, 10, 0) != derive_cell_seed(2, 100, 10, 0));
}

TEST_CASE("summary speedups") {
  std::vector<BenchRecord> records;
  for (std::size_t t = 0; t < 5; ++t) {
    records.push_back(record(BackendKind::linear, 100, 10, t, 10.0 + t));
    records.push_back(record(BackendKind::algebraic, 100, 10, t, (10.0 + t) / 2));
  }
  const auto summary = summarize_benchmarks(records, BackendKind::linear);
  REQUIRE(summary.rows.size() == 2);
  for (const auto& row : summary.rows) {
    if (row.backend == BackendKind::linear) {
      CHECK(row.speedup == 1.0);
      CHECK(row.median_runtime_ms == 12.0);
    } else {
      CHECK(row.speedup == 2.0);
    }
  }
  CHECK(summary.warnings.empty());

  records.push_back(record(BackendKind::balltree, 500, 10, 0, 1.0));
  const auto partial = summarize_benchmarks(records, BackendKind::linear);
  CHECK(partial.rows.size() == 2);
  CHECK(partial.warnings.size() == 1);

  std::vector<BenchRecord> no_baseline{record(BackendKind::algebraic, 1, 1, 0, 1.0)};
  CHECK_THROWS_AS(summarize_benchmarks(no_baseline, BackendKind::linear), InvalidInput);
}

TEST_CASE("failed trials are left out of medians") {
  std::vector<BenchRecord> records{record(BackendKind::linear, 10, 2, 0, 4.0),
                                   record(BackendKind::linear, 10, 2, 1, 1000.0)};
  records[1].failed = true;
  const auto summary = summarize_benchmarks(records, BackendKind::linear);
  REQUIRE(summary.rows.size() == 1);
  CHECK(summary.rows[0].median_runtime_ms == 4.0);
}

TEST_CASE("median") {
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t m = 1 + 2 * (rng() % 20);
    std::vector<double> v(m);
    for (auto& x : v) x = std::uniform_real_distribution<double>(0, 100)(rng);
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(median(v) == sorted[m / 2]);
    std::shuffle(v.begin(), v.end(), rng);
    CHECK(median(v) == sorted[m / 2]);
  }
  CHECK(median({1, 2, 3, 10}) == 2.5);
  CHECK_THROWS_AS(median({}), InvalidInput);
}

TEST_CASE("power-law fit on exact data") {
  const std::vector<double> xs{10, 50, 100, 200, 500, 1000};
  std::vector<double> sq, scaled;
  for (double x : xs) {
    sq.push_back(x * x);
    scaled.push_back(3 * std::pow(x, 1.5));
  }
  const auto a = fit_power_law(xs, sq);
  CHECK(std::abs(a.p - 2.0) <= 1e-9);
  CHECK(std::abs(a.k - 1.0) <= 1e-9);
  CHECK(std::abs(a.r_squared - 1.0) <= 1e-9);
  const auto b = fit_power_law(xs, scaled);
  CHECK(std::abs(b.p - 1.5) <= 1e-9);
  CHECK(std::abs(b.k - 3.0) <= 1e-9);
  CHECK(std::abs(b.r_squared - 1.0) <= 1e-9);
}

TEST_CASE("power-law fit argument errors") {
  const std::vector<double> one{1}, two{1, 2}, neg{-1, 2}, same{3, 3};
  CHECK_THROWS_AS(fit_power_law(one, one), InvalidInput);
  CHECK_THROWS_AS(fit_power_law(two, one), InvalidInput);
  CHECK_THROWS_AS(fit_power_law(neg, two), InvalidInput);
  CHECK_THROWS_AS(fit_power_law(two, neg), InvalidInput);
  CHECK_THROWS_AS(fit_power_law(same, two), InvalidInput);
}

TEST_CASE("power-law fit under lognormal noise") {
  const std::vector<double> xs{10, 50, 100, 200, 500, 1000};
  int good = 0;
  for (std::uint32_t seed = 0; seed < 100; ++seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> ys;
    for (double x : xs) ys.push_back(2.0 * std::pow(x, 1.8) * std::exp(noise(rng)));
    const auto fit = fit_power_law(xs, ys);
    if (std::abs(fit.p - 1.8) <= 0.1 && fit.r_squared >= 0.9) ++good;
  }
  CHECK(good >= 95);
}

TEST_CASE("scaling fits over dimension") {
  std::vector<SummaryRow> rows;
  for (std::size_t d : {10u, 100u, 1000u}) {
    rows.push_back({BackendKind::linear, 200, d, 0.5 * double(d) * d, 1.0, 1.0});
    rows.push_back({BackendKind::algebraic, 200, d, double(d), 1.0, 1.0});
  }
  rows.push_back({BackendKind::linear, 400, 10, 1.0, 1.0, 1.0});  // one dim only: no fit
  const auto fits = fit_scaling_over_dim(rows);
  REQUIRE(fits.size() == 2);
  for (const auto& f : fits) {
    CHECK(f.fixed_var == "n");
    CHECK(f.fixed_value == 200);
    CHECK(f.fit.p == doctest::Approx(f.backend == BackendKind::linear ? 2.0 : 1.0));
  }
}

TEST_CASE("csv layouts") {
  auto r = record(BackendKind::balltree, 100, 10, 2, 1.5);
  const auto records = format_records_csv({r});
  CHECK(records.rfind(
            "backend,n,D,trial,seed,epsilon,landmarks,runtime_ms,peak_mem_mb,mem_mode\n", 0) == 0);
  CHECK(records.find("balltree,100,10,2,") != std::string::npos);
  CHECK(format_summary_csv({}) == "backend,n,D,median_runtime_ms,median_peak_mem_mb,speedup\n");
  CHECK(format_fits_csv({}) == "backend,fixed_var,fixed_value,p,k,r_squared\n");
}
