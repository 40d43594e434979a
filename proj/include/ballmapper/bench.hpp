#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ballmapper/memprobe.hpp"
#include "ballmapper/rangequery.hpp"

namespace ballmapper {

struct EpsilonRule {
  enum class Kind { fixed, cube_default } kind = Kind::cube_default;
  double value = 0.0;

  static EpsilonRule fixed(double eps) { return {Kind::fixed, eps}; }
  static EpsilonRule cube_default() { return {}; }

  /// cube_default: 0.5 * sqrt(D / 6), half the large-D mean distance between
  /// two uniform points of the unit cube.
  double resolve(std::size_t dim) const;
};

struct BenchConfig {
  std::vector<BackendKind> backends{BackendKind::linear, BackendKind::balltree,
                                    BackendKind::algebraic};
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> dims;
  std::size_t trials = 1;
  EpsilonRule epsilon;
  std::size_t leaf_size = kDefaultLeafSize;
  std::size_t block = kDefaultBlock;
  std::size_t threads = 1;
  std::uint64_t base_seed = 0;
  /// Keep index construction out of the timed region.
  bool time_query_only = false;
  /// One untimed run per (cell, backend) before the measured trials.
  bool warmup = true;

  /// Throws InvalidInput unless every list is non-empty and every count >= 1.
  void validate() const;
};

/// n in {100, 500, 1000, 2000, 5000}, D in {10, 50, 100, 200, 500, 1000},
/// 65 trials, leaf size 40, 12 threads.
BenchConfig paper_preset();

struct BenchRecord {
  BackendKind backend = BackendKind::linear;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::size_t landmarks = 0;
  double runtime_ms = 0.0;
  double peak_mem_mb = 0.0;
  MemoryMode mem_mode = MemoryMode::instrumented;
  bool failed = false;
};

/// Seed of the cloud for one grid cell and trial; every backend sees the same
/// cloud there.
std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::size_t n, std::size_t dim,
                               std::size_t trial);

using BenchProgress = std::function<void(const BenchRecord&)>;

/// Times greedy eps-net construction (index order) for every
/// (n, D, trial, backend). Trials run sequentially. Allocation failures are
/// recorded as failed records and the suite continues.
std::vector<BenchRecord> run_benchmark_suite(const BenchConfig& config,
                                             const BenchProgress& progress = {});

struct SummaryRow {
  BackendKind backend;
  std::size_t n;
  std::size_t dim;
  double median_runtime_ms;
  double median_peak_mem_mb;
  double speedup;  // median baseline runtime / median runtime
};

struct BenchSummary {
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

/// Per (backend, n, D) medians over successful trials. Throws InvalidInput if
/// the baseline backend has no records at all; cells without a baseline
/// counterpart are dropped with a warning.
BenchSummary summarize_benchmarks(const std::vector<BenchRecord>& records, BackendKind baseline);

/// Middle order statistic, or the mean of the two central ones.
double median(std::vector<double> values);

struct PowerLawFit {
  double p = 0.0;  // exponent
  double k = 0.0;  // prefactor
  double r_squared = 0.0;
};

/// Least-squares line through (log x, log y): y = k * x^p. R^2 is computed in
/// log space from the fit's own residuals.
PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys);

struct ScalingFit {
  BackendKind backend;
  std::string fixed_var;
  std::size_t fixed_value;
  PowerLawFit fit;
};

/// One runtime-vs-D fit per backend and fixed n (cells with >= 2 dims).
std::vector<ScalingFit> fit_scaling_over_dim(const std::vector<SummaryRow>& rows);

std::string format_records_csv(const std::vector<BenchRecord>& records);
std::string format_summary_csv(const std::vector<SummaryRow>& rows);
std::string format_fits_csv(const std::vector<ScalingFit>& fits);

}  // namespace ballmapper
