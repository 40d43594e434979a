#include "ballmapper/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <new>
#include <tuple>

#include "ballmapper/cover.hpp"
#include "ballmapper/error.hpp"

namespace ballmapper {

double EpsilonRule::resolve(std::size_t dim) const {
  if (kind == Kind::fixed) return value;
  return 0.5 * std::sqrt(static_cast<double>(dim) / 6.0);
}

void BenchConfig::validate() const {
  if (backends.empty() || sizes.empty() || dims.empty()) {
    throw InvalidInput("benchmark grid needs at least one backend, size and dimension");
  }
  if (trials == 0 || leaf_size == 0 || block == 0 || threads == 0) {
    throw InvalidInput("trials, leaf size, block and threads must be >= 1");
  }
  for (auto n : sizes) {
    if (n == 0) throw InvalidInput("sizes must be >= 1");
  }
  for (auto d : dims) {
    if (d == 0) throw InvalidInput("dims must be >= 1");
  }
  if (epsilon.kind == EpsilonRule::Kind::fixed && !(epsilon.value > 0.0)) {
    throw InvalidInput("fixed epsilon must be positive");
  }
}

BenchConfig paper_preset() {
  BenchConfig c;
  c.sizes = {100, 500, 1000, 2000, 5000};
  c.dims = {10, 50, 100, 200, 500, 1000};
  c.trials = 65;
  c.leaf_size = 40;
  c.threads = 12;
  return c;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Measured {
  std::size_t landmarks;
  double runtime_ms;
  MemoryMeasurement memory;
};

Measured measure_once(const BenchConfig& config, BackendKind kind, const PointCloud& cloud,
                      double eps) {
  const BackendOptions options{config.leaf_size, config.block, config.threads};
  using clock = std::chrono::steady_clock;
  std::size_t landmarks = 0;
  clock::duration elapsed{};

  std::unique_ptr<RangeBackend> prebuilt;
  if (config.time_query_only) prebuilt = make_backend(kind, cloud, options);

  const auto memory = measure_peak_memory([&] {
    const auto t0 = clock::now();
    std::unique_ptr<RangeBackend> built;
    const RangeBackend* backend = prebuilt.get();
    if (!backend) {
      built = make_backend(kind, cloud, options);
      backend = built.get();
    }
    const Cover cover = greedy_eps_net(*backend, eps);
    elapsed = clock::now() - t0;
    landmarks = cover.landmarks.size();
  });
  double ms = std::chrono::duration<double, std::milli>(elapsed).count();
  if (ms <= 0.0) ms = 1e-6;  // below clock resolution
  return {landmarks, ms, memory};
}

}  // namespace

std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::size_t n, std::size_t dim,
                               std::size_t trial) {
  std::uint64_t h = splitmix64(base_seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(n));
  h = splitmix64(h ^ static_cast<std::uint64_t>(dim));
  h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
  return h;
}

std::vector<BenchRecord> run_benchmark_suite(const BenchConfig& config,
                                             const BenchProgress& progress) {
  config.validate();
  std::vector<BenchRecord> records;
  records.reserve(config.backends.size() * config.sizes.size() * config.dims.size() *
                  config.trials);

  for (std::size_t n : config.sizes) {
    for (std::size_t dim : config.dims) {
      const double eps = config.epsilon.resolve(dim);
      if (config.warmup) {
        const auto cloud = generate_uniform_cloud(n, dim, derive_cell_seed(config.base_seed, n, dim, 0));
        for (BackendKind kind : config.backends) {
          try {
            measure_once(config, kind, cloud, eps);
          } catch (const std::bad_alloc&) {
          }
        }
      }
      for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const std::uint64_t seed = derive_cell_seed(config.base_seed, n, dim, trial);
        const auto cloud = generate_uniform_cloud(n, dim, seed);
        for (BackendKind kind : config.backends) {
          BenchRecord rec;
          rec.backend = kind;
          rec.n = n;
          rec.dim = dim;
          rec.trial = trial;
          rec.seed = seed;
          rec.epsilon = eps;
          try {
            const auto m = measure_once(config, kind, cloud, eps);
            rec.landmarks = m.landmarks;
            rec.runtime_ms = m.runtime_ms;
            rec.peak_mem_mb = m.memory.peak_mb;
            rec.mem_mode = m.memory.mode;
          } catch (const std::bad_alloc&) {
            rec.failed = true;
          } catch (const ResourceLimit&) {
            rec.failed = true;
          }
          if (progress) progress(rec);
          records.push_back(rec);
        }
      }
    }
  }
  return records;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size();
  if (m % 2 == 1) return values[m / 2];
  return (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

BenchSummary summarize_benchmarks(const std::vector<BenchRecord>& records, BackendKind baseline) {
  using Key = std::tuple<std::size_t, std::size_t, int>;  // n, D, backend
  std::map<Key, std::pair<std::vector<double>, std::vector<double>>> cells;
  bool baseline_seen = false;
  for (const auto& r : records) {
    if (r.backend == baseline) baseline_seen = true;
    if (r.failed) continue;
    auto& cell = cells[{r.n, r.dim, static_cast<int>(r.backend)}];
    cell.first.push_back(r.runtime_ms);
    cell.second.push_back(r.peak_mem_mb);
  }
  if (!baseline_seen) {
    throw InvalidInput("baseline backend '" + std::string(backend_name(baseline)) +
                       "' has no records");
  }

  BenchSummary summary;
  for (const auto& [key, samples] : cells) {
    const auto [n, dim, backend] = key;
    const auto base = cells.find({n, dim, static_cast<int>(baseline)});
    if (base == cells.end()) {
      summary.warnings.push_back("no baseline runs for n=" + std::to_string(n) +
                                 ", D=" + std::to_string(dim) + "; cell omitted");
      continue;
    }
    const double med = median(samples.first);
    summary.rows.push_back({static_cast<BackendKind>(backend), n, dim, med, median(samples.second),
                            median(base->second.first) / med});
  }
  std::stable_sort(summary.rows.begin(), summary.rows.end(), [](const auto& a, const auto& b) {
    return std::tuple(static_cast<int>(a.backend), a.n, a.dim) <
           std::tuple(static_cast<int>(b.backend), b.n, b.dim);
  });
  return summary;
}

PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("fit needs equally many x and y values");
  if (xs.size() < 2) throw InvalidInput("fit needs at least two points");
  const std::size_t m = xs.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidInput("fit needs positive values");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InvalidInput("fit needs at least two distinct x values");

  PowerLawFit fit;
  fit.p = sxy / sxx;
  const double intercept = my - fit.p * mx;
  fit.k = std::exp(intercept);
  double ss_res = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - (intercept + fit.p * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

std::vector<ScalingFit> fit_scaling_over_dim(const std::vector<SummaryRow>& rows) {
  std::map<std::pair<int, std::size_t>, std::vector<std::pair<double, double>>> groups;
  for (const auto& r : rows) {
    groups[{static_cast<int>(r.backend), r.n}].emplace_back(static_cast<double>(r.dim),
                                                            r.median_runtime_ms);
  }
  std::vector<ScalingFit> fits;
  for (auto& [key, pts] : groups) {
    std::sort(pts.begin(), pts.end());
    if (pts.size() < 2) continue;
    std::vector<double> xs, ys;
    for (const auto& [x, y] : pts) {
      xs.push_back(x);
      ys.push_back(y);
    }
    fits.push_back({static_cast<BackendKind>(key.first), "n", key.second, fit_power_law(xs, ys)});
  }
  return fits;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_records_csv(const std::vector<BenchRecord>& records) {
  std::string out = "backend,n,D,trial,seed,epsilon,landmarks,runtime_ms,peak_mem_mb,mem_mode\n";
  for (const auto& r : records) {
    out += std::string(backend_name(r.backend)) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.dim) + ',' + std::to_string(r.trial) + ',' + std::to_string(r.seed) +
           ',' + num(r.epsilon) + ',' + std::to_string(r.landmarks) + ',' + num(r.runtime_ms) +
           ',' + num(r.peak_mem_mb) + ',' +
           (r.failed ? std::string("failed") : std::string(memory_mode_name(r.mem_mode))) + '\n';
  }
  return out;
}

std::string format_summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "backend,n,D,median_runtime_ms,median_peak_mem_mb,speedup\n";
  for (const auto& r : rows) {
    out += std::string(backend_name(r.backend)) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.dim) + ',' + num(r.median_runtime_ms) + ',' +
           num(r.median_peak_mem_mb) + ',' + num(r.speedup) + '\n';
  }
  return out;
}

std::string format_fits_csv(const std::vector<ScalingFit>& fits) {
  std::string out = "backend,fixed_var,fixed_value,p,k,r_squared\n";
  for (const auto& f : fits) {
    out += std::string(backend_name(f.backend)) + ',' + f.fixed_var + ',' +
           std::to_string(f.fixed_value) + ',' + num(f.fit.p) + ',' + num(f.fit.k) + ',' +
           num(f.fit.r_squared) + '\n';
  }
  return out;
}

}  // namespace ballmapper
