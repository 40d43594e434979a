#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>

namespace ballmapper {

enum class MemoryMode { instrumented, sampled };

std::string_view memory_mode_name(MemoryMode mode);

struct MemoryMeasurement {
  double peak_mb = 0.0;  // 1 MB = 10^6 bytes
  MemoryMode mode = MemoryMode::instrumented;
};

/// Resident-set growth attributable to the sampling thread itself (its stack
/// and bookkeeping); sampled readings at or below this are noise.
inline constexpr double kSampledProbeOverheadMb = 1.0;

/// Process-global high-water-mark probe for one measured region at a time.
///
/// When the allocator hooks (ballmapper_alloc_hooks) are linked into the
/// executable, the probe reports the peak of bytes live-allocated through
/// operator new during the region, relative to the level at start(). Without
/// them it polls the resident set size from a background thread at 200 Hz
/// and reports the growth over the starting RSS.
class PeakMemoryProbe {
 public:
  PeakMemoryProbe();
  ~PeakMemoryProbe();
  PeakMemoryProbe(const PeakMemoryProbe&) = delete;
  PeakMemoryProbe& operator=(const PeakMemoryProbe&) = delete;

  /// Throws InvalidState if any probe is already running.
  void start();
  MemoryMeasurement stop();

  static bool instrumentation_available();

 private:
  struct Sampler;
  std::unique_ptr<Sampler> sampler_;
  std::int64_t baseline_ = 0;
  bool running_ = false;
};

template <typename Fn>
MemoryMeasurement measure_peak_memory(Fn&& region) {
  PeakMemoryProbe probe;
  probe.start();
  try {
    std::forward<Fn>(region)();
  } catch (...) {
    probe.stop();
    throw;
  }
  return probe.stop();
}

namespace detail {

// Shared with the allocator hooks. All fields are constant-initialized so the
// hooks can run before any dynamic initialization.
struct AllocCounters {
  std::atomic<std::int64_t> live{0};
  std::atomic<std::int64_t> peak{0};
  std::atomic<bool> tracking_peak{false};
  std::atomic<bool> hooks_installed{false};
};

AllocCounters& alloc_counters() noexcept;

inline void note_allocation(std::int64_t bytes) noexcept {
  auto& c = alloc_counters();
  const std::int64_t now = c.live.fetch_add(bytes, std::memory_order_relaxed) + bytes;
  if (c.tracking_peak.load(std::memory_order_relaxed)) {
    std::int64_t prev = c.peak.load(std::memory_order_relaxed);
    while (now > prev && !c.peak.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
  }
}

inline void note_deallocation(std::int64_t bytes) noexcept {
  alloc_counters().live.fetch_sub(bytes, std::memory_order_relaxed);
}

/// Current resident set size in bytes, from /proc/self/statm.
std::int64_t resident_set_bytes();

}  // namespace detail

}  // namespace ballmapper
