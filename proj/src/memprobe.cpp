#include "ballmapper/memprobe.hpp"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <mutex>
#include <thread>

#include "ballmapper/error.hpp"

namespace ballmapper {

namespace detail {

namespace {
constinit AllocCounters g_counters;
std::atomic<bool> g_probe_active{false};
}  // namespace

AllocCounters& alloc_counters() noexcept { return g_counters; }

std::int64_t resident_set_bytes() {
  std::FILE* f = std::fopen("/proc/self/statm", "r");
  if (!f) return 0;
  long size = 0, resident = 0;
  const int got = std::fscanf(f, "%ld %ld", &size, &resident);
  std::fclose(f);
  if (got != 2) return 0;
  return static_cast<std::int64_t>(resident) * sysconf(_SC_PAGESIZE);
}

}  // namespace detail

std::string_view memory_mode_name(MemoryMode mode) {
  return mode == MemoryMode::instrumented ? "instrumented" : "sampled";
}

struct PeakMemoryProbe::Sampler {
  std::mutex mu;
  std::condition_variable cv;
  bool stop = false;
  std::int64_t peak = 0;
  std::thread thread;

  void run() {
    std::unique_lock lock(mu);
    while (!stop) {
      lock.unlock();
      const std::int64_t rss = detail::resident_set_bytes();
      lock.lock();
      if (rss > peak) peak = rss;
      cv.wait_for(lock, std::chrono::milliseconds(5), [this] { return stop; });
    }
  }
};

PeakMemoryProbe::PeakMemoryProbe() = default;

PeakMemoryProbe::~PeakMemoryProbe() {
  if (running_) stop();
}

bool PeakMemoryProbe::instrumentation_available() {
  return detail::alloc_counters().hooks_installed.load(std::memory_order_relaxed);
}

void PeakMemoryProbe::start() {
  bool expected = false;
  if (!detail::g_probe_active.compare_exchange_strong(expected, true)) {
    throw InvalidState("a peak memory probe is already running");
  }
  running_ = true;
  auto& c = detail::alloc_counters();
  if (instrumentation_available()) {
    baseline_ = c.live.load(std::memory_order_relaxed);
    c.peak.store(baseline_, std::memory_order_relaxed);
    c.tracking_peak.store(true, std::memory_order_seq_cst);
    return;
  }
  baseline_ = detail::resident_set_bytes();
  sampler_ = std::make_unique<Sampler>();
  sampler_->peak = baseline_;
  sampler_->thread = std::thread([s = sampler_.get()] { s->run(); });
}

MemoryMeasurement PeakMemoryProbe::stop() {
  if (!running_) throw InvalidState("peak memory probe is not running");
  MemoryMeasurement m;
  if (sampler_) {
    const std::int64_t last = detail::resident_set_bytes();
    {
      std::lock_guard lock(sampler_->mu);
      sampler_->stop = true;
      if (last > sampler_->peak) sampler_->peak = last;
    }
    sampler_->cv.notify_all();
    sampler_->thread.join();
    m.mode = MemoryMode::sampled;
    m.peak_mb = static_cast<double>(std::max<std::int64_t>(0, sampler_->peak - baseline_)) / 1e6;
    sampler_.reset();
  } else {
    auto& c = detail::alloc_counters();
    c.tracking_peak.store(false, std::memory_order_seq_cst);
    const std::int64_t peak = c.peak.load(std::memory_order_relaxed);
    m.mode = MemoryMode::instrumented;
    m.peak_mb = static_cast<double>(std::max<std::int64_t>(0, peak - baseline_)) / 1e6;
  }
  running_ = false;
  detail::g_probe_active.store(false);
  return m;
}

}  // namespace ballmapper
