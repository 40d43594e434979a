// Replacement global operator new/delete that feed the peak memory probe.
// Link this object into an executable to enable instrumented measurements.

#include <malloc.h>

#include <cstdlib>
#include <new>

#include "ballmapper/memprobe.hpp"

namespace {

void* counted_alloc(std::size_t size) noexcept {
  void* p = std::malloc(size == 0 ? 1 : size);
  if (p) ballmapper::detail::note_allocation(static_cast<std::int64_t>(malloc_usable_size(p)));
  return p;
}

void* counted_aligned_alloc(std::size_t size, std::align_val_t align) noexcept {
  auto a = static_cast<std::size_t>(align);
  if (a < sizeof(void*)) a = sizeof(void*);
  void* p = nullptr;
  if (posix_memalign(&p, a, size == 0 ? 1 : size) != 0) return nullptr;
  ballmapper::detail::note_allocation(static_cast<std::int64_t>(malloc_usable_size(p)));
  return p;
}

void counted_free(void* p) noexcept {
  if (!p) return;
  ballmapper::detail::note_deallocation(static_cast<std::int64_t>(malloc_usable_size(p)));
  std::free(p);
}

void* throwing_alloc(std::size_t size) {
  void* p = counted_alloc(size);
  while (!p) {
    std::new_handler handler = std::get_new_handler();
    if (!handler) throw std::bad_alloc();
    handler();
    p = counted_alloc(size);
  }
  return p;
}

void* throwing_aligned_alloc(std::size_t size, std::align_val_t align) {
  void* p = counted_aligned_alloc(size, align);
  if (!p) throw std::bad_alloc();
  return p;
}

struct Registration {
  Registration() {
    ballmapper::detail::alloc_counters().hooks_installed.store(true, std::memory_order_relaxed);
  }
} const registration;

}  // namespace

void* operator new(std::size_t size) { return throwing_alloc(size); }
void* operator new[](std::size_t size) { return throwing_alloc(size); }
void* operator new(std::size_t size, const std::nothrow_t&) noexcept { return counted_alloc(size); }
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept {
  return counted_alloc(size);
}
void* operator new(std::size_t size, std::align_val_t al) { return throwing_aligned_alloc(size, al); }
void* operator new[](std::size_t size, std::align_val_t al) {
  return throwing_aligned_alloc(size, al);
}
void* operator new(std::size_t size, std::align_val_t al, const std::nothrow_t&) noexcept {
  return counted_aligned_alloc(size, al);
}
void* operator new[](std::size_t size, std::align_val_t al, const std::nothrow_t&) noexcept {
  return counted_aligned_alloc(size, al);
}

void operator delete(void* p) noexcept { counted_free(p); }
void operator delete[](void* p) noexcept { counted_free(p); }
void operator delete(void* p, std::size_t) noexcept { counted_free(p); }
void operator delete[](void* p, std::size_t) noexcept { counted_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { counted_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { counted_free(p); }
void operator delete(void* p, std::align_val_t) noexcept { counted_free(p); }
void operator delete[](void* p, std::align_val_t) noexcept { counted_free(p); }
void operator delete(void* p, std::size_t, std::align_val_t) noexcept { counted_free(p); }
void operator delete[](void* p, std::size_t, std::align_val_t) noexcept { counted_free(p); }
void operator delete(void* p, std::align_val_t, const std::nothrow_t&) noexcept { counted_free(p); }
void operator delete[](void* p, std::align_val_t, const std::nothrow_t&) noexcept {
  counted_free(p);
}
