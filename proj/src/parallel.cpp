#include "fglm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fglm {

namespace {
std::atomic<Index> g_thread_limit{0};

Index env_thread_count() {
  if (const char* env = std::getenv("FGLM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<Index>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<Index>(hw) : 1;
}
} // namespace

Index thread_count() {
  const Index limit = g_thread_limit.load();
  return limit > 0 ? limit : env_thread_count();
}

void set_thread_limit(Index limit) { g_thread_limit.store(limit > 0 ? limit : 0); }

void parallel_for(Index begin, Index end, const std::function<void(Index)>& fn) {
  const Index n = end - begin;
  if (n <= 0) return;

  const Index workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (Index i = begin; i < end; ++i) fn(i);
    return;
  }

  // Contiguous static blocks; block boundaries depend only on n and workers.
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;

  for (Index w = 0; w < workers; ++w) {
    const Index lo = begin + n * w / workers;
    const Index hi = begin + n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (Index i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace fglm
