#include "rebound/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace rebound {

namespace {

std::atomic<unsigned> g_override{0};
// Nested loops run inline on the calling worker.
thread_local bool t_in_worker = false;

unsigned default_threads() {
  if (const char *env = std::getenv("REBOUND_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v >= 1)
        return static_cast<unsigned>(v);
    } catch (...) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace

unsigned max_threads() {
  const unsigned o = g_override.load();
  return o ? o : default_threads();
}

void set_max_threads(unsigned n) { g_override.store(n); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body) {
  const std::size_t workers = t_in_worker ? 1 : std::min<std::size_t>(max_threads(), n);
  std::vector<std::exception_ptr> errors(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        t_in_worker = true;
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
  }
  for (auto &e : errors)
    if (e)
      std::rethrow_exception(e);
}

} // namespace rebound
