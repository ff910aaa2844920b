#include "ultra/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace ultra {

namespace {

std::atomic<std::size_t> configured_threads{0};

std::size_t default_threads() {
  if (const char* env = std::getenv("ULTRA_THREADS")) {
    try {
      const auto v = std::stoul(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

}  // namespace

std::size_t thread_count() {
  const auto v = configured_threads.load();
  return v > 0 ? v : default_threads();
}

void set_thread_count(std::size_t count) { configured_threads.store(count); }

void parallel_for(std::size_t chunks, const std::function<void(std::size_t)>& task) {
  const std::size_t workers = std::min(thread_count(), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) task(c);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      try {
        task(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };

  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
  }
  if (failure) std::rethrow_exception(failure);
}

ScopedThreadCount::ScopedThreadCount(std::size_t count) : previous_(configured_threads.load()) {
  set_thread_count(count);
}

ScopedThreadCount::~ScopedThreadCount() { set_thread_count(previous_); }

}  // namespace ultra
