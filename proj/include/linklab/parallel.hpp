#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace linklab {

/// Worker count: hardware concurrency, capped by LINKLAB_THREADS when set.
inline int worker_count() {
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LINKLAB_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) workers = std::min(workers, cap);
    } catch (...) {
      // malformed value: ignore the cap
    }
  }
  return workers;
}

/// Runs body(block) for every block in [0, blocks). Each block must write only
/// its own output slot; results never depend on the worker count.
template <class Body>
void for_each_block(int blocks, int workers, Body&& body) {
  workers = std::max(1, std::min(workers, blocks));
  if (workers == 1) {
    for (int b = 0; b < blocks; ++b) body(b);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) body(b);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace linklab
