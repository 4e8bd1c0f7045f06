#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace symring {

/* Runs f(i) for i in [0, n). Each index is processed exactly once; callers
   must write results only into per-index slots so the outcome is identical
   for any thread count. */
template <typename F>
void parallel_for_indices(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  const std::size_t block = 32;
  auto worker = [&] {
    while (true) {
      std::size_t begin = next.fetch_add(block);
      if (begin >= n) return;
      std::size_t end = std::min(begin + block, n);
      for (std::size_t i = begin; i < end; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  int count = std::min<int>(threads, static_cast<int>((n + block - 1) / block));
  for (int t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace symring
