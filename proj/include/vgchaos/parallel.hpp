#pragma once

#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace vgc {

/// Runs fn(i) for i in [0, n) across a thread pool. Each index writes only its
/// own output slot, so results do not depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::future<void>> futs;
  futs.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    }));
  }
  for (auto& f : futs) f.get();
}

}  // namespace vgc
