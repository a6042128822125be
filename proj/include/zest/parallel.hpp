#pragma once

// Deterministic fork-join helper: results depend only on the index, never on
// the number of workers, so any artifact built from the output is
// byte-identical across thread counts.

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace zest {

// Number of workers to use when the caller passes 0 ("all available").
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Evaluates fn(i) for i in [0, n) and returns the results in index order.
// The index range is split into contiguous blocks, one asynchronous task per
// block; each task writes only its own slots.  Exceptions thrown by fn
// propagate to the caller (the first failing block reports).
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, Fn&& fn, int threads = 0) {
  std::vector<T> out(n);
  if (n == 0) return out;
  const std::size_t nt =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_threads(threads)), n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  const std::size_t chunk = (n + nt - 1) / nt;
  std::vector<std::future<void>> tasks;
  tasks.reserve(nt);
  for (std::size_t lo = 0; lo < n; lo += chunk) {
    const std::size_t hi = std::min(n, lo + chunk);
    tasks.push_back(std::async(std::launch::async, [&out, &fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = fn(i);
    }));
  }
  for (auto& t : tasks) t.get();
  return out;
}

}  // namespace zest
