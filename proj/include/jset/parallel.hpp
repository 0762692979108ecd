#pragma once

#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace jset {

inline int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? (int)hc : 1;
}

// Runs fn(begin, end) over disjoint contiguous chunks of [0, n).
// Callers write results into per-index slots, so the output is identical
// for any thread count.
inline void parallel_for(int64_t n, int threads,
                         const std::function<void(int64_t, int64_t)>& fn) {
  if (n <= 0) return;
  int t = resolve_threads(threads);
  if (t <= 1 || n < 2 * t) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  int64_t chunk = (n + t - 1) / t;
  for (int i = 0; i < t; i++) {
    int64_t lo = i * chunk, hi = std::min<int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

// Fixed-order pairwise summation; deterministic regardless of how the
// addends were produced.
template <class T>
T pairwise_sum(const std::vector<T>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    T s{};
    for (size_t i = lo; i < hi; i++) s += v[i];
    return s;
  }
  size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return v.empty() ? T{} : pairwise_sum(v, 0, v.size());
}

}  // namespace jset
