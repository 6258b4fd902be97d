#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace dysonrg {

// Worker count: RG_THREADS caps it, hardware concurrency is the default.
int thread_budget();

// Splits [0, n) into a fixed number of chunks (independent of the worker
// count), reduces each chunk with chunk_fn(begin, end) -> Partial, and folds
// the partials in chunk order. Identical results for any RG_THREADS.
template <class Partial, class ChunkFn, class FoldFn>
Partial parallel_chunk_reduce(std::uint64_t n, ChunkFn chunk_fn, Partial init,
                              FoldFn fold) {
  constexpr std::uint64_t kChunks = 64;
  const std::uint64_t chunks = n < kChunks ? (n > 0 ? n : 1) : kChunks;
  std::vector<Partial> partials(chunks, init);
  const int workers = std::min<std::uint64_t>(thread_budget(), chunks);
  std::atomic<std::uint64_t> cursor{0};
  auto work = [&]() {
    for (std::uint64_t i = cursor.fetch_add(1); i < chunks; i = cursor.fetch_add(1)) {
      const std::uint64_t begin = n * i / chunks;
      const std::uint64_t end = n * (i + 1) / chunks;
      partials[i] = chunk_fn(begin, end);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  Partial total = init;
  for (const Partial& p : partials) total = fold(total, p);
  return total;
}

}  // namespace dysonrg
