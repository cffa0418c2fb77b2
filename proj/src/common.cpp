// Copyright 2026 the varmeta authors
// SPDX-License-Identifier: Apache-2.0

#include "varmeta/common.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace varmeta {

namespace {

int g_threads = 0;  // 0 = uninitialized
std::atomic<bool> g_deterministic{false};

int env_threads() {
  if (const char* s = std::getenv("VARMETA_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

// Block size is fixed so the block decomposition (and hence any block-ordered
// reduction) is independent of the thread count.
constexpr std::size_t kBlock = 64;

}  // namespace

void set_num_threads(int n) { g_threads = std::max(1, n); }

int num_threads() {
  if (deterministic()) return 1;
  if (g_threads == 0) g_threads = env_threads();
  return g_threads;
}

void set_deterministic(bool on) { g_deterministic = on; }

bool deterministic() { return g_deterministic; }

void parallel_for_blocks(std::size_t count,
                         const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t nblocks = (count + kBlock - 1) / kBlock;
  const int nt = std::min<std::size_t>(num_threads(), nblocks);
  if (nt <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b)
      fn(b * kBlock, std::min(count, (b + 1) * kBlock));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t b = next.fetch_add(1);
        if (b >= nblocks) break;
        fn(b * kBlock, std::min(count, (b + 1) * kBlock));
      }
    });
  }
  for (auto& th : pool) th.join();
}

double parallel_reduce_sum(std::size_t count,
                           const std::function<double(std::size_t, std::size_t)>& partial) {
  if (count == 0) return 0.0;
  const std::size_t nblocks = (count + kBlock - 1) / kBlock;
  std::vector<double> partials(nblocks, 0.0);
  parallel_for_blocks(count, [&](std::size_t begin, std::size_t end) {
    partials[begin / kBlock] = partial(begin, end);
  });
  double sum = 0.0;
  for (double p : partials) sum += p;  // block order: deterministic
  return sum;
}

}  // namespace varmeta
