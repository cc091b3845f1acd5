#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace pvmerge {

template <class Body>
void for_each_chunk(std::size_t count, std::uint64_t seed, unsigned workers, Body&& body) {
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  auto run = [&](std::size_t c) {
    Rng rng(mix_seed(seed, c));
    const std::size_t begin = c * kSampleChunk;
    const std::size_t end = std::min(count, begin + kSampleChunk);
    body(c, begin, end, rng);
  };
  if (workers <= 1 || chunks <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  const std::size_t nthreads = std::min<std::size_t>(workers, chunks);
  std::vector<std::jthread> pool;
  pool.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t c = w; c < chunks; c += nthreads) run(c);
    });
  }
}

}  // namespace pvmerge
