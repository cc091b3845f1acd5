#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

namespace pvmerge {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded 64-bit Mersenne Twister with a portable [0,1) draw.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// 53-bit uniform in [0,1); identical across standard libraries.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

/// Samples are produced in fixed-size chunks; chunk c draws from
/// Rng(mix_seed(seed, c)). Any split of chunks across workers therefore
/// reproduces the sequential stream exactly.
inline constexpr std::size_t kSampleChunk = 1 << 16;

/// Row-major list of points in [0,1]^dim.
class PointSet {
 public:
  PointSet(std::size_t dim, std::size_t count) : dim_(dim), coords_(dim * count) {}

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  std::span<double> operator[](std::size_t i) { return {coords_.data() + i * dim_, dim_}; }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
};

/// A law on [0,1]^K with uniform marginals.
class CopulaSampler {
 public:
  virtual ~CopulaSampler() = default;
  virtual std::size_t dimension() const = 0;
  /// Writes one draw into `out` (size dimension()).
  virtual void draw(Rng& rng, std::span<double> out) const = 0;
};

class IndependenceSampler final : public CopulaSampler {
 public:
  explicit IndependenceSampler(std::size_t K);
  std::size_t dimension() const override { return K_; }
  void draw(Rng& rng, std::span<double> out) const override;

 private:
  std::size_t K_;
};

/// Draws `count` points using the chunked seeding scheme above.
PointSet sample_points(const CopulaSampler& sampler, std::uint64_t seed, std::size_t count);

/// Runs `body(chunk_index, begin, end, rng)` for each chunk of [0,count),
/// spreading chunks over `workers` threads. Chunk seeding is fixed, so the
/// union of work is independent of the worker count.
template <class Body>
void for_each_chunk(std::size_t count, std::uint64_t seed, unsigned workers, Body&& body);

}  // namespace pvmerge

#include "pvmerge/detail/chunked.hpp"
