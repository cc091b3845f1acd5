#include "pvmerge/sampling.hpp"

#include "pvmerge/error.hpp"

namespace pvmerge {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

IndependenceSampler::IndependenceSampler(std::size_t K) : K_(K) {
  if (K < 1) throw InvalidArgument("independence sampler: dimension must be positive");
}

void IndependenceSampler::draw(Rng& rng, std::span<double> out) const {
  for (double& x : out) x = rng.uniform();
}

PointSet sample_points(const CopulaSampler& sampler, std::uint64_t seed, std::size_t count) {
  PointSet points(sampler.dimension(), count);
  for_each_chunk(count, seed, 1, [&](std::size_t, std::size_t begin, std::size_t end, Rng& rng) {
    for (std::size_t i = begin; i < end; ++i) sampler.draw(rng, points[i]);
  });
  return points;
}

}  // namespace pvmerge
