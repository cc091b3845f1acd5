#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pvmerge {

/// Slack applied to every boundary comparison so that corners lying exactly
/// on a closed boundary (e.g. i/n + j/n == s) stay inside despite rounding.
inline constexpr double kBoundaryTolerance = 1e-12;

namespace set {
/// {u : u_1 + ... + u_K <= s}
struct SumThreshold {
  double s = 0.0;
};
/// {u : #{k : u_k <= alpha} >= order}
struct RugerSet {
  double alpha = 0.0;
  std::size_t order = 1;
};
/// [0,u_1] x ... x [0,u_K]
struct Box {
  std::vector<double> upper;
};
/// Caller-supplied indicator declared decreasing. `symmetric` declares
/// invariance under coordinate permutations.
struct GeneralBoundary {
  std::function<bool(std::span<const double>)> contains;
  std::string name = "general";
  bool symmetric = false;
};
}  // namespace set

using DecreasingSetSpec =
    std::variant<set::SumThreshold, set::RugerSet, set::Box, set::GeneralBoundary>;

/// Throws InvalidArgument when the spec cannot describe a subset of [0,1]^K.
void validate_spec(const DecreasingSetSpec& spec, std::size_t K);

bool contains(const DecreasingSetSpec& spec, std::span<const double> u);

/// True when the indicator is invariant under coordinate permutations.
bool is_symmetric(const DecreasingSetSpec& spec);

std::string describe(const DecreasingSetSpec& spec);

/// Randomized check of the decreasing property: draws pairs v <= u and
/// reports whether any has u inside and v outside.
bool spot_check_decreasing(const DecreasingSetSpec& spec, std::size_t K, std::uint64_t seed,
                           std::size_t trials = 2000);

}  // namespace pvmerge
