#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pvmerge/sampling.hpp"

namespace pvmerge {

/// Mass on an n^K grid of cells [i/n,(i+1)/n]^K, stored row-major (the last
/// coordinate varies fastest). A copula when every axis slab carries 1/n.
class GridCopula {
 public:
  GridCopula(std::size_t K, std::size_t n, std::vector<double> mass);

  static GridCopula independence(std::size_t K, std::size_t n);
  /// Mass 1/n on each diagonal cell (i,...,i).
  static GridCopula comonotone(std::size_t K, std::size_t n);
  /// K = 2 copula sum_r w_r * P_r / n for permutations P_r; weights are
  /// normalized to sum to one.
  static GridCopula permutation_mixture(std::size_t n,
                                        const std::vector<std::vector<std::size_t>>& perms,
                                        const std::vector<double>& weights);

  std::size_t dimension() const noexcept { return K_; }
  std::size_t resolution() const noexcept { return n_; }
  std::size_t cell_count() const noexcept { return mass_.size(); }
  std::span<const double> mass() const noexcept { return mass_; }

  double at(std::span<const std::size_t> index) const;
  std::size_t flat_index(std::span<const std::size_t> index) const;
  /// Inverse of flat_index.
  void unflatten(std::size_t flat, std::span<std::size_t> index) const;

  bool operator==(const GridCopula&) const = default;

 private:
  std::size_t K_;
  std::size_t n_;
  std::vector<double> mass_;
};

struct SlabViolation {
  std::size_t axis;
  std::size_t index;
  double deviation;  // slab mass minus 1/n
};

struct MarginalReport {
  bool valid = true;
  double total_mass = 0.0;
  double min_mass = 0.0;
  std::vector<SlabViolation> violations;
};

inline constexpr double kMarginalTolerance = 1e-10;

MarginalReport validate_marginals(const GridCopula& c, double tolerance = kMarginalTolerance);

/// Picks a cell with probability proportional to its mass, then a uniform
/// point inside that cell.
class GridCopulaSampler final : public CopulaSampler {
 public:
  explicit GridCopulaSampler(GridCopula copula);
  std::size_t dimension() const override { return copula_.dimension(); }
  void draw(Rng& rng, std::span<double> out) const override;

 private:
  GridCopula copula_;
  std::vector<std::size_t> cells_;   // nonzero cells
  std::vector<double> cumulative_;  // running mass over cells_
};

PointSet sample_from_grid_copula(const GridCopula& c, std::uint64_t seed, std::size_t count);

/// {"k": K, "n": n, "mass": [row-major masses]}; doubles are written with
/// round-trip precision so a read/write cycle is bit-exact.
std::string to_json(const GridCopula& c);
GridCopula grid_copula_from_json(const std::string& text);

}  // namespace pvmerge
