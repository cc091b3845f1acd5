#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "pvmerge/decreasing_set.hpp"
#include "pvmerge/merge.hpp"
#include "pvmerge/sampling.hpp"

namespace pvmerge {

/// The bivariate copula putting mass t uniformly on the segment from (t,0)
/// to (0,t) and mass 1-t uniformly on the segment from (t,1) to (1,t).
/// It assigns probability exactly t to {u_1 + u_2 <= t}.
class AntidiagonalCopula {
 public:
  explicit AntidiagonalCopula(double t);

  double t() const noexcept { return t_; }
  /// Exact probability of {u_1 + u_2 <= s}.
  double probability_sum_at_most(double s) const;
  /// Exact marginal distribution function; equals x on [0,1] for both axes.
  double marginal_cdf(std::size_t axis, double x) const;

 private:
  double t_;
};

AntidiagonalCopula build_extremal_copula(double t);

class ExtremalSampler final : public CopulaSampler {
 public:
  explicit ExtremalSampler(AntidiagonalCopula copula) : copula_(copula) {}
  std::size_t dimension() const override { return 2; }
  /// One uniform v: v < t lands on the lower segment (v, t - v), otherwise
  /// on the upper one (v, 1 + t - v). On the lower segment the coordinates
  /// are arranged so that u_1 + u_2 == t holds exactly in floating point.
  void draw(Rng& rng, std::span<double> out) const override;

 private:
  AntidiagonalCopula copula_;
};

PointSet sample_extremal(const AntidiagonalCopula& c, std::uint64_t seed, std::size_t count);

struct K2UcpResult {
  double value = 0.0;
  double resolution = 0.0;  // 0 for closed forms, search resolution otherwise
  bool closed_form = true;
};

inline constexpr double kBoundarySearchResolution = 1e-6;

/// Upper copular probability of a nonempty decreasing set in [0,1]^2:
/// min(inf{u_1 + u_2 : u outside the set}, 1). Closed form for the named
/// set families; GeneralBoundary is searched by bisection over the level
/// lines u_1 + u_2 = s, each probed at the given spacing.
K2UcpResult ucp_decreasing_set_k2(const DecreasingSetSpec& spec,
                                  double resolution = kBoundarySearchResolution);

/// Upper copular probability of {alpha (u_1 + u_2) <= epsilon}.
double malpha_ucp(double alpha, double epsilon);

/// A K = 2 merging function evaluated on the (m x m) grid {i/(m-1)}^2.
struct MergingSurface {
  std::function<double(double, double)> f;
  std::size_t resolution = 201;
  std::string name = "surface";
};

/// Raw (unclipped) values of a merge rule at K = 2.
MergingSurface surface_from_rule(const MergingRule& r, std::size_t resolution = 201);

struct DominationReport {
  bool dominates = true;
  std::optional<std::array<double, 2>> witness;
  double witness_value = 0.0;
  /// When a witness exists, every epsilon strictly inside (band_lower,
  /// band_upper) has ucp(f <= epsilon) < epsilon, so f is not precise.
  double band_lower = 0.0;
  double band_upper = 0.0;
  std::size_t resolution = 0;
  double tolerance = 0.0;
};

inline constexpr double kSurfaceTolerance = 1e-12;

/// Checks f(u) <= u_1 + u_2 on the grid. Throws InvalidArgument if f is seen
/// to decrease along either axis.
DominationReport check_dominates_M(const MergingSurface& surface,
                                   double tolerance = kSurfaceTolerance);

struct Type1ErrorResult {
  std::size_t rejections = 0;
  std::size_t count = 0;
  double rate = 0.0;
  double epsilon = 0.0;
  double band = 0.0;  // three binomial standard deviations at rate epsilon
  std::uint64_t seed = 0;

  /// rate <= epsilon + band
  bool within_band() const { return rate <= epsilon + band; }
};

/// 3 sqrt(eps (1 - eps) / count)
double three_sigma_band(double epsilon, std::size_t count);

/// Fraction of draws from `sampler` whose clipped merged value is <= epsilon.
/// The count is the same for every worker count.
Type1ErrorResult type1_error_mc(const MergingRule& rule, const CopulaSampler& sampler,
                                double epsilon, std::uint64_t seed, std::size_t count,
                                unsigned workers = 1);

}  // namespace pvmerge
