#include "pvmerge/extremal2.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pvmerge/error.hpp"
#include "pvmerge/ucp.hpp"

namespace pvmerge {

AntidiagonalCopula::AntidiagonalCopula(double t) : t_(t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("extremal copula: t must lie in [0,1]");
}

double AntidiagonalCopula::probability_sum_at_most(double s) const {
  double p = 0.0;
  if (s >= t_) p += t_;
  if (s >= 1.0 + t_) p += 1.0 - t_;
  return p;
}

double AntidiagonalCopula::marginal_cdf(std::size_t axis, double x) const {
  if (axis > 1) throw InvalidArgument("extremal copula: axis must be 0 or 1");
  // Each coordinate is uniform on [0,t] along the lower segment and uniform
  // on [t,1] along the upper one.
  const double xc = std::clamp(x, 0.0, 1.0);
  double p = 0.0;
  if (t_ > 0.0) p += t_ * std::min(xc / t_, 1.0);
  if (t_ < 1.0) p += (1.0 - t_) * std::clamp((xc - t_) / (1.0 - t_), 0.0, 1.0);
  return p;
}

AntidiagonalCopula build_extremal_copula(double t) { return AntidiagonalCopula(t); }

void ExtremalSampler::draw(Rng& rng, std::span<double> out) const {
  const double t = copula_.t();
  const double v = rng.uniform();
  if (v < t) {
    // t - w is exact for w in [t/2, t], so compute the larger coordinate
    // first and derive the smaller one from it.
    if (v >= 0.5 * t) {
      out[0] = v;
      out[1] = t - v;
    } else {
      out[1] = t - v;
      out[0] = t - out[1];
    }
  } else {
    out[0] = v;
    out[1] = std::clamp((1.0 + t) - v, 0.0, 1.0);
  }
}

PointSet sample_extremal(const AntidiagonalCopula& c, std::uint64_t seed, std::size_t count) {
  return sample_points(ExtremalSampler(c), seed, count);
}

K2UcpResult ucp_decreasing_set_k2(const DecreasingSetSpec& spec, double resolution) {
  validate_spec(spec, 2);
  if (!std::holds_alternative<set::GeneralBoundary>(spec)) {
    return {*closed_form_ucp(spec, 2), 0.0, true};
  }
  if (!(resolution > 0.0)) throw InvalidArgument("ucp_decreasing_set_k2: resolution must be positive");
  const std::array<double, 2> origin{0.0, 0.0};
  if (!contains(spec, origin)) {
    throw InvalidArgument("ucp_decreasing_set_k2: set " + describe(spec) + " is empty");
  }
  const std::array<double, 2> top{1.0, 1.0};
  if (contains(spec, top)) return {1.0, resolution, false};

  // Does the level line u_1 + u_2 = s leave the set somewhere? Monotone in s
  // because the complement of a decreasing set is increasing.
  auto leaves = [&](double s) {
    const double lo = std::max(0.0, s - 1.0);
    const double hi = std::min(1.0, s);
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / resolution));
    std::array<double, 2> p{};
    for (std::size_t i = 0; i <= steps; ++i) {
      p[0] = std::min(hi, lo + static_cast<double>(i) * resolution);
      p[1] = std::clamp(s - p[0], 0.0, 1.0);
      if (!contains(spec, p)) return true;
    }
    return false;
  };
  if (!leaves(1.0)) return {1.0, resolution, false};
  double lo = 0.0, hi = 1.0;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    (leaves(mid) ? hi : lo) = mid;
  }
  return {std::min(0.5 * (lo + hi), 1.0), resolution, false};
}

double malpha_ucp(double alpha, double epsilon) {
  if (!(alpha > 0.0)) throw InvalidArgument("malpha_ucp: alpha must be positive");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("malpha_ucp: epsilon outside [0,1]");
  return std::min(epsilon / alpha, 1.0);
}

MergingSurface surface_from_rule(const MergingRule& r, std::size_t resolution) {
  validate_rule(r, 2);
  return MergingSurface{[r](double a, double b) {
                          thread_local std::vector<double> scratch;
                          const std::array<double, 2> p{a, b};
                          return raw_value(r, p, scratch);
                        },
                        resolution, describe(r)};
}

DominationReport check_dominates_M(const MergingSurface& surface, double tolerance) {
  const std::size_t m = surface.resolution;
  if (m < 2) throw InvalidArgument("check_dominates_M: resolution must be at least 2");
  if (!surface.f) throw InvalidArgument("check_dominates_M: empty surface");
  std::vector<double> x(m);
  for (std::size_t i = 0; i < m; ++i) x[i] = static_cast<double>(i) / static_cast<double>(m - 1);
  std::vector<double> values(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) values[i * m + j] = surface.f(x[i], x[j]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double v = values[i * m + j];
      if ((i + 1 < m && values[(i + 1) * m + j] < v - tolerance) ||
          (j + 1 < m && values[i * m + j + 1] < v - tolerance)) {
        throw InvalidArgument("check_dominates_M: surface " + surface.name +
                              " is not increasing near (" + std::to_string(x[i]) + ", " +
                              std::to_string(x[j]) + ")");
      }
    }
  }
  DominationReport report;
  report.resolution = m;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < m && report.dominates; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double sum = x[i] + x[j];
      const double v = values[i * m + j];
      if (v > sum + tolerance) {
        report.dominates = false;
        report.witness = std::array<double, 2>{x[i], x[j]};
        report.witness_value = v;
        report.band_lower = sum;
        report.band_upper = v;
        break;
      }
    }
  }
  return report;
}

double three_sigma_band(double epsilon, std::size_t count) {
  if (count == 0) return 0.0;
  return 3.0 * std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(count));
}

Type1ErrorResult type1_error_mc(const MergingRule& rule, const CopulaSampler& sampler,
                                double epsilon, std::uint64_t seed, std::size_t count,
                                unsigned workers) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidArgument("type1_error_mc: epsilon outside [0,1]");
  const std::size_t K = sampler.dimension();
  validate_rule(rule, K);
  const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
  std::vector<std::size_t> per_chunk(chunks, 0);
  for_each_chunk(count, seed, workers,
                 [&](std::size_t c, std::size_t begin, std::size_t end, Rng& rng) {
                   std::vector<double> u(K), scratch;
                   std::size_t hits = 0;
                   for (std::size_t i = begin; i < end; ++i) {
                     sampler.draw(rng, u);
                     const double clipped = std::min(raw_value(rule, u, scratch), 1.0);
                     hits += clipped <= epsilon ? 1 : 0;
                   }
                   per_chunk[c] = hits;
                 });
  Type1ErrorResult r;
  for (std::size_t h : per_chunk) r.rejections += h;
  r.count = count;
  r.rate = count ? static_cast<double>(r.rejections) / static_cast<double>(count) : 0.0;
  r.epsilon = epsilon;
  r.band = three_sigma_band(epsilon, count);
  r.seed = seed;
  return r;
}

}  // namespace pvmerge
