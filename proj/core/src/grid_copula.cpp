#include "pvmerge/grid_copula.hpp"

#include <algorithm>
#include <cmath>

#include "pvmerge/error.hpp"

namespace pvmerge {

namespace {

std::size_t checked_power(std::size_t n, std::size_t K) {
  std::size_t cells = 1;
  for (std::size_t k = 0; k < K; ++k) {
    if (n != 0 && cells > SIZE_MAX / n) throw ResourceError("grid copula: n^K overflows");
    cells *= n;
  }
  return cells;
}

}  // namespace

GridCopula::GridCopula(std::size_t K, std::size_t n, std::vector<double> mass)
    : K_(K), n_(n), mass_(std::move(mass)) {
  if (K < 2) throw InvalidArgument("grid copula: dimension K must be at least 2");
  if (n < 1) throw InvalidArgument("grid copula: resolution n must be at least 1");
  if (mass_.size() != checked_power(n, K)) {
    throw InvalidArgument("grid copula: expected " + std::to_string(checked_power(n, K)) +
                          " cell masses, got " + std::to_string(mass_.size()));
  }
  for (double m : mass_) {
    if (!std::isfinite(m)) throw InvalidArgument("grid copula: non-finite cell mass");
  }
}

GridCopula GridCopula::independence(std::size_t K, std::size_t n) {
  const std::size_t cells = checked_power(n, K);
  return GridCopula(K, n, std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
}

GridCopula GridCopula::comonotone(std::size_t K, std::size_t n) {
  std::vector<double> mass(checked_power(n, K), 0.0);
  std::size_t stride = 0;  // flat offset between (i,...,i) and (i+1,...,i+1)
  for (std::size_t k = 0, p = 1; k < K; ++k, p *= n) stride += p;
  for (std::size_t i = 0; i < n; ++i) mass[i * stride] = 1.0 / static_cast<double>(n);
  return GridCopula(K, n, std::move(mass));
}

GridCopula GridCopula::permutation_mixture(std::size_t n,
                                           const std::vector<std::vector<std::size_t>>& perms,
                                           const std::vector<double>& weights) {
  if (perms.empty() || perms.size() != weights.size()) {
    throw InvalidArgument("permutation mixture: need one weight per permutation");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw InvalidArgument("permutation mixture: negative weight");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("permutation mixture: weights sum to zero");
  std::vector<double> mass(n * n, 0.0);
  for (std::size_t r = 0; r < perms.size(); ++r) {
    const auto& p = perms[r];
    std::vector<bool> seen(n, false);
    if (p.size() != n) throw InvalidArgument("permutation mixture: permutation has wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] >= n || seen[p[i]]) throw InvalidArgument("permutation mixture: not a permutation");
      seen[p[i]] = true;
      mass[i * n + p[i]] += weights[r] / total / static_cast<double>(n);
    }
  }
  return GridCopula(2, n, std::move(mass));
}

double GridCopula::at(std::span<const std::size_t> index) const { return mass_[flat_index(index)]; }

std::size_t GridCopula::flat_index(std::span<const std::size_t> index) const {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < K_; ++k) flat = flat * n_ + index[k];
  return flat;
}

void GridCopula::unflatten(std::size_t flat, std::span<std::size_t> index) const {
  for (std::size_t k = K_; k-- > 0;) {
    index[k] = flat % n_;
    flat /= n_;
  }
}

MarginalReport validate_marginals(const GridCopula& c, double tolerance) {
  const std::size_t K = c.dimension();
  const std::size_t n = c.resolution();
  std::vector<double> slab(K * n, 0.0);
  std::vector<std::size_t> idx(K);
  MarginalReport report;
  report.min_mass = c.cell_count() ? c.mass()[0] : 0.0;
  for (std::size_t f = 0; f < c.cell_count(); ++f) {
    const double m = c.mass()[f];
    c.unflatten(f, idx);
    for (std::size_t k = 0; k < K; ++k) slab[k * n + idx[k]] += m;
    report.total_mass += m;
    report.min_mass = std::min(report.min_mass, m);
  }
  const double target = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dev = slab[k * n + i] - target;
      if (std::abs(dev) > tolerance) report.violations.push_back({k, i, dev});
    }
  }
  report.valid = report.violations.empty() && report.min_mass >= 0.0 &&
                 std::abs(report.total_mass - 1.0) <= tolerance;
  return report;
}

GridCopulaSampler::GridCopulaSampler(GridCopula copula) : copula_(std::move(copula)) {
  const auto report = validate_marginals(copula_);
  if (!report.valid) throw InvalidArgument("grid copula sampler: copula has non-uniform marginals");
  double running = 0.0;
  for (std::size_t f = 0; f < copula_.cell_count(); ++f) {
    const double m = copula_.mass()[f];
    if (m <= 0.0) continue;
    running += m;
    cells_.push_back(f);
    cumulative_.push_back(running);
  }
}

void GridCopulaSampler::draw(Rng& rng, std::span<double> out) const {
  const double target = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  std::size_t flat = cells_[static_cast<std::size_t>(it - cumulative_.begin())];
  const std::size_t n = copula_.resolution();
  const double width = 1.0 / static_cast<double>(n);
  for (std::size_t k = out.size(); k-- > 0;) {
    const std::size_t i = flat % n;
    flat /= n;
    out[k] = (static_cast<double>(i) + rng.uniform()) * width;
  }
}

PointSet sample_from_grid_copula(const GridCopula& c, std::uint64_t seed, std::size_t count) {
  return sample_points(GridCopulaSampler(c), seed, count);
}

}  // namespace pvmerge
