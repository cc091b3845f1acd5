#include "pvmerge/dual_cert.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pvmerge/error.hpp"

namespace pvmerge {

namespace {

template <class F>
DualCertificate map_components(const DualCertificate& cert, F&& f) {
  DualCertificate out{{}, cert.target};
  out.components.reserve(cert.components.size());
  for (const auto& c : cert.components) out.components.push_back(f(c));
  return out;
}

struct ScanResult {
  double worst = 0.0;      // over points failing the tolerance
  double raw_worst = 0.0;  // over all points
  std::size_t worst_flat = SIZE_MAX;
};

}  // namespace

DualCertificate build_ruschendorf_certificate(double s, std::size_t K) {
  if (K < 2) throw InvalidArgument("ruschendorf certificate: K must be at least 2");
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw InvalidArgument("ruschendorf certificate: s must be positive (for s = 0 the value is 0)");
  }
  const double top = 2.0 / static_cast<double>(K);
  const double kink = 2.0 * s / static_cast<double>(K);  // where 2/K - u/s reaches zero
  std::vector<PiecewiseLinear::Breakpoint> pts;
  if (kink < 1.0) {
    pts = {{0.0, top}, {kink, 0.0}, {1.0, 0.0}};
  } else {
    pts = {{0.0, top}, {1.0, std::max(top - 1.0 / s, 0.0)}};
  }
  const PiecewiseLinear lambda(std::move(pts));
  return DualCertificate{std::vector<PiecewiseLinear>(K, lambda), set::SumThreshold{s}};
}

double certificate_value(const DualCertificate& cert) {
  double total = 0.0;
  for (const auto& c : cert.components) total += c.integral();
  return total;
}

double dual_sum(const DualCertificate& cert, std::span<const double> u) {
  double total = 0.0;
  for (std::size_t k = 0; k < cert.components.size(); ++k) total += cert.components[k](u[k]);
  return total;
}

CertificateReport check_feasibility(const DualCertificate& cert, std::size_t grid_n,
                                    const FeasibilityOptions& options) {
  const std::size_t K = cert.dimension();
  validate_spec(cert.target, K);
  if (grid_n < 2) throw InvalidArgument("check_feasibility: grid_n must be at least 2");
  std::size_t points = 1;
  for (std::size_t k = 0; k < K; ++k) {
    if (points > options.point_budget / grid_n) {
      throw ResourceError("check_feasibility: " + std::to_string(grid_n) + "^" +
                          std::to_string(K) + " grid points exceed the budget of " +
                          std::to_string(options.point_budget));
    }
    points *= grid_n;
  }

  std::vector<double> coord(grid_n);
  for (std::size_t j = 0; j < grid_n; ++j) {
    coord[j] = static_cast<double>(j) / static_cast<double>(grid_n - 1);
  }
  std::vector<double> table(K * grid_n);  // lambda_k at grid node j
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t j = 0; j < grid_n; ++j) table[k * grid_n + j] = cert.components[k](coord[j]);
  }

  // Points are visited in row-major order; a worker owns a contiguous block
  // of leading indices.
  const std::size_t block = points / grid_n;
  auto scan = [&](std::size_t lead_begin, std::size_t lead_end) {
    ScanResult r;
    std::vector<std::size_t> idx(K);
    std::vector<double> u(K);
    for (std::size_t f = lead_begin * block; f < lead_end * block; ++f) {
      std::size_t rest = f;
      double sum = 0.0;
      for (std::size_t k = K; k-- > 0;) {
        idx[k] = rest % grid_n;
        rest /= grid_n;
        u[k] = coord[idx[k]];
      }
      for (std::size_t k = 0; k < K; ++k) sum += table[k * grid_n + idx[k]];
      const double indicator = contains(cert.target, u) ? 1.0 : 0.0;
      const double violation = indicator - sum;
      r.raw_worst = std::max(r.raw_worst, violation);
      if (violation > options.tolerance && violation > r.worst) {
        r.worst = violation;
        r.worst_flat = f;
      }
    }
    return r;
  };

  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, grid_n);
  std::vector<ScanResult> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, grid_n);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t b = grid_n * w / workers;
      const std::size_t e = grid_n * (w + 1) / workers;
      pool.emplace_back([&, w, b, e] { partial[w] = scan(b, e); });
    }
  }
  // Blocks are in increasing order, so keeping the first strict maximum
  // reproduces the sequential scan.
  ScanResult total;
  for (const auto& p : partial) {
    total.raw_worst = std::max(total.raw_worst, p.raw_worst);
    if (p.worst > total.worst) {
      total.worst = p.worst;
      total.worst_flat = p.worst_flat;
    }
  }

  CertificateReport report;
  report.value = certificate_value(cert);
  report.worst_violation = total.worst;
  report.raw_worst_violation = total.raw_worst;
  report.feasible_on_grid = total.worst_flat == SIZE_MAX;
  report.grid_resolution = grid_n;
  report.points_checked = points;
  report.tolerance = options.tolerance;
  if (!report.feasible_on_grid) {
    report.worst_point.resize(K);
    std::size_t rest = total.worst_flat;
    for (std::size_t k = K; k-- > 0;) {
      report.worst_point[k] = coord[rest % grid_n];
      rest /= grid_n;
    }
  }
  return report;
}

DualCertificate symmetrize_certificate(const DualCertificate& cert) {
  if (!is_symmetric(cert.target)) {
    throw InvalidArgument("symmetrize_certificate: target " + describe(cert.target) +
                          " is not symmetric");
  }
  const auto avg = PiecewiseLinear::average(cert.components);
  return DualCertificate{std::vector<PiecewiseLinear>(cert.dimension(), avg), cert.target};
}

DualCertificate clamp_nonnegative(const DualCertificate& cert) {
  return map_components(cert, [](const PiecewiseLinear& f) { return f.positive_part(); });
}

DualCertificate monotone_envelope(const DualCertificate& cert) {
  return map_components(cert, [](const PiecewiseLinear& f) { return f.decreasing_envelope(); });
}

DualCertificate scale_certificate(const DualCertificate& cert, double factor) {
  return map_components(cert, [&](const PiecewiseLinear& f) { return f.scaled(factor); });
}

bool weak_duality_check(double primal_value, const DualCertificate& cert, double tolerance) {
  return primal_value <= certificate_value(cert) + tolerance;
}

}  // namespace pvmerge
