#pragma once

// Feasible points of the dual transport problem
//
//   minimize  sum_k integral_0^1 lambda_k(u) du
//   subject to lambda_1(u_1) + ... + lambda_K(u_K) >= 1_E(u)  for all u,
//
// whose value bounds the mass any copula can put on E from above.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pvmerge/decreasing_set.hpp"
#include "pvmerge/piecewise_linear.hpp"

namespace pvmerge {

struct DualCertificate {
  std::vector<PiecewiseLinear> components;  // one per coordinate
  DecreasingSetSpec target;

  std::size_t dimension() const noexcept { return components.size(); }
};

struct CertificateReport {
  double value = 0.0;          // sum of exact component integrals
  bool feasible_on_grid = false;
  double worst_violation = 0.0;      // largest indicator - sum over points failing the tolerance
  double raw_worst_violation = 0.0;  // largest (indicator - sum)^+ over all points
  std::vector<double> worst_point;   // empty when no point is violated
  std::size_t grid_resolution = 0;
  std::size_t points_checked = 0;
  double tolerance = 0.0;
};

inline constexpr double kFeasibilityTolerance = 1e-9;
inline constexpr double kWeakDualityTolerance = 1e-7;
inline constexpr std::size_t kDefaultPointBudget = 50'000'000;

struct FeasibilityOptions {
  double tolerance = kFeasibilityTolerance;
  std::size_t point_budget = kDefaultPointBudget;
  unsigned workers = 1;
};

/// lambda_k(u) = (2/K - u/s)^+ for every k, targeting {sum u <= s}.
DualCertificate build_ruschendorf_certificate(double s, std::size_t K);

double certificate_value(const DualCertificate& cert);

/// lambda_1(u_1) + ... + lambda_K(u_K).
double dual_sum(const DualCertificate& cert, std::span<const double> u);

/// Checks the dual constraint at every point of the uniform grid
/// {0, 1/(m-1), ..., 1}^K, m = grid_n. Splitting the scan across workers
/// gives the same report as the sequential scan.
CertificateReport check_feasibility(const DualCertificate& cert, std::size_t grid_n,
                                    const FeasibilityOptions& options = {});

/// Replaces every component by the average of all components. Requires a
/// target invariant under coordinate permutations; keeps the value and, for
/// such targets, feasibility.
DualCertificate symmetrize_certificate(const DualCertificate& cert);

/// Positive part of every component. The value can only go up, and a
/// feasible certificate stays feasible.
DualCertificate clamp_nonnegative(const DualCertificate& cert);

/// Smallest decreasing majorant of every component on its breakpoints.
DualCertificate monotone_envelope(const DualCertificate& cert);

/// Multiplies every component by `factor`.
DualCertificate scale_certificate(const DualCertificate& cert, double factor);

/// primal_value <= certificate_value(cert) + tolerance.
bool weak_duality_check(double primal_value, const DualCertificate& cert,
                        double tolerance = kWeakDualityTolerance);

/// {"target": {...}, "components": [[[x, y], ...], ...]}
std::string to_json(const DualCertificate& cert);
DualCertificate certificate_from_json(const std::string& text);

/// {"type": "sum_threshold", "s": ...} and friends. GeneralBoundary has no
/// serial form.
std::string spec_to_json(const DecreasingSetSpec& spec);
DecreasingSetSpec spec_from_json(const std::string& text);

}  // namespace pvmerge
