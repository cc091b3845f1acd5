#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pvmerge/decreasing_set.hpp"
#include "pvmerge/grid_copula.hpp"

namespace pvmerge {

/// Where a grid cell's membership in a decreasing set is decided.
/// Optimistic: the corner with the smallest coordinates (i/n), so any cell
/// touching the set counts. Pessimistic: the corner with the largest
/// coordinates ((i+1)/n), so only cells contained in the set count.
enum class CellEvaluation { Optimistic, Pessimistic };

const char* to_string(CellEvaluation e);

struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double v, double tol = 1e-9) const { return v >= lower - tol && v <= upper + tol; }
};

enum class LpMethod {
  Auto,            // transportation for K = 2, simplex otherwise
  Transportation,  // K = 2 only
  Simplex,
};

inline constexpr std::size_t kDefaultSizeBudget = 200'000;

/// kDefaultSizeBudget unless the PVMERGE_SIZE_BUDGET environment variable
/// holds a positive integer.
std::size_t default_size_budget();

struct UcpOptions {
  std::size_t size_budget = default_size_budget();
  LpMethod method = LpMethod::Auto;
};

struct UcpResult {
  double value = 0.0;
  GridCopula witness;
  std::size_t member_cells = 0;
  std::size_t iterations = 0;  // augmentations or simplex pivots
  std::string method;
};

/// Membership of every cell (row-major) under the given evaluation. Throws
/// InvalidArgument if the membership pattern is not decreasing on the grid.
std::vector<bool> cell_membership(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                                  CellEvaluation eval);

/// Largest mass any K-dimensional grid copula of resolution n puts on the
/// member cells. Throws ResourceError when n^K exceeds the size budget.
UcpResult ucp_primal_lp(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                        CellEvaluation eval, const UcpOptions& options = {});

/// [Pessimistic optimum, Optimistic optimum]; the continuum upper copular
/// probability of a decreasing set always lies in between.
BoundPair ucp_bounds(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                     const UcpOptions& options = {});

/// Closed-form upper copular probability of {u_1 + ... + u_K <= s}:
/// min(2s/K, 1).
double ruschendorf_value(double s, std::size_t K);

/// Closed-form reference values where one is known: sum thresholds, boxes
/// (min of the corner) and Ruger sets (min(K alpha / k, 1)).
std::optional<double> closed_form_ucp(const DecreasingSetSpec& spec, std::size_t K);

}  // namespace pvmerge
