#include "pvmerge/ucp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "pvmerge/error.hpp"
#include "pvmerge/lp/dense_simplex.hpp"
#include "pvmerge/lp/transportation.hpp"
#include "pvmerge/ucp_exact.hpp"

namespace pvmerge {

namespace {

std::size_t grid_cells(std::size_t K, std::size_t n, std::size_t budget) {
  std::size_t cells = 1;
  for (std::size_t k = 0; k < K; ++k) {
    if (cells > budget / n) {
      throw ResourceError("grid of " + std::to_string(n) + "^" + std::to_string(K) +
                          " cells exceeds the size budget of " + std::to_string(budget));
    }
    cells *= n;
  }
  if (cells > budget) {
    throw ResourceError("grid of " + std::to_string(cells) +
                        " cells exceeds the size budget of " + std::to_string(budget));
  }
  return cells;
}

void check_args(const DecreasingSetSpec& spec, std::size_t K, std::size_t n) {
  validate_spec(spec, K);
  if (n < 1) throw InvalidArgument("grid resolution n must be at least 1");
}

// Row index of slab (axis k, cell index i).
std::size_t slab_row(std::size_t k, std::size_t i, std::size_t n) { return k * n + i; }

UcpResult solve_transportation_k2(const std::vector<bool>& member, std::size_t n) {
  lp::TransportationProblem problem;
  // Supplies scaled by n so every augmentation moves whole units.
  problem.supply.assign(n, 1.0);
  problem.demand.assign(n, 1.0);
  problem.profit.resize(n * n);
  std::size_t members = 0;
  for (std::size_t f = 0; f < n * n; ++f) {
    problem.profit[f] = member[f] ? 1.0 : 0.0;
    members += member[f] ? 1 : 0;
  }
  const auto sol = lp::solve_transportation(problem);
  std::vector<double> mass(n * n);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t f = 0; f < n * n; ++f) mass[f] = sol.flow[f] * scale;
  return UcpResult{std::clamp(sol.objective / static_cast<double>(n), 0.0, 1.0),
                   GridCopula(2, n, std::move(mass)), members, sol.augmentations,
                   "transportation"};
}

// Packing form: only member cells are variables and each slab carries at
// most 1/n. Any such sub-copula extends to a full copula (see complete()),
// so the optimum equals that of the equality-constrained problem.
UcpResult solve_packing_simplex(const std::vector<bool>& member, std::size_t K, std::size_t n,
                                const GridCopula& shape) {
  std::vector<std::size_t> cols;
  for (std::size_t f = 0; f < member.size(); ++f) {
    if (member[f]) cols.push_back(f);
  }
  const std::size_t rows = K * n;
  lp::DenseLp<double> problem(rows, cols.size() + rows);
  std::vector<std::size_t> idx(K);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    shape.unflatten(cols[c], idx);
    for (std::size_t k = 0; k < K; ++k) problem.at(slab_row(k, idx[k], n), c) = 1.0;
    problem.c[c] = 1.0;
  }
  for (std::size_t r = 0; r < rows; ++r) {
    problem.at(r, cols.size() + r) = 1.0;
    problem.b[r] = 1.0;  // scaled by n
  }
  lp::SimplexOptions<double> opt;
  opt.tolerance = 1e-9;
  const auto sol = lp::solve_dense_simplex(problem, opt);
  if (sol.status != lp::Status::Optimal) {
    throw InternalError(std::string("ucp simplex terminated with status ") +
                        lp::to_string(sol.status));
  }

  // Complete the sub-copula: spread each slab's deficit by a product measure.
  std::vector<double> deficit(rows, 1.0);
  std::vector<double> scaled(member.size(), 0.0);
  double used = 0.0;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const double x = std::max(0.0, sol.x[c]);
    scaled[cols[c]] = x;
    used += x;
    shape.unflatten(cols[c], idx);
    for (std::size_t k = 0; k < K; ++k) deficit[slab_row(k, idx[k], n)] -= x;
  }
  for (double& d : deficit) d = std::max(0.0, d);
  const double remaining = static_cast<double>(n) - used;
  if (remaining > 1e-12) {
    const double denom = std::pow(remaining, static_cast<double>(K - 1));
    for (std::size_t f = 0; f < member.size(); ++f) {
      shape.unflatten(f, idx);
      double prod = 1.0;
      for (std::size_t k = 0; k < K && prod > 0.0; ++k) prod *= deficit[slab_row(k, idx[k], n)];
      scaled[f] += prod / denom;
    }
  }
  const double scale = 1.0 / static_cast<double>(n);
  for (double& m : scaled) m *= scale;
  return UcpResult{std::clamp(sol.objective / static_cast<double>(n), 0.0, 1.0), GridCopula(K, n, std::move(scaled)),
                   cols.size(), sol.pivots, "simplex"};
}

}  // namespace

const char* to_string(CellEvaluation e) {
  return e == CellEvaluation::Optimistic ? "optimistic" : "pessimistic";
}

std::size_t default_size_budget() {
  if (const char* env = std::getenv("PVMERGE_SIZE_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultSizeBudget;
}

std::vector<bool> cell_membership(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                                  CellEvaluation eval) {
  check_args(spec, K, n);
  std::size_t cells = 1;
  for (std::size_t k = 0; k < K; ++k) cells *= n;
  const GridCopula shape(K, n, std::vector<double>(cells, 0.0));
  const std::size_t offset = eval == CellEvaluation::Optimistic ? 0 : 1;
  std::vector<bool> member(cells);
  std::vector<std::size_t> idx(K);
  std::vector<double> corner(K);
  for (std::size_t f = 0; f < cells; ++f) {
    shape.unflatten(f, idx);
    for (std::size_t k = 0; k < K; ++k) {
      corner[k] = static_cast<double>(idx[k] + offset) / static_cast<double>(n);
    }
    member[f] = contains(spec, corner);
  }
  // Decreasing on the lattice: a member cell's lower neighbours are members.
  for (std::size_t f = 0; f < cells; ++f) {
    if (!member[f]) continue;
    shape.unflatten(f, idx);
    std::size_t stride = 1;
    for (std::size_t k = K; k-- > 0; stride *= n) {
      if (idx[k] > 0 && !member[f - stride]) {
        throw InvalidArgument("set " + describe(spec) + " is not decreasing on the grid");
      }
    }
  }
  return member;
}

UcpResult ucp_primal_lp(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                        CellEvaluation eval, const UcpOptions& options) {
  check_args(spec, K, n);
  const std::size_t cells = grid_cells(K, n, options.size_budget);
  const auto member = cell_membership(spec, K, n, eval);
  LpMethod method = options.method;
  if (method == LpMethod::Auto) method = K == 2 ? LpMethod::Transportation : LpMethod::Simplex;
  if (method == LpMethod::Transportation) {
    if (K != 2) throw InvalidArgument("the transportation solver handles K = 2 only");
    return solve_transportation_k2(member, n);
  }
  const GridCopula shape(K, n, std::vector<double>(cells, 0.0));
  return solve_packing_simplex(member, K, n, shape);
}

BoundPair ucp_bounds(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                     const UcpOptions& options) {
  const double lower = ucp_primal_lp(spec, K, n, CellEvaluation::Pessimistic, options).value;
  const double upper = ucp_primal_lp(spec, K, n, CellEvaluation::Optimistic, options).value;
  return {lower, upper};
}

double ruschendorf_value(double s, std::size_t K) {
  if (!(s >= 0.0)) throw InvalidArgument("ruschendorf_value: s must be nonnegative");
  if (K < 2) throw InvalidArgument("ruschendorf_value: K must be at least 2");
  return std::min(2.0 * s / static_cast<double>(K), 1.0);
}

std::optional<double> closed_form_ucp(const DecreasingSetSpec& spec, std::size_t K) {
  validate_spec(spec, K);
  if (const auto* x = std::get_if<set::SumThreshold>(&spec)) return ruschendorf_value(x->s, K);
  if (const auto* x = std::get_if<set::Box>(&spec)) {
    return *std::min_element(x->upper.begin(), x->upper.end());
  }
  if (const auto* x = std::get_if<set::RugerSet>(&spec)) {
    return std::min(static_cast<double>(K) * x->alpha / static_cast<double>(x->order), 1.0);
  }
  return std::nullopt;
}

ExactUcpResult ucp_primal_lp_exact(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                                   CellEvaluation eval) {
  check_args(spec, K, n);
  if (n > kExactMaxResolution || K > kExactMaxDimension) {
    throw ResourceError("exact LP is limited to n <= " + std::to_string(kExactMaxResolution) +
                        " and K <= " + std::to_string(kExactMaxDimension));
  }
  const auto member = cell_membership(spec, K, n, eval);
  const std::size_t cells = member.size();
  const GridCopula shape(K, n, std::vector<double>(cells, 0.0));
  // Every cell is a variable; all K*n slab equalities are kept, including
  // the K-1 redundant ones, which phase 1 detects and drops.
  lp::DenseLp<lp::Rational> problem(K * n, cells);
  std::vector<std::size_t> idx(K);
  for (std::size_t f = 0; f < cells; ++f) {
    shape.unflatten(f, idx);
    for (std::size_t k = 0; k < K; ++k) problem.at(slab_row(k, idx[k], n), f) = 1;
    problem.c[f] = member[f] ? 1 : 0;
  }
  for (auto& b : problem.b) b = 1;
  const auto sol = lp::solve_dense_simplex(problem, lp::SimplexOptions<lp::Rational>{});
  if (sol.status != lp::Status::Optimal) {
    throw InternalError(std::string("exact ucp simplex terminated with status ") +
                        lp::to_string(sol.status));
  }
  ExactUcpResult out;
  out.value = sol.objective / lp::Rational(n);
  out.approx = static_cast<double>(out.value);
  out.pivots = sol.pivots;
  out.dropped_rows = sol.dropped_rows;
  return out;
}

}  // namespace pvmerge
