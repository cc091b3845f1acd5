#pragma once

#include <cstddef>
#include <vector>

namespace pvmerge::lp {

/// Balanced transportation problem:
///   maximize sum_ij profit_ij f_ij
///   subject to sum_j f_ij = supply_i, sum_i f_ij = demand_j, f >= 0.
struct TransportationProblem {
  std::vector<double> supply;
  std::vector<double> demand;
  std::vector<double> profit;  // row-major, supply.size() x demand.size()
};

struct TransportationSolution {
  double objective = 0.0;
  std::vector<double> flow;  // row-major like profit
  /// Optimal dual: row_price_i + col_price_j >= profit_ij, with equality
  /// wherever flow is positive.
  std::vector<double> row_price;
  std::vector<double> col_price;
  std::size_t augmentations = 0;
};

/// Successive shortest augmenting paths (Dijkstra with reduced costs) on the
/// bipartite network. With integral supplies and demands every augmentation
/// is integral, so the returned flow is integral as well.
TransportationSolution solve_transportation(const TransportationProblem& problem,
                                            double tolerance = 1e-12);

}  // namespace pvmerge::lp
