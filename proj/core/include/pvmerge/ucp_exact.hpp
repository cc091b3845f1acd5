#pragma once

#include <cstddef>

#include "pvmerge/lp/rational.hpp"
#include "pvmerge/ucp.hpp"

namespace pvmerge {

inline constexpr std::size_t kExactMaxResolution = 8;
inline constexpr std::size_t kExactMaxDimension = 3;

struct ExactUcpResult {
  lp::Rational value;
  double approx = 0.0;
  std::size_t pivots = 0;
  std::size_t dropped_rows = 0;
};

/// Same optimum as ucp_primal_lp, computed in exact rational arithmetic on
/// the full equality-constrained formulation (every cell a variable, every
/// slab an equality row). Serves as the reference oracle for the floating
/// point solvers. Limited to n <= 8 and K <= 3.
ExactUcpResult ucp_primal_lp_exact(const DecreasingSetSpec& spec, std::size_t K, std::size_t n,
                                   CellEvaluation eval);

}  // namespace pvmerge
