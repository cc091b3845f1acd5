#pragma once

// Dense two-phase primal simplex with Bland's anti-cycling rule.
//
//   maximize c.x  subject to  A x = b,  x >= 0.
//
// Rows whose right-hand side is negative are negated on entry. Columns that
// are unit vectors e_i (with b_i >= 0) seed the starting basis; remaining
// rows receive artificial variables and go through phase 1. Linearly
// dependent rows are detected after phase 1 and dropped.

#include <cstddef>
#include <limits>
#include <vector>

namespace pvmerge::lp {

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

const char* to_string(Status s);

template <class Scalar>
struct DenseLp {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Scalar> A;  // row-major, rows * cols
  std::vector<Scalar> b;
  std::vector<Scalar> c;

  DenseLp() = default;
  DenseLp(std::size_t m, std::size_t n) : rows(m), cols(n), A(m * n), b(m), c(n) {}

  Scalar& at(std::size_t i, std::size_t j) { return A[i * cols + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return A[i * cols + j]; }
};

template <class Scalar>
struct SimplexOptions {
  Scalar tolerance{};  // zero for exact arithmetic
  std::size_t max_pivots = 50'000'000;
};

template <class Scalar>
struct SimplexResult {
  Status status = Status::Infeasible;
  Scalar objective{};
  std::vector<Scalar> x;      // primal solution, size cols
  std::vector<Scalar> duals;  // one per input row; zero on dropped rows
  std::size_t pivots = 0;
  std::size_t dropped_rows = 0;
};

template <class Scalar>
SimplexResult<Scalar> solve_dense_simplex(const DenseLp<Scalar>& lp,
                                          const SimplexOptions<Scalar>& options = {});

}  // namespace pvmerge::lp

#include "pvmerge/lp/detail/dense_simplex_impl.hpp"
