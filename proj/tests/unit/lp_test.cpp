#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "pvmerge/error.hpp"
#include "pvmerge/lp/dense_simplex.hpp"
#include "pvmerge/lp/rational.hpp"
#include "pvmerge/lp/transportation.hpp"
#include "pvmerge/sampling.hpp"

namespace pvmerge::lp {
namespace {

// Best basic feasible solution by enumerating every column subset of size
// `rows`. Only usable for a handful of columns.
std::optional<double> brute_force_max(const DenseLp<double>& lp) {
  const std::size_t m = lp.rows, n = lp.cols;
  std::vector<bool> pick(n, false);
  std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(m), true);
  std::optional<double> best;
  do {
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < n; ++j) {
      if (pick[j]) basis.push_back(j);
    }
    // Gaussian elimination with partial pivoting on [B | b].
    std::vector<double> M(m * (m + 1));
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t r = 0; r < m; ++r) M[i * (m + 1) + r] = lp.at(i, basis[r]);
      M[i * (m + 1) + m] = lp.b[i];
    }
    bool singular = false;
    for (std::size_t col = 0; col < m && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t i = col + 1; i < m; ++i) {
        if (std::abs(M[i * (m + 1) + col]) > std::abs(M[piv * (m + 1) + col])) piv = i;
      }
      if (std::abs(M[piv * (m + 1) + col]) < 1e-12) {
        singular = true;
        break;
      }
      for (std::size_t r = 0; r <= m; ++r) std::swap(M[col * (m + 1) + r], M[piv * (m + 1) + r]);
      for (std::size_t i = 0; i < m; ++i) {
        if (i == col) continue;
        const double f = M[i * (m + 1) + col] / M[col * (m + 1) + col];
        for (std::size_t r = col; r <= m; ++r) M[i * (m + 1) + r] -= f * M[col * (m + 1) + r];
      }
    }
    if (singular) continue;
    double value = 0.0;
    bool feasible = true;
    for (std::size_t r = 0; r < m; ++r) {
      const double x = M[r * (m + 1) + m] / M[r * (m + 1) + r];
      if (x < -1e-12) feasible = false;
      value += lp.c[basis[r]] * x;
    }
    if (feasible && (!best || value > *best)) best = value;
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return best;
}

TEST(DenseSimplex, MatchesVertexEnumerationOnRandomLps) {
  Rng rng(314);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t n = m + 2 + static_cast<std::size_t>(trial % 4);
    DenseLp<double> lp(m, n);
    // Positive entries keep the feasible region bounded; b = A x0 keeps it
    // nonempty.
    std::vector<double> x0(n);
    for (auto& x : x0) x = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        lp.at(i, j) = 0.1 + rng.uniform();
        lp.b[i] += lp.at(i, j) * x0[j];
      }
    }
    for (auto& c : lp.c) c = 2.0 * rng.uniform() - 1.0;
    const auto res = solve_dense_simplex(lp, {1e-11});
    const auto oracle = brute_force_max(lp);
    ASSERT_TRUE(oracle.has_value());
    ASSERT_EQ(res.status, Status::Optimal) << trial;
    EXPECT_NEAR(res.objective, *oracle, 1e-9) << trial;
    for (std::size_t i = 0; i < m; ++i) {
      double lhs = 0.0;
      for (std::size_t j = 0; j < n; ++j) lhs += lp.at(i, j) * res.x[j];
      EXPECT_NEAR(lhs, lp.b[i], 1e-9);
    }
    // Strong duality.
    EXPECT_NEAR(std::inner_product(lp.b.begin(), lp.b.end(), res.duals.begin(), 0.0),
                res.objective, 1e-9);
  }
}

TEST(DenseSimplex, InfeasibleAndUnbounded) {
  DenseLp<double> infeasible(1, 2);
  infeasible.at(0, 0) = 1.0;
  infeasible.at(0, 1) = 1.0;
  infeasible.b[0] = -1.0;
  EXPECT_EQ(solve_dense_simplex(infeasible, {1e-11}).status, Status::Infeasible);

  DenseLp<double> unbounded(1, 2);
  unbounded.at(0, 0) = 1.0;
  unbounded.at(0, 1) = -1.0;
  unbounded.c[0] = 1.0;
  EXPECT_EQ(solve_dense_simplex(unbounded, {1e-11}).status, Status::Unbounded);
}

TEST(DenseSimplex, IterationLimit) {
  DenseLp<double> lp(1, 2);
  lp.at(0, 0) = 1.0;
  lp.at(0, 1) = 1.0;
  lp.b[0] = 1.0;
  lp.c = {1.0, 2.0};
  EXPECT_EQ(solve_dense_simplex(lp, {1e-11, 0}).status, Status::IterationLimit);
}

TEST(DenseSimplex, BealeCyclingExampleTerminatesExactly) {
  // Textbook degenerate LP on which the largest-coefficient rule cycles.
  DenseLp<Rational> lp(3, 7);
  const Rational q(1, 4), h(1, 2);
  lp.at(0, 0) = 1; lp.at(0, 3) = q; lp.at(0, 4) = -8; lp.at(0, 5) = -1; lp.at(0, 6) = 9;
  lp.at(1, 1) = 1; lp.at(1, 3) = h; lp.at(1, 4) = -12; lp.at(1, 5) = -h; lp.at(1, 6) = 3;
  lp.at(2, 2) = 1; lp.at(2, 5) = 1;
  lp.b = {0, 0, 1};
  lp.c = {0, 0, 0, Rational(3, 4), -20, h, -6};
  const auto res = solve_dense_simplex(lp);
  ASSERT_EQ(res.status, Status::Optimal);
  EXPECT_EQ(res.objective, Rational(5, 4));
}

TEST(DenseSimplex, RedundantRowsAreDropped) {
  // Row 2 = row 0 + row 1.
  DenseLp<Rational> lp(3, 3);
  lp.at(0, 0) = 1; lp.at(0, 1) = 1;
  lp.at(1, 1) = 1; lp.at(1, 2) = 1;
  lp.at(2, 0) = 1; lp.at(2, 1) = 2; lp.at(2, 2) = 1;
  lp.b = {1, 1, 2};
  lp.c = {1, 0, 1};
  const auto res = solve_dense_simplex(lp);
  ASSERT_EQ(res.status, Status::Optimal);
  EXPECT_EQ(res.objective, 2);
  EXPECT_EQ(res.dropped_rows, 1u);
}

TransportationProblem random_problem(Rng& rng, std::size_t rows, std::size_t cols) {
  TransportationProblem p;
  p.supply.assign(rows, 0.0);
  p.demand.assign(cols, 0.0);
  for (auto& s : p.supply) s = 1.0 + std::floor(4.0 * rng.uniform());
  const double total = std::accumulate(p.supply.begin(), p.supply.end(), 0.0);
  // Integer demands summing to the same total.
  double left = total;
  for (std::size_t j = 0; j + 1 < cols; ++j) {
    p.demand[j] = std::min(left, std::floor(rng.uniform() * total / static_cast<double>(cols)));
    left -= p.demand[j];
  }
  p.demand[cols - 1] = left;
  p.profit.resize(rows * cols);
  for (auto& v : p.profit) v = rng.uniform() < 0.3 ? 0.0 : std::floor(10.0 * rng.uniform());
  return p;
}

TEST(Transportation, AgreesWithSimplexAndCertifiesItself) {
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t rows = 2 + static_cast<std::size_t>(trial % 4);
    const std::size_t cols = 2 + static_cast<std::size_t>((trial / 4) % 4);
    const auto p = random_problem(rng, rows, cols);
    const auto sol = solve_transportation(p);

    DenseLp<double> lp(rows + cols, rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        lp.at(i, i * cols + j) = 1.0;
        lp.at(rows + j, i * cols + j) = 1.0;
        lp.c[i * cols + j] = p.profit[i * cols + j];
      }
      lp.b[i] = p.supply[i];
    }
    for (std::size_t j = 0; j < cols; ++j) lp.b[rows + j] = p.demand[j];
    const auto ref = solve_dense_simplex(lp, {1e-11});
    ASSERT_EQ(ref.status, Status::Optimal);
    EXPECT_NEAR(sol.objective, ref.objective, 1e-9) << trial;

    double dual_obj = 0.0;
    for (std::size_t i = 0; i < rows; ++i) dual_obj += p.supply[i] * sol.row_price[i];
    for (std::size_t j = 0; j < cols; ++j) dual_obj += p.demand[j] * sol.col_price[j];
    EXPECT_NEAR(dual_obj, sol.objective, 1e-9) << trial;

    for (std::size_t i = 0; i < rows; ++i) {
      double out = 0.0;
      for (std::size_t j = 0; j < cols; ++j) {
        const double f = sol.flow[i * cols + j];
        ASSERT_GE(f, 0.0);
        EXPECT_EQ(f, std::round(f));
        out += f;
        const double slack = sol.row_price[i] + sol.col_price[j] - p.profit[i * cols + j];
        EXPECT_GE(slack, -1e-9);
        if (f > 0.0) EXPECT_NEAR(slack, 0.0, 1e-9);
      }
      EXPECT_EQ(out, p.supply[i]);
    }
  }
}

TEST(Transportation, Unbalanced) {
  TransportationProblem p{{1.0, 1.0}, {1.0}, {1.0, 1.0}};
  EXPECT_THROW(solve_transportation(p), InvalidArgument);
}

}  // namespace
}  // namespace pvmerge::lp
