#pragma once

#include <algorithm>
#include <utility>

#include "pvmerge/error.hpp"

namespace pvmerge::lp {

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

namespace detail {

template <class Scalar>
class Tableau {
 public:
  Tableau(const DenseLp<Scalar>& lp, const SimplexOptions<Scalar>& opt)
      : tol_(opt.tolerance), max_pivots_(opt.max_pivots), m_(lp.rows), n_(lp.cols) {
    if (lp.A.size() != m_ * n_ || lp.b.size() != m_ || lp.c.size() != n_) {
      throw InvalidArgument("dense simplex: inconsistent LP dimensions");
    }
    // Pick a starting basic column per row: an existing unit column where
    // possible, otherwise an artificial.
    std::vector<bool> negate(m_, false);
    for (std::size_t i = 0; i < m_; ++i) negate[i] = lp.b[i] < Scalar(0);

    std::vector<std::ptrdiff_t> seed(m_, -1);
    std::vector<bool> used(n_, false);
    for (std::size_t j = 0; j < n_; ++j) {
      std::ptrdiff_t row = -1;
      bool unit = true;
      for (std::size_t i = 0; i < m_ && unit; ++i) {
        const Scalar v = negate[i] ? -lp.at(i, j) : lp.at(i, j);
        if (v == Scalar(0)) continue;
        if (v == Scalar(1) && row < 0) {
          row = static_cast<std::ptrdiff_t>(i);
        } else {
          unit = false;
        }
      }
      if (unit && row >= 0 && seed[static_cast<std::size_t>(row)] < 0 && !used[j]) {
        seed[static_cast<std::size_t>(row)] = static_cast<std::ptrdiff_t>(j);
        used[j] = true;
      }
    }
    artificial_begin_ = n_;
    std::size_t artificials = 0;
    for (std::size_t i = 0; i < m_; ++i) artificials += seed[i] < 0 ? 1 : 0;
    width_ = n_ + artificials + 1;  // last column holds the right-hand side

    T_.assign(m_ * width_, Scalar(0));
    basis_.assign(m_, 0);
    origin_col_.assign(m_, 0);
    std::size_t next_art = n_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cell(i, j) = negate[i] ? -lp.at(i, j) : lp.at(i, j);
      rhs(i) = negate[i] ? -lp.b[i] : lp.b[i];
      if (seed[i] >= 0) {
        basis_[i] = static_cast<std::size_t>(seed[i]);
      } else {
        basis_[i] = next_art;
        cell(i, next_art) = Scalar(1);
        ++next_art;
      }
      origin_col_[i] = basis_[i];
    }
    sign_.assign(m_, Scalar(1));
    for (std::size_t i = 0; i < m_; ++i) {
      if (negate[i]) sign_[i] = Scalar(-1);
    }
    row_alive_.assign(m_, true);
    cost_.assign(width_ - 1, Scalar(0));
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = lp.c[j];
  }

  SimplexResult<Scalar> run() {
    SimplexResult<Scalar> result;
    // Phase 1: maximize -(sum of artificials).
    if (width_ - 1 > n_) {
      std::vector<Scalar> phase1(width_ - 1, Scalar(0));
      for (std::size_t j = n_; j < width_ - 1; ++j) phase1[j] = Scalar(-1);
      const Status s = optimize(phase1, /*allow_artificial=*/true);
      if (s == Status::IterationLimit) return finish(result, s);
      Scalar infeasibility(0);
      for (std::size_t i = 0; i < m_; ++i) {
        if (row_alive_[i] && basis_[i] >= n_) infeasibility += rhs(i);
      }
      if (infeasibility > tol_) return finish(result, Status::Infeasible);
      drive_out_artificials(result);
    }
    const Status s = optimize(cost_, /*allow_artificial=*/false);
    return finish(result, s);
  }

 private:
  Scalar& cell(std::size_t i, std::size_t j) { return T_[i * width_ + j]; }
  Scalar& rhs(std::size_t i) { return T_[i * width_ + width_ - 1]; }

  std::vector<Scalar> reduced_costs(const std::vector<Scalar>& cost) {
    std::vector<Scalar> d(cost);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!row_alive_[i]) continue;
      const Scalar cb = cost[basis_[i]];
      if (cb == Scalar(0)) continue;
      const Scalar* row = &T_[i * width_];
      for (std::size_t j = 0; j + 1 < width_; ++j) {
        if (row[j] != Scalar(0)) d[j] -= cb * row[j];
      }
    }
    return d;
  }

  Status optimize(const std::vector<Scalar>& cost, bool allow_artificial) {
    d_ = reduced_costs(cost);
    const std::size_t limit = allow_artificial ? width_ - 1 : n_;
    for (;;) {
      // Bland: lowest-index improving column enters.
      std::size_t enter = limit;
      for (std::size_t j = 0; j < limit; ++j) {
        if (d_[j] > tol_) {
          enter = j;
          break;
        }
      }
      if (enter == limit) return Status::Optimal;

      // Ratio test; ties go to the lowest basic index.
      std::ptrdiff_t leave = -1;
      Scalar best{};
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i]) continue;
        const Scalar a = cell(i, enter);
        if (!(a > tol_)) continue;
        const Scalar ratio = rhs(i) / a;
        if (leave < 0 || ratio < best - tol_) {
          leave = static_cast<std::ptrdiff_t>(i);
          best = ratio;
        } else if (!(ratio > best + tol_) && basis_[i] < basis_[static_cast<std::size_t>(leave)]) {
          leave = static_cast<std::ptrdiff_t>(i);
          best = ratio;
        }
      }
      if (leave < 0) return Status::Unbounded;
      if (pivots_ >= max_pivots_) return Status::IterationLimit;
      pivot(static_cast<std::size_t>(leave), enter);
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    ++pivots_;
    Scalar* prow = &T_[r * width_];
    const Scalar inv = Scalar(1) / prow[s];
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != Scalar(0)) prow[j] *= inv;
    }
    prow[s] = Scalar(1);
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] != Scalar(0)) nonzero_.push_back(j);
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || !row_alive_[i]) continue;
      Scalar* row = &T_[i * width_];
      const Scalar f = row[s];
      if (f == Scalar(0)) continue;
      for (std::size_t j : nonzero_) row[j] -= f * prow[j];
      row[s] = Scalar(0);
    }
    if (!d_.empty()) {
      const Scalar f = d_[s];
      if (f != Scalar(0)) {
        for (std::size_t j : nonzero_) {
          if (j + 1 < width_) d_[j] -= f * prow[j];
        }
        d_[s] = Scalar(0);
      }
    }
    basis_[r] = s;
  }

  void drive_out_artificials(SimplexResult<Scalar>& result) {
    for (std::size_t i = 0; i < m_; ++i) {
      if (!row_alive_[i] || basis_[i] < n_) continue;
      std::size_t col = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (abs_value(cell(i, j)) > tol_) {
          col = j;
          break;
        }
      }
      if (col < n_) {
        pivot(i, col);
      } else {
        row_alive_[i] = false;  // linearly dependent row
        ++result.dropped_rows;
      }
    }
  }

  static Scalar abs_value(const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; }

  SimplexResult<Scalar>& finish(SimplexResult<Scalar>& result, Status s) {
    result.status = s;
    result.pivots = pivots_;
    result.x.assign(n_, Scalar(0));
    result.objective = Scalar(0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (!row_alive_[i] || basis_[i] >= n_) continue;
      result.x[basis_[i]] = rhs(i);
    }
    for (std::size_t j = 0; j < n_; ++j) result.objective += cost_[j] * result.x[j];
    // y_i = c_B B^{-1} e_i, read off the column that started basic in row i.
    result.duals.assign(m_, Scalar(0));
    if (s == Status::Optimal) {
      const auto d = reduced_costs(cost_);
      for (std::size_t i = 0; i < m_; ++i) {
        if (!row_alive_[i] && origin_col_[i] >= n_) continue;
        const std::size_t q = origin_col_[i];
        result.duals[i] = sign_[i] * (cost_[q] - d[q]);
      }
    }
    return result;
  }

  Scalar tol_;
  std::size_t max_pivots_;
  std::size_t m_, n_;
  std::size_t width_ = 0;
  std::size_t artificial_begin_ = 0;
  std::size_t pivots_ = 0;
  std::vector<Scalar> T_;
  std::vector<Scalar> d_;
  std::vector<Scalar> cost_;
  std::vector<Scalar> sign_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> origin_col_;
  std::vector<bool> row_alive_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace detail

template <class Scalar>
SimplexResult<Scalar> solve_dense_simplex(const DenseLp<Scalar>& lp,
                                          const SimplexOptions<Scalar>& options) {
  detail::Tableau<Scalar> tableau(lp, options);
  return tableau.run();
}

}  // namespace pvmerge::lp
