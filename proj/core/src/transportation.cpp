#include "pvmerge/lp/transportation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pvmerge/error.hpp"

namespace pvmerge::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Node layout: source, m rows, n columns, sink.
class Network {
 public:
  Network(const TransportationProblem& p, double tol)
      : p_(p), m_(p.supply.size()), n_(p.demand.size()), tol_(tol),
        flow_(m_ * n_, 0.0), sent_(m_, 0.0), received_(n_, 0.0),
        pi_(node_count(), 0.0), dist_(node_count()), parent_(node_count()),
        done_(node_count()) {
    // Initial potentials are exact shortest distances from the source,
    // which makes every reduced cost nonnegative.
    double sink = kInf;
    for (std::size_t j = 0; j < n_; ++j) {
      double best = kInf;
      for (std::size_t i = 0; i < m_; ++i) best = std::min(best, -profit(i, j));
      pi_[col(j)] = best;
      sink = std::min(sink, best);
    }
    pi_[this->sink()] = sink;
  }

  std::size_t node_count() const { return m_ + n_ + 2; }
  std::size_t source() const { return 0; }
  std::size_t row(std::size_t i) const { return 1 + i; }
  std::size_t col(std::size_t j) const { return 1 + m_ + j; }
  std::size_t sink() const { return 1 + m_ + n_; }

  double profit(std::size_t i, std::size_t j) const { return p_.profit[i * n_ + j]; }

  /// Returns false when the sink is unreachable.
  bool shortest_path() {
    std::fill(dist_.begin(), dist_.end(), kInf);
    std::fill(parent_.begin(), parent_.end(), SIZE_MAX);
    std::fill(done_.begin(), done_.end(), false);
    dist_[source()] = 0.0;
    for (;;) {
      std::size_t u = SIZE_MAX;
      double best = kInf;
      for (std::size_t x = 0; x < node_count(); ++x) {
        if (!done_[x] && dist_[x] < best) {
          best = dist_[x];
          u = x;
        }
      }
      if (u == SIZE_MAX) break;
      done_[u] = true;
      if (u == source()) {
        for (std::size_t i = 0; i < m_; ++i) {
          if (p_.supply[i] - sent_[i] > tol_) relax(u, row(i), 0.0);
        }
      } else if (u <= m_) {
        const std::size_t i = u - 1;
        for (std::size_t j = 0; j < n_; ++j) relax(u, col(j), -profit(i, j));
      } else if (u != sink()) {
        const std::size_t j = u - 1 - m_;
        for (std::size_t i = 0; i < m_; ++i) {
          if (flow_[i * n_ + j] > tol_) relax(u, row(i), profit(i, j));
        }
        if (p_.demand[j] - received_[j] > tol_) relax(u, sink(), 0.0);
      }
    }
    if (dist_[sink()] == kInf) return false;
    double reach = 0.0;
    for (double d : dist_) {
      if (d < kInf) reach = std::max(reach, d);
    }
    for (std::size_t x = 0; x < node_count(); ++x) pi_[x] += dist_[x] < kInf ? dist_[x] : reach;
    return true;
  }

  double augment() {
    // Walk back from the sink: sink <- col <- row <- col <- ... <- row <- source.
    double delta = kInf;
    std::size_t x = sink();
    while (x != source()) {
      const std::size_t prev = parent_[x];
      if (x == sink()) {
        const std::size_t j = prev - 1 - m_;
        delta = std::min(delta, p_.demand[j] - received_[j]);
      } else if (prev == source()) {
        const std::size_t i = x - 1;
        delta = std::min(delta, p_.supply[i] - sent_[i]);
      } else if (prev > m_) {  // col -> row uses a reverse arc
        const std::size_t j = prev - 1 - m_;
        const std::size_t i = x - 1;
        delta = std::min(delta, flow_[i * n_ + j]);
      }
      x = prev;
    }
    x = sink();
    while (x != source()) {
      const std::size_t prev = parent_[x];
      if (x == sink()) {
        received_[prev - 1 - m_] += delta;
      } else if (prev == source()) {
        sent_[x - 1] += delta;
      } else if (prev > m_) {
        flow_[(x - 1) * n_ + (prev - 1 - m_)] -= delta;
      } else {
        flow_[(prev - 1) * n_ + (x - 1 - m_)] += delta;
      }
      x = prev;
    }
    return delta;
  }

  TransportationSolution result(std::size_t augmentations) const {
    TransportationSolution out;
    out.flow = flow_;
    for (auto& f : out.flow) {
      if (std::abs(f) <= tol_) f = 0.0;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) out.objective += profit(i, j) * out.flow[i * n_ + j];
    }
    out.row_price.resize(m_);
    out.col_price.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) out.row_price[i] = pi_[row(i)];
    for (std::size_t j = 0; j < n_; ++j) out.col_price[j] = -pi_[col(j)];
    out.augmentations = augmentations;
    return out;
  }

 private:
  void relax(std::size_t u, std::size_t v, double cost) {
    if (done_[v]) return;
    const double reduced = std::max(0.0, cost + pi_[u] - pi_[v]);
    const double nd = dist_[u] + reduced;
    if (nd < dist_[v]) {
      dist_[v] = nd;
      parent_[v] = u;
    }
  }

  const TransportationProblem& p_;
  std::size_t m_, n_;
  double tol_;
  std::vector<double> flow_, sent_, received_;
  std::vector<double> pi_, dist_;
  std::vector<std::size_t> parent_;
  std::vector<bool> done_;
};

}  // namespace

TransportationSolution solve_transportation(const TransportationProblem& problem, double tolerance) {
  const std::size_t m = problem.supply.size();
  const std::size_t n = problem.demand.size();
  if (m == 0 || n == 0) throw InvalidArgument("transportation: empty supply or demand");
  if (problem.profit.size() != m * n) throw InvalidArgument("transportation: profit size mismatch");
  double total_supply = 0.0, total_demand = 0.0;
  for (double a : problem.supply) {
    if (!(a >= 0.0)) throw InvalidArgument("transportation: negative supply");
    total_supply += a;
  }
  for (double b : problem.demand) {
    if (!(b >= 0.0)) throw InvalidArgument("transportation: negative demand");
    total_demand += b;
  }
  const double scale = std::max(1.0, total_supply);
  if (std::abs(total_supply - total_demand) > tolerance * scale * static_cast<double>(m + n)) {
    throw InvalidArgument("transportation: supply and demand totals differ");
  }

  Network net(problem, tolerance);
  double shipped = 0.0;
  std::size_t augmentations = 0;
  const double slack = tolerance * scale * static_cast<double>(m + n);
  while (shipped < total_supply - slack) {
    if (!net.shortest_path()) {
      throw InternalError("transportation: no augmenting path in a balanced problem");
    }
    shipped += net.augment();
    ++augmentations;
  }
  return net.result(augmentations);
}

}  // namespace pvmerge::lp
