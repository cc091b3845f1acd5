#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace pvmerge {

/// K >= 2 p-values, each in [0,1]. Validated on construction.
class PValueVector {
 public:
  explicit PValueVector(std::vector<double> values);
  PValueVector(std::initializer_list<double> values)
      : PValueVector(std::vector<double>(values)) {}

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

struct MergedPValue {
  double raw = 0.0;      // unclipped F(p)
  double clipped = 0.0;  // min(raw, 1)

  static MergedPValue from_raw(double raw);
};

namespace rule {
struct Bonferroni {};
/// (K/k) p_(k), the k-th order statistic scaled up.
struct Ruger {
  std::size_t k = 1;
};
struct Hommel {};
/// factor * mean(p); factor 2 is the validated twice-the-average rule.
struct ScaledAverage {
  double factor = 2.0;
};
/// alpha * (p_1 + ... + p_K); the M_alpha family studied at K = 2.
struct ScaledSum {
  double alpha = 1.0;
};
}  // namespace rule

using MergingRule = std::variant<rule::Bonferroni, rule::Ruger, rule::Hommel,
                                 rule::ScaledAverage, rule::ScaledSum>;

/// Short human-readable name, e.g. "ruger(k=2)".
std::string describe(const MergingRule& r);

MergedPValue merge_bonferroni(const PValueVector& p);
MergedPValue merge_ruger(const PValueVector& p, std::size_t k);
MergedPValue merge_hommel(const PValueVector& p);
MergedPValue merge_scaled_average(const PValueVector& p, double factor = 2.0);
MergedPValue merge_scaled_sum(const PValueVector& p, double alpha);

MergedPValue merge(const MergingRule& r, const PValueVector& p);

/// Checks rule parameters against dimension K; throws InvalidArgument.
void validate_rule(const MergingRule& r, std::size_t K);

/// Hot-path evaluation for Monte Carlo loops. `p` is trusted to lie in
/// [0,1]; `scratch` is reused across calls to avoid allocation. The rule
/// must already have passed validate_rule for p.size().
double raw_value(const MergingRule& r, std::span<const double> p,
                 std::vector<double>& scratch);

/// 1 + 1/2 + ... + 1/K, summed left to right in long double.
double harmonic_number(std::size_t K);

/// Law of a discrete p-value function: sorted distinct atoms with masses
/// summing to one within 1e-12.
class DiscreteDistribution {
 public:
  struct Atom {
    double value;
    double mass;
  };

  explicit DiscreteDistribution(std::vector<Atom> atoms);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  /// Prob(P < x) and Prob(P = x) for an atom value x.
  std::pair<double, double> split_at(double observed) const;
  /// Inverse-CDF draw from a uniform u in [0,1).
  double quantile(double u) const;

  static constexpr double kMassTolerance = 1e-12;

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;  // cumulative_[i] = Prob(P <= atoms_[i])
};

/// Prob(P < observed) + theta * Prob(P = observed). With theta ~ U[0,1]
/// independent of P ~ dist, the output is uniform and never exceeds the
/// distribution function at `observed`.
double randomized_pit(const DiscreteDistribution& dist, double observed,
                      double theta);

}  // namespace pvmerge
