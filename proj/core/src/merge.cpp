#include "pvmerge/merge.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "pvmerge/error.hpp"

namespace pvmerge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void sort_into(std::span<const double> p, std::vector<double>& scratch) {
  scratch.assign(p.begin(), p.end());
  std::stable_sort(scratch.begin(), scratch.end());
}

double ruger_raw(std::span<const double> sorted, std::size_t k) {
  const double K = static_cast<double>(sorted.size());
  return (K / static_cast<double>(k)) * sorted[k - 1];
}

double hommel_raw(std::span<const double> sorted) {
  const std::size_t K = sorted.size();
  double best = ruger_raw(sorted, 1);
  for (std::size_t k = 2; k <= K; ++k) best = std::min(best, ruger_raw(sorted, k));
  return harmonic_number(K) * best;
}

double sum_of(std::span<const double> p) {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

}  // namespace

PValueVector::PValueVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) {
    throw InvalidArgument("PValueVector: need at least 2 p-values, got " +
                          std::to_string(values_.size()));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      std::ostringstream os;
      os << "PValueVector: p[" << i << "] = " << v << " is outside [0,1]";
      throw InvalidArgument(os.str());
    }
  }
}

MergedPValue MergedPValue::from_raw(double raw) { return {raw, std::min(raw, 1.0)}; }

std::string describe(const MergingRule& r) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const rule::Bonferroni&) { os << "bonferroni"; },
                 [&](const rule::Ruger& x) { os << "ruger(k=" << x.k << ")"; },
                 [&](const rule::Hommel&) { os << "hommel"; },
                 [&](const rule::ScaledAverage& x) { os << "scaled-average(factor=" << x.factor << ")"; },
                 [&](const rule::ScaledSum& x) { os << "scaled-sum(alpha=" << x.alpha << ")"; },
             },
             r);
  return os.str();
}

double harmonic_number(std::size_t K) {
  thread_local std::unordered_map<std::size_t, double> cache;
  if (auto it = cache.find(K); it != cache.end()) return it->second;
  long double h = 0.0L;
  for (std::size_t k = 1; k <= K; ++k) h += 1.0L / static_cast<long double>(k);
  const double out = static_cast<double>(h);
  cache.emplace(K, out);
  return out;
}

void validate_rule(const MergingRule& r, std::size_t K) {
  std::visit(Overloaded{
                 [](const rule::Bonferroni&) {},
                 [](const rule::Hommel&) {},
                 [&](const rule::Ruger& x) {
                   if (x.k < 1 || x.k > K) {
                     throw InvalidArgument("ruger: order k = " + std::to_string(x.k) +
                                           " outside [1, " + std::to_string(K) + "]");
                   }
                 },
                 [](const rule::ScaledAverage& x) {
                   if (!(x.factor > 0.0) || !std::isfinite(x.factor)) {
                     throw InvalidArgument("scaled average: factor must be positive and finite");
                   }
                 },
                 [](const rule::ScaledSum& x) {
                   if (!(x.alpha > 0.0) || !std::isfinite(x.alpha)) {
                     throw InvalidArgument("scaled sum: alpha must be positive and finite");
                   }
                 },
             },
             r);
}

double raw_value(const MergingRule& r, std::span<const double> p, std::vector<double>& scratch) {
  return std::visit(
      Overloaded{
          [&](const rule::Bonferroni&) {
            return static_cast<double>(p.size()) * *std::min_element(p.begin(), p.end());
          },
          [&](const rule::Ruger& x) {
            sort_into(p, scratch);
            return ruger_raw(scratch, x.k);
          },
          [&](const rule::Hommel&) {
            sort_into(p, scratch);
            return hommel_raw(scratch);
          },
          [&](const rule::ScaledAverage& x) {
            return x.factor * sum_of(p) / static_cast<double>(p.size());
          },
          [&](const rule::ScaledSum& x) { return x.alpha * sum_of(p); },
      },
      r);
}

MergedPValue merge(const MergingRule& r, const PValueVector& p) {
  validate_rule(r, p.size());
  std::vector<double> scratch;
  return MergedPValue::from_raw(raw_value(r, p.values(), scratch));
}

MergedPValue merge_bonferroni(const PValueVector& p) { return merge(rule::Bonferroni{}, p); }

MergedPValue merge_ruger(const PValueVector& p, std::size_t k) { return merge(rule::Ruger{k}, p); }

MergedPValue merge_hommel(const PValueVector& p) { return merge(rule::Hommel{}, p); }

MergedPValue merge_scaled_average(const PValueVector& p, double factor) {
  return merge(rule::ScaledAverage{factor}, p);
}

MergedPValue merge_scaled_sum(const PValueVector& p, double alpha) {
  return merge(rule::ScaledSum{alpha}, p);
}

// --- randomized probability-integral transform -----------------------------

DiscreteDistribution::DiscreteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("DiscreteDistribution: no atoms");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!(a.value >= 0.0 && a.value <= 1.0)) {
      throw InvalidArgument("DiscreteDistribution: atom value outside [0,1]");
    }
    if (!(a.mass >= 0.0)) throw InvalidArgument("DiscreteDistribution: negative mass");
    if (i > 0 && !(atoms_[i - 1].value < a.value)) {
      throw InvalidArgument("DiscreteDistribution: atom values must be sorted and distinct");
    }
    total += a.mass;
    cumulative_.push_back(total);
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw InvalidArgument("DiscreteDistribution: masses sum to " + std::to_string(total) +
                          ", not 1");
  }
}

std::pair<double, double> DiscreteDistribution::split_at(double observed) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), observed,
                             [](const Atom& a, double v) { return a.value < v; });
  if (it == atoms_.end() || it->value != observed) {
    throw InvalidArgument("randomized_pit: observed value is not an atom of the distribution");
  }
  const auto i = static_cast<std::size_t>(it - atoms_.begin());
  const double below = i == 0 ? 0.0 : cumulative_[i - 1];
  return {below, it->mass};
}

double DiscreteDistribution::quantile(double u) const {
  const double target = u * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())].value;
}

double randomized_pit(const DiscreteDistribution& dist, double observed, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidArgument("randomized_pit: theta outside [0,1]");
  const auto [below, at] = dist.split_at(observed);
  return below + theta * at;
}

}  // namespace pvmerge
