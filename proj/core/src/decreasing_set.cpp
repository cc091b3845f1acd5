#include "pvmerge/decreasing_set.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pvmerge/error.hpp"
#include "pvmerge/sampling.hpp"

namespace pvmerge {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate_spec(const DecreasingSetSpec& spec, std::size_t K) {
  if (K < 2) throw InvalidArgument("dimension K must be at least 2");
  std::visit(Overloaded{
                 [](const set::SumThreshold& x) {
                   if (!(x.s >= 0.0) || !std::isfinite(x.s)) {
                     throw InvalidArgument("sum threshold s must be finite and nonnegative");
                   }
                 },
                 [&](const set::RugerSet& x) {
                   if (!(x.alpha >= 0.0 && x.alpha <= 1.0)) {
                     throw InvalidArgument("ruger set: alpha must lie in [0,1]");
                   }
                   if (x.order < 1 || x.order > K) {
                     throw InvalidArgument("ruger set: order k must lie in [1, K]");
                   }
                 },
                 [&](const set::Box& x) {
                   if (x.upper.size() != K) {
                     throw InvalidArgument("box: expected " + std::to_string(K) +
                                           " corner coordinates, got " +
                                           std::to_string(x.upper.size()));
                   }
                   for (double v : x.upper) {
                     if (!(v >= 0.0 && v <= 1.0)) {
                       throw InvalidArgument("box: corner coordinates must lie in [0,1]");
                     }
                   }
                 },
                 [](const set::GeneralBoundary& x) {
                   if (!x.contains) throw InvalidArgument("general boundary: empty indicator");
                 },
             },
             spec);
}

bool contains(const DecreasingSetSpec& spec, std::span<const double> u) {
  return std::visit(Overloaded{
                        [&](const set::SumThreshold& x) {
                          double sum = 0.0;
                          for (double v : u) sum += v;
                          return sum <= x.s + kBoundaryTolerance;
                        },
                        [&](const set::RugerSet& x) {
                          std::size_t small = 0;
                          for (double v : u) small += v <= x.alpha + kBoundaryTolerance ? 1 : 0;
                          return small >= x.order;
                        },
                        [&](const set::Box& x) {
                          for (std::size_t k = 0; k < u.size(); ++k) {
                            if (u[k] > x.upper[k] + kBoundaryTolerance) return false;
                          }
                          return true;
                        },
                        [&](const set::GeneralBoundary& x) { return x.contains(u); },
                    },
                    spec);
}

bool is_symmetric(const DecreasingSetSpec& spec) {
  return std::visit(Overloaded{
                        [](const set::SumThreshold&) { return true; },
                        [](const set::RugerSet&) { return true; },
                        [](const set::Box& x) {
                          return std::adjacent_find(x.upper.begin(), x.upper.end(),
                                                    std::not_equal_to<>()) == x.upper.end();
                        },
                        [](const set::GeneralBoundary& x) { return x.symmetric; },
                    },
                    spec);
}

std::string describe(const DecreasingSetSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const set::SumThreshold& x) { os << "sum-threshold(s=" << x.s << ")"; },
                 [&](const set::RugerSet& x) {
                   os << "ruger-set(alpha=" << x.alpha << ", k=" << x.order << ")";
                 },
                 [&](const set::Box& x) {
                   os << "box(";
                   for (std::size_t i = 0; i < x.upper.size(); ++i) os << (i ? "," : "") << x.upper[i];
                   os << ")";
                 },
                 [&](const set::GeneralBoundary& x) { os << x.name; },
             },
             spec);
  return os.str();
}

bool spot_check_decreasing(const DecreasingSetSpec& spec, std::size_t K, std::uint64_t seed,
                           std::size_t trials) {
  Rng rng(seed);
  std::vector<double> hi(K), lo(K);
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      hi[k] = rng.uniform();
      lo[k] = hi[k];
    }
    // Alternate single-coordinate moves with moves of every coordinate.
    if (t % 2 == 0) {
      const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(K)) % K;
      lo[k] = hi[k] * rng.uniform();
    } else {
      for (std::size_t k = 0; k < K; ++k) lo[k] = hi[k] * rng.uniform();
    }
    if (contains(spec, hi) && !contains(spec, lo)) return false;
  }
  return true;
}

}  // namespace pvmerge
