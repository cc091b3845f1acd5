#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "oracles.hpp"
#include "pvmerge/error.hpp"
#include "pvmerge/merge.hpp"
#include "pvmerge/sampling.hpp"

namespace pvmerge {
namespace {

TEST(PValueVector, RejectsShortAndOutOfRange) {
  EXPECT_THROW(PValueVector({0.5}), InvalidArgument);
  EXPECT_THROW(PValueVector({0.5, 1.5}), InvalidArgument);
  EXPECT_THROW(PValueVector({-0.1, 0.5}), InvalidArgument);
  EXPECT_THROW(PValueVector({0.1, std::nan("")}), InvalidArgument);
  EXPECT_NO_THROW(PValueVector({0.0, 1.0}));
}

TEST(Bonferroni, Examples) {
  EXPECT_DOUBLE_EQ(merge_bonferroni({0.01, 0.5}).raw, 0.02);
  const auto m = merge_bonferroni({0.6, 0.7, 0.9});
  EXPECT_DOUBLE_EQ(m.raw, 1.8);
  EXPECT_EQ(m.clipped, 1.0);
  EXPECT_EQ(merge_bonferroni({0.0, 0.3, 0.8}).raw, 0.0);
}

TEST(Ruger, Examples) {
  EXPECT_DOUBLE_EQ(merge_ruger({0.20, 0.05, 0.90, 0.40}, 2).raw, 0.40);
  EXPECT_DOUBLE_EQ(merge_ruger({0.1, 0.2, 0.3}, 3).raw, 0.3);
  EXPECT_THROW(merge_ruger({0.1, 0.2, 0.3}, 0), InvalidArgument);
  EXPECT_THROW(merge_ruger({0.1, 0.2, 0.3}, 4), InvalidArgument);
}

TEST(Ruger, OrderOneIsBitIdenticalToBonferroni) {
  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> p(2 + trial % 7);
    for (auto& x : p) x = rng.uniform();
    const PValueVector v(p);
    EXPECT_EQ(merge_ruger(v, 1).raw, merge_bonferroni(v).raw);
  }
}

TEST(Hommel, Examples) {
  EXPECT_NEAR(merge_hommel({0.1, 0.2, 0.3}).raw, 0.55, 1e-15);
  for (double q : {0.0, 0.01, 0.3, 0.9}) {
    EXPECT_NEAR(merge_hommel({q, q}).raw, 1.5 * q, 1e-15);
  }
}

TEST(Hommel, HarmonicNumber) {
  EXPECT_EQ(harmonic_number(1), 1.0);
  EXPECT_EQ(harmonic_number(2), 1.5);
  EXPECT_NEAR(harmonic_number(3), 11.0 / 6.0, 1e-16);
  // H_K - ln K - gamma ~ 1/(2K)
  const double K = 1e6;
  EXPECT_NEAR(harmonic_number(1'000'000) - std::log(K) - 0.57721566490153286, 1.0 / (2 * K), 1e-12);
}

TEST(ScaledAverage, Examples) {
  EXPECT_DOUBLE_EQ(merge_scaled_average({0.1, 0.3}).raw, 0.4);
  for (std::size_t K : {2u, 3u, 5u, 10u}) {
    const PValueVector p(std::vector<double>(K, 0.07));
    EXPECT_NEAR(merge_scaled_average(p).raw, 0.14, 1e-15) << K;
  }
  EXPECT_DOUBLE_EQ(merge_scaled_sum({0.02, 0.02}, 0.9).raw, 0.036);
  EXPECT_THROW(merge_scaled_average({0.1, 0.2}, 0.0), InvalidArgument);
  EXPECT_THROW(merge_scaled_sum({0.1, 0.2}, -1.0), InvalidArgument);
}

TEST(MergedPValue, ClippingAndDescribe) {
  const auto m = MergedPValue::from_raw(2.5);
  EXPECT_EQ(m.raw, 2.5);
  EXPECT_EQ(m.clipped, 1.0);
  EXPECT_EQ(describe(MergingRule{rule::Ruger{2}}), "ruger(k=2)");
  EXPECT_EQ(describe(MergingRule{rule::Hommel{}}), "hommel");
}

std::vector<MergingRule> all_rules(std::size_t K) {
  return {rule::Bonferroni{}, rule::Ruger{1}, rule::Ruger{K}, rule::Ruger{(K + 1) / 2},
          rule::Hommel{},     rule::ScaledAverage{2.0}, rule::ScaledSum{0.9}};
}

TEST(MergeProperties, MonotoneSymmetricAndInRange) {
  std::mt19937_64 gen(11);
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t K = 2 + static_cast<std::size_t>(trial % 6);
    std::vector<double> p(K);
    for (auto& x : p) x = rng.uniform();
    auto shuffled = p;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    auto bumped = p;
    const std::size_t k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(K)) % K;
    bumped[k] = std::min(1.0, bumped[k] + rng.uniform() * 0.2);

    for (const auto& r : all_rules(K)) {
      const auto base = merge(r, PValueVector(p));
      EXPECT_GE(base.raw, 0.0);
      EXPECT_GE(base.clipped, 0.0);
      EXPECT_LE(base.clipped, 1.0);
      EXPECT_EQ(base.clipped, std::min(base.raw, 1.0));
      // Summation order can move the last bit for the averaging rules.
      EXPECT_NEAR(merge(r, PValueVector(shuffled)).raw, base.raw, 1e-15) << describe(r);
      EXPECT_GE(merge(r, PValueVector(bumped)).raw, base.raw - 1e-15) << describe(r);
    }
  }
}

TEST(MergeProperties, DominanceChainAtEqualPValues) {
  for (std::size_t K : {2u, 3u, 4u, 8u, 20u}) {
    for (double q : {0.001, 0.01, 0.2, 0.45}) {
      const PValueVector p(std::vector<double>(K, q));
      const double bonf = merge_bonferroni(p).raw;
      EXPECT_LE(merge_hommel(p).raw, harmonic_number(K) * bonf + 1e-15);
      const double avg2 = merge_scaled_average(p).raw;
      EXPECT_NEAR(avg2, 2 * q, 1e-15);
      EXPECT_LE(avg2, bonf + 1e-15);
      if (K > 2) EXPECT_LT(avg2, bonf);
    }
  }
}

TEST(RandomizedPit, Examples) {
  const DiscreteDistribution point({{0.5, 1.0}});
  EXPECT_DOUBLE_EQ(randomized_pit(point, 0.5, 0.25), 0.25);
  const DiscreteDistribution two({{0.2, 0.5}, {0.8, 0.5}});
  EXPECT_DOUBLE_EQ(randomized_pit(two, 0.8, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(randomized_pit(two, 0.8, 1.0), 1.0);
  EXPECT_THROW(randomized_pit(two, 0.5, 0.5), InvalidArgument);
  EXPECT_THROW(randomized_pit(two, 0.2, 1.5), InvalidArgument);
}

TEST(RandomizedPit, DistributionValidation) {
  EXPECT_THROW(DiscreteDistribution({}), InvalidArgument);
  EXPECT_THROW(DiscreteDistribution({{0.2, 0.5}, {0.1, 0.5}}), InvalidArgument);
  EXPECT_THROW(DiscreteDistribution({{0.2, 0.5}, {0.2, 0.5}}), InvalidArgument);
  EXPECT_THROW(DiscreteDistribution({{0.2, 0.5}, {0.3, 0.4}}), InvalidArgument);
  EXPECT_THROW(DiscreteDistribution({{0.2, -0.5}, {0.3, 1.5}}), InvalidArgument);
  EXPECT_NO_THROW(DiscreteDistribution({{0.2, 0.5}, {0.3, 0.5 + 5e-13}}));
}

TEST(RandomizedPit, MonotoneInObservedAndTheta) {
  const DiscreteDistribution d({{0.05, 0.1}, {0.2, 0.25}, {0.5, 0.3}, {1.0, 0.35}});
  double prev = -1.0;
  for (const auto& a : d.atoms()) {
    for (double theta : {0.0, 0.3, 0.7, 1.0}) {
      const double u = randomized_pit(d, a.value, theta);
      EXPECT_GE(u, prev);
      prev = u;
    }
  }
}

TEST(RandomizedPit, UniformAndBelowCdf) {
  const DiscreteDistribution d({{0.05, 0.1}, {0.2, 0.25}, {0.5, 0.3}, {1.0, 0.35}});
  Rng rng(20121201);
  constexpr std::size_t kDraws = 100'000;
  std::vector<double> us;
  us.reserve(kDraws);
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double observed = d.quantile(rng.uniform());
    const double u = randomized_pit(d, observed, rng.uniform());
    const auto [below, at] = d.split_at(observed);
    ASSERT_LE(u, below + at);
    us.push_back(u);
  }
  EXPECT_LT(testing::ks_uniform(us), testing::ks_critical_1pct(kDraws));
}

}  // namespace
}  // namespace pvmerge
