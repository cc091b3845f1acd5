// Acceptance suite. Prints one PASS/FAIL line per criterion, preceded by
// indented detail lines, and exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "random_specs.hpp"
#include "pvmerge/dual_cert.hpp"
#include "pvmerge/extremal2.hpp"
#include "pvmerge/grid_copula.hpp"
#include "pvmerge/ucp.hpp"
#include "pvmerge/ucp_exact.hpp"

namespace pvmerge {
namespace {

struct Criterion {
  int id;
  const char* title;
  double time_limit_s;  // 0 when no runtime bound applies
  std::function<bool()> run;
};

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

constexpr std::array<double, 5> kSumsK2{0.1, 0.25, 0.5, 0.75, 1.0};
constexpr std::array<double, 3> kSumsK3{0.3, 0.75, 1.5};

bool sandwich_k2() {
  bool ok = true;
  for (double s : kSumsK2) {
    const auto b = ucp_bounds(set::SumThreshold{s}, 2, 64);
    const double ref = std::min(s, 1.0);
    const bool pass = b.contains(ref) && b.width() <= 0.05;
    detail("s=%.2f  [%.6f, %.6f]  ref=%.6f  gap=%.6f  %s", s, b.lower, b.upper, ref, b.width(),
           pass ? "ok" : "BAD");
    ok &= pass;
  }
  return ok;
}

bool sandwich_k3() {
  bool ok = true;
  for (double s : kSumsK3) {
    const double ref = ruschendorf_value(s, 3);
    const auto b10 = ucp_bounds(set::SumThreshold{s}, 3, 10);
    const auto b12 = ucp_bounds(set::SumThreshold{s}, 3, 12);
    const bool pass = b10.contains(ref) && b12.contains(ref) && b10.width() <= 0.35 &&
                      b12.width() < b10.width();
    detail("s=%.2f  n=10 [%.6f, %.6f] gap=%.6f  n=12 [%.6f, %.6f] gap=%.6f  ref=%.6f  %s", s,
           b10.lower, b10.upper, b10.width(), b12.lower, b12.upper, b12.width(), ref,
           pass ? "ok" : "BAD");
    ok &= pass;
  }
  return ok;
}

bool certificate_exactness() {
  bool ok = true;
  for (std::size_t K : {2u, 3u, 4u}) {
    const std::size_t grid = K == 2 ? 101 : K == 3 ? 31 : 17;
    double worst_value_err = 0.0, worst_violation = 0.0;
    bool feasible = true;
    for (int i = 1; i <= 20; ++i) {
      const double s = static_cast<double>(K) / 2.0 * i / 20.0;
      const auto cert = build_ruschendorf_certificate(s, K);
      worst_value_err = std::max(
          worst_value_err, std::abs(certificate_value(cert) - 2.0 * s / static_cast<double>(K)));
      const auto report = check_feasibility(cert, grid);
      feasible &= report.feasible_on_grid;
      worst_violation = std::max(worst_violation, report.worst_violation);
    }
    const bool pass = worst_value_err <= 1e-12 && feasible && worst_violation == 0.0;
    detail("K=%zu grid_n=%zu  max|value-2s/K|=%.3g  worst_violation=%g  %s", K, grid,
           worst_value_err, worst_violation, pass ? "ok" : "BAD");
    ok &= pass;
  }
  return ok;
}

bool weak_duality() {
  bool ok = true;
  auto check = [&](double s, std::size_t K, std::size_t n) {
    const double primal = ucp_primal_lp(set::SumThreshold{s}, K, n, CellEvaluation::Pessimistic).value;
    const auto cert = build_ruschendorf_certificate(s, K);
    const bool pass = weak_duality_check(primal, cert, kWeakDualityTolerance);
    detail("K=%zu n=%zu s=%.2f  primal=%.9f  dual=%.9f  %s", K, n, s, primal,
           certificate_value(cert), pass ? "ok" : "BAD");
    ok &= pass;
  };
  for (double s : kSumsK2) check(s, 2, 64);
  for (double s : kSumsK3) {
    check(s, 3, 10);
    check(s, 3, 12);
  }
  return ok;
}

bool factor_two_tightness() {
  constexpr std::size_t kCount = 1'000'000;
  const auto avg = type1_error_mc(rule::ScaledAverage{2.0},
                                  ExtremalSampler(build_extremal_copula(0.05)), 0.05, 1, kCount);
  const bool avg_ok = avg.rate >= 0.049 && avg.rate <= 0.051;
  detail("M under t=0.05: rate=%.6f (want [0.049, 0.051])  %s", avg.rate, avg_ok ? "ok" : "BAD");
  const auto m09 = type1_error_mc(rule::ScaledSum{0.9},
                                  ExtremalSampler(build_extremal_copula(0.05 / 0.9)), 0.05, 2, kCount);
  const bool m09_ok = m09.rate >= 0.054;
  detail("M_0.9 under t=0.05/0.9: rate=%.6f (want >= 0.054)  %s", m09.rate, m09_ok ? "ok" : "BAD");
  return avg_ok && m09_ok;
}

bool reference_values() {
  bool ok = true;
  struct BoxCase {
    std::vector<double> u;
    std::size_t n;
  };
  for (const auto& c : {BoxCase{{0.2, 0.7}, 10}, BoxCase{{0.5, 0.25}, 8}, BoxCase{{0.35, 0.9}, 20},
                        BoxCase{{1.0, 0.6}, 5}, BoxCase{{0.4, 0.4}, 40}}) {
    const double v = ucp_primal_lp(set::Box{c.u}, 2, c.n, CellEvaluation::Pessimistic).value;
    const double ref = std::min(c.u[0], c.u[1]);
    const bool pass = std::abs(v - ref) <= 1e-9;
    detail("box(%.2f, %.2f) n=%zu  lp=%.12f  ref=%.12f  %s", c.u[0], c.u[1], c.n, v, ref,
           pass ? "ok" : "BAD");
    ok &= pass;
  }
  struct RugerCase {
    std::size_t K, k, n;
    double alpha;
  };
  for (const auto& c : {RugerCase{2, 1, 40, 0.05}, RugerCase{2, 2, 20, 0.25},
                        RugerCase{2, 1, 10, 0.7}, RugerCase{3, 1, 10, 0.1},
                        RugerCase{3, 2, 10, 0.2}, RugerCase{3, 3, 10, 0.4}}) {
    const double v =
        ucp_primal_lp(set::RugerSet{c.alpha, c.k}, c.K, c.n, CellEvaluation::Pessimistic).value;
    const double ref = std::min(static_cast<double>(c.K) / static_cast<double>(c.k) * c.alpha, 1.0);
    const bool pass = std::abs(v - ref) <= 1e-9;
    detail("ruger(alpha=%.2f, k=%zu) K=%zu n=%zu  lp=%.12f  ref=%.12f  %s", c.alpha, c.k, c.K, c.n,
           v, ref, pass ? "ok" : "BAD");
    ok &= pass;
  }
  return ok;
}

bool domination_surfaces() {
  bool ok = true;
  for (const MergingRule& r :
       {MergingRule{rule::ScaledAverage{2.0}}, MergingRule{rule::Bonferroni{}},
        MergingRule{rule::Ruger{1}}, MergingRule{rule::Ruger{2}}, MergingRule{rule::Hommel{}}}) {
    const auto report = check_dominates_M(surface_from_rule(r, 201));
    detail("%-22s dominates=%s  %s", describe(r).c_str(), report.dominates ? "true" : "false",
           report.dominates ? "ok" : "BAD");
    ok &= report.dominates;
  }
  const MergingSurface inflated{[](double a, double b) { return 1.1 * (a + b); }, 201,
                                "1.1*(u1+u2)"};
  const auto report = check_dominates_M(inflated);
  const bool pass = !report.dominates && report.witness.has_value() &&
                    report.band_lower < report.band_upper;
  if (report.witness) {
    detail("%-22s dominates=false  witness=(%.3f, %.3f)  band=(%.4f, %.4f)  %s",
           inflated.name.c_str(), (*report.witness)[0], (*report.witness)[1], report.band_lower,
           report.band_upper, pass ? "ok" : "BAD");
  } else {
    detail("%-22s dominates=true  BAD", inflated.name.c_str());
  }
  return ok && pass;
}

bool type_one_error() {
  constexpr std::size_t kCopulas = 50, kN = 16, kCount = 100'000;
  const std::vector<MergingRule> rules{rule::Bonferroni{}, rule::Ruger{1}, rule::Ruger{2},
                                       rule::Hommel{}, rule::ScaledAverage{2.0}};
  Rng rng(20120318);
  std::size_t checks = 0, failures = 0;
  double worst_excess = -1.0;
  for (std::size_t c = 0; c < kCopulas; ++c) {
    const std::size_t parts = 1 + rng.next() % 4;
    std::vector<std::vector<std::size_t>> perms;
    std::vector<double> weights;
    for (std::size_t r = 0; r < parts; ++r) {
      std::vector<std::size_t> p(kN);
      for (std::size_t i = 0; i < kN; ++i) p[i] = i;
      for (std::size_t i = kN; i-- > 1;) std::swap(p[i], p[rng.next() % (i + 1)]);
      perms.push_back(std::move(p));
      weights.push_back(rng.uniform() + 1e-3);
    }
    const GridCopulaSampler sampler(GridCopula::permutation_mixture(kN, perms, weights));
    for (double eps : {0.01, 0.05, 0.1}) {
      for (const auto& r : rules) {
        const auto res = type1_error_mc(r, sampler, eps, mix_seed(c, checks), kCount);
        ++checks;
        worst_excess = std::max(worst_excess, (res.rate - eps) / res.band);
        if (!res.within_band()) {
          ++failures;
          detail("copula %zu eps=%.2f %s: rate=%.5f > %.5f", c, eps, describe(r).c_str(), res.rate,
                 eps + res.band);
        }
      }
    }
  }
  detail("%zu checks, %zu above eps + 3 sigma; largest (rate - eps)/band = %.3f", checks, failures,
         worst_excess);
  return failures == 0;
}

bool oracle_equivalence() {
  Rng rng(99);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = 2 + rng.next() % 5;
    const auto spec = testing::random_box_union(rng, 2, 1 + rng.next() % 4);
    const auto eval = i % 2 == 0 ? CellEvaluation::Pessimistic : CellEvaluation::Optimistic;
    const auto exact = ucp_primal_lp_exact(spec, 2, n, eval);
    UcpOptions opt;
    opt.method = LpMethod::Transportation;
    const double fp = ucp_primal_lp(spec, 2, n, eval, opt).value;
    const double err = std::abs(exact.approx - fp);
    worst = std::max(worst, err);
    ok &= err <= 1e-9;
  }
  detail("20 random decreasing sets, n in [2, 6]: max |exact - transportation| = %.3g", worst);
  return ok;
}

}  // namespace
}  // namespace pvmerge

int main() {
  using namespace pvmerge;
  const std::vector<Criterion> criteria{
      {1, "sandwich K=2 at n=64 brackets min(s,1), gap <= 0.05", 30.0, sandwich_k2},
      {2, "sandwich K=3 at n=10 brackets min(2s/3,1), gap <= 0.35, shrinks at n=12", 120.0,
       sandwich_k3},
      {3, "closed-form certificate value 2s/K and zero grid violation", 0.0,
       certificate_exactness},
      {4, "weak duality: pessimistic primal <= certificate value + 1e-7", 0.0, weak_duality},
      {5, "factor 2 tight at K=2; M_0.9 invalid", 60.0, factor_two_tightness},
      {6, "box and Ruger-set reference values within 1e-9", 0.0, reference_values},
      {7, "merge surfaces dominate M; 1.1*(u1+u2) does not", 0.0, domination_surfaces},
      {8, "type I error within eps + 3 sigma on 50 random grid copulas", 180.0, type_one_error},
      {9, "exact rational LP agrees with transportation solver", 0.0, oracle_equivalence},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
      ok = c.run();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!error.empty()) std::printf("    exception: %s\n", error.c_str());
    if (ok && c.time_limit_s > 0.0 && secs > c.time_limit_s) {
      std::printf("    runtime %.2f s exceeds the %.0f s limit\n", secs, c.time_limit_s);
      ok = false;
    }
    std::printf("%s criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.title, secs);
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
