#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "quorum/errors.hpp"
#include "quorum/rng.hpp"
#include "quorum/stats.hpp"

#include "oracles.hpp"

using namespace quorum;

// ---------------------------------------------------------------------------
// chi-square
// ---------------------------------------------------------------------------

TEST_CASE("uniform observed counts give statistic 0 and p 1") {
  const auto result = chi_square_test({75, 75, 75, 75}, 100, 3);
  CHECK(result.statistic == 0.0);
  CHECK(result.p_value == 1.0);
  CHECK(result.df == 3);
  CHECK(result.expected == 75.0);
}

TEST_CASE("hand-derived statistic for a skewed distribution") {
  // observed {150,50,50,50}, expected 75 each:
  // 75^2/75 + 3 * 25^2/75 = 75 + 25 = 100
  const auto result = chi_square_test({150, 50, 50, 50}, 100, 3);
  CHECK(result.statistic == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(result.p_value == doctest::Approx(oracle::chi_square_sf_reference(100.0, 3)).epsilon(1e-9));
}

TEST_CASE("statistic is invariant under permutation of category labels") {
  const auto a = chi_square_test({150, 50, 50, 50}, 100, 3);
  const auto b = chi_square_test({50, 50, 150, 50}, 100, 3);
  CHECK(a.statistic == b.statistic);
}

TEST_CASE("chi-square test input validation") {
  CHECK_THROWS_AS(chi_square_test({1, 1, 1, 1}, 100, 3), ValidationError);  // count mismatch
  CHECK_THROWS_AS(chi_square_test({0, 0, 0, 0}, 0, 3), ValidationError);    // zero questions
  CHECK_THROWS_AS(chi_square_test({-1, 1, 0, 0}, 0, 3), ValidationError);
}

TEST_CASE("survival function endpoints and textbook critical values") {
  CHECK(chi_square_sf(0.0, 3) == 1.0);
  CHECK(chi_square_sf(3.8415, 1) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(std::abs(chi_square_sf(3.8415, 1) - 0.05) < 1e-4);
  CHECK(std::abs(chi_square_sf(12.838, 3) - 0.005) < 1e-4);
  CHECK_THROWS_AS(chi_square_sf(-0.1, 3), ValidationError);
  CHECK_THROWS_AS(chi_square_sf(1.0, 0), ValidationError);
}

TEST_CASE("survival function matches the closed-form oracle to 1e-10") {
  const double stats[] = {0.0,  0.25, 0.5, 1.0,  2.0,  3.8415, 5.0,   7.8147, 10.0, 12.838,
                          15.0, 20.0, 30., 50.0, 75.0, 100.0,  150.0, 250.0,  400.0, 1000.0};
  const int dfs[] = {1, 2, 3, 4, 5, 7, 10, 20, 50, 100};
  for (double x : stats) {
    for (int df : dfs) {
      const double ours = chi_square_sf(x, df);
      const double reference = oracle::chi_square_sf_reference(x, df);
      CHECK(std::abs(ours - reference) <= 1e-10);
    }
  }
}

TEST_CASE("survival function decreases in the statistic") {
  for (int df : {1, 3, 10}) {
    double previous = 1.5;
    for (double x = 0.0; x <= 60.0; x += 0.5) {
      const double p = chi_square_sf(x, df);
      CHECK(p <= previous);
      previous = p;
    }
  }
}

// ---------------------------------------------------------------------------
// Fleiss' kappa
// ---------------------------------------------------------------------------

TEST_CASE("two-question fixture gives kappa exactly 0.25") {
  // tallies {A:3} and {A:1,B:2}:
  //   P-bar  = (6/6 + 2/6) / 2 = 2/3
  //   p_A = 4/6, p_B = 2/6  ->  Pe-bar = 4/9 + 1/9 = 5/9
  //   kappa = (2/3 - 5/9) / (1 - 5/9) = (1/9) / (4/9) = 1/4
  const auto result = fleiss_kappa(std::vector<std::array<int, 4>>{{3, 0, 0, 0}, {1, 2, 0, 0}});
  CHECK(result.kappa == 0.25);
  CHECK(result.p_bar == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(result.pe_bar == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK_FALSE(result.degenerate);
}

TEST_CASE("unanimous questions over varying options give kappa exactly 1") {
  const auto result = fleiss_kappa(
      std::vector<std::array<int, 4>>{{3, 0, 0, 0}, {0, 3, 0, 0}, {0, 0, 0, 3}});
  CHECK(result.kappa == 1.0);
  CHECK_FALSE(result.degenerate);
  CHECK(result.interpretation == "Almost perfect agreement");
}

TEST_CASE("degenerate case: every vote in one category") {
  const auto result = fleiss_kappa(std::vector<std::array<int, 4>>{{3, 0, 0, 0}, {3, 0, 0, 0}});
  CHECK(result.kappa == 1.0);
  CHECK(result.degenerate);
}

TEST_CASE("interpretation bands match the published labels") {
  CHECK(kappa_interpretation(0.7160) == "Substantial agreement");
  CHECK(kappa_interpretation(0.2811) == "Fair agreement");
  CHECK(kappa_interpretation(0.4275) == "Moderate agreement");
  CHECK(kappa_interpretation(0.5572) == "Moderate agreement");
  CHECK(kappa_interpretation(0.95) == "Almost perfect agreement");
  CHECK(kappa_interpretation(0.05) == "Slight agreement");
  CHECK(kappa_interpretation(-0.2) == "Poor agreement");
}

TEST_CASE("all 64 single-question tallies match direct formula evaluation") {
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; a + b <= 3; ++b) {
      for (int c = 0; a + b + c <= 3; ++c) {
        const int d = 3 - a - b - c;
        const std::array<int, 4> tally{a, b, c, d};
        const auto result = fleiss_kappa(std::vector<std::array<int, 4>>{tally});
        CHECK(result.kappa ==
              doctest::Approx(oracle::fleiss_kappa_single_question(tally)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("kappa is invariant under category relabeling") {
  CounterRng rng(911);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::array<int, 4>> tallies;
    for (int i = 0; i < 10; ++i) {
      std::array<int, 4> tally{};
      for (int vote = 0; vote < 3; ++vote) tally[rng.next_below(4)]++;
      tallies.push_back(tally);
    }
    std::array<int, 4> perm{0, 1, 2, 3};
    for (int i = 3; i > 0; --i) std::swap(perm[i], perm[rng.next_below(i + 1)]);

    std::vector<std::array<int, 4>> relabeled;
    for (const auto& tally : tallies) {
      std::array<int, 4> moved{};
      for (int k = 0; k < 4; ++k) moved[perm[k]] = tally[k];
      relabeled.push_back(moved);
    }
    CHECK(fleiss_kappa(tallies).kappa == fleiss_kappa(relabeled).kappa);
  }
}

TEST_CASE("independent uniform raters drive kappa to zero") {
  CounterRng rng(20250101);
  std::vector<std::array<int, 4>> tallies;
  tallies.reserve(10000);
  for (int i = 0; i < 10000; ++i) {
    std::array<int, 4> tally{};
    for (int vote = 0; vote < 3; ++vote) tally[rng.next_below(4)]++;
    tallies.push_back(tally);
  }
  CHECK(std::abs(fleiss_kappa(tallies).kappa) < 0.02);
}

TEST_CASE("kappa input validation") {
  CHECK_THROWS_AS(fleiss_kappa(std::vector<std::vector<std::int64_t>>{}), ValidationError);
  CHECK_THROWS_WITH_AS(fleiss_kappa(std::vector<std::vector<std::int64_t>>{{3, 0}, {1, 1, 1}}),
                       doctest::Contains("ragged"), ValidationError);
  CHECK_THROWS_WITH_AS(fleiss_kappa(std::vector<std::vector<std::int64_t>>{{2, 1}, {3, 1}}),
                       doctest::Contains("ragged"), ValidationError);
  CHECK_THROWS_AS(fleiss_kappa(std::vector<std::vector<std::int64_t>>{{1, 0}}), ValidationError);
}

// ---------------------------------------------------------------------------
// bootstrap confidence intervals
// ---------------------------------------------------------------------------

TEST_CASE("all-ones series gives the degenerate interval [1, 1]") {
  const std::vector<double> ones(50, 1.0);
  const auto ci = bootstrap_ci(ones, 0.95, 1000, 7);
  CHECK(ci.lower == 1.0);
  CHECK(ci.upper == 1.0);
  CHECK(ci.point_estimate == 1.0);
}

TEST_CASE("fixed seed gives bit-identical bounds") {
  std::vector<double> series;
  for (int i = 0; i < 100; ++i) series.push_back(i < 80 ? 1.0 : 0.0);
  const auto a = bootstrap_ci(series, 0.95, 2000, 1234);
  const auto b = bootstrap_ci(series, 0.95, 2000, 1234);
  CHECK(a.lower == b.lower);
  CHECK(a.upper == b.upper);
  const auto c = bootstrap_ci(series, 0.95, 2000, 1235);
  CHECK((c.lower != a.lower || c.upper != a.upper));
}

TEST_CASE("bounds approximate the normal-approximation oracle") {
  std::vector<double> series;
  for (int i = 0; i < 100; ++i) series.push_back(i < 80 ? 1.0 : 0.0);
  const auto ci = bootstrap_ci(series, 0.95, 10000, 99);
  const auto [ref_lower, ref_upper] = oracle::normal_approx_ci(0.8, 100);
  CHECK(std::abs(ci.lower - ref_lower) <= 0.02);
  CHECK(std::abs(ci.upper - ref_upper) <= 0.02);
  CHECK(ci.point_estimate == doctest::Approx(0.8));
}

TEST_CASE("bounds always lie within the series range") {
  CounterRng rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> series;
    const std::uint64_t n = 1 + rng.next_below(40);
    for (std::uint64_t i = 0; i < n; ++i) series.push_back(static_cast<double>(rng.next_below(2)));
    const double lo = *std::min_element(series.begin(), series.end());
    const double hi = *std::max_element(series.begin(), series.end());
    const auto ci = bootstrap_ci(series, 0.9, 500, rng.next_u64());
    CHECK(ci.lower >= lo);
    CHECK(ci.upper <= hi);
    CHECK(ci.lower <= ci.upper);
  }
}

TEST_CASE("interval width shrinks like 1/sqrt(n)") {
  auto width_for = [](int n) {
    std::vector<double> series;
    for (int i = 0; i < n; ++i) series.push_back(i % 2 == 0 ? 1.0 : 0.0);
    const auto ci = bootstrap_ci(series, 0.95, 4000, 31);
    return ci.upper - ci.lower;
  };
  const double w25 = width_for(25);
  const double w100 = width_for(100);
  const double w400 = width_for(400);
  CHECK(w100 / w25 == doctest::Approx(0.5).epsilon(0.3));
  CHECK(w400 / w100 == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("bootstrap input validation") {
  const std::vector<double> series(10, 1.0);
  CHECK_THROWS_AS(bootstrap_ci(std::vector<double>{}, 0.95, 1000, 1), ValidationError);
  CHECK_THROWS_AS(bootstrap_ci(series, 0.95, 99, 1), ValidationError);
  CHECK_THROWS_AS(bootstrap_ci(series, 1.0, 1000, 1), ValidationError);
  CHECK_THROWS_AS(bootstrap_ci(series, 0.0, 1000, 1), ValidationError);
}

// ---------------------------------------------------------------------------
// interval comparison
// ---------------------------------------------------------------------------

namespace {
BootstrapCI make_ci(double lower, double upper, double level = 0.95) {
  BootstrapCI ci;
  ci.lower = lower;
  ci.upper = upper;
  ci.level = level;
  ci.n_resamples = 10000;
  ci.point_estimate = (lower + upper) / 2;
  return ci;
}
}  // namespace

TEST_CASE("published interval pairs classify as expected") {
  const auto claude = make_ci(0.80, 0.93);
  const auto llama = make_ci(0.55, 0.74);
  const auto gpt4 = make_ci(0.75, 0.90);
  CHECK(compare_cis(claude, llama) == CiRelation::Disjoint);
  CHECK(compare_cis(llama, claude) == CiRelation::Disjoint);
  CHECK(compare_cis(claude, gpt4) == CiRelation::Overlapping);
  CHECK(compare_cis(claude, claude) == CiRelation::Overlapping);
  // touching endpoints overlap
  CHECK(compare_cis(make_ci(0.1, 0.5), make_ci(0.5, 0.9)) == CiRelation::Overlapping);
  CHECK_THROWS_AS(compare_cis(make_ci(0.1, 0.2, 0.95), make_ci(0.1, 0.2, 0.9)), ValidationError);
}
