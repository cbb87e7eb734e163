#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quorum/answer_option.hpp"

namespace quorum {

// ---------------------------------------------------------------------------
// Chi-square goodness of fit against uniform answer-choice selection
// ---------------------------------------------------------------------------

struct ChiSquareResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  std::array<std::int64_t, 4> observed{};  // indexed by AnswerOption
  double expected = 0.0;                   // same for every option
};

// observed[k] counts option k over all answering models and questions.
// Expected frequency is N * n_answerers / 4 under uniform random selection;
// df is 3. Throws ValidationError on count mismatch or zero questions.
ChiSquareResult chi_square_test(const std::array<std::int64_t, 4>& observed,
                                std::int64_t n_questions, int n_answerers);

// Upper-tail probability of the chi-square distribution: 1 - P(df/2, x/2)
// via the regularized incomplete gamma function (series for x < df + 1,
// continued fraction otherwise). Absolute error <= 1e-12 for df <= 100,
// x <= 1000. Throws ValidationError on negative statistic or df < 1.
double chi_square_sf(double statistic, int df);

// ---------------------------------------------------------------------------
// Fleiss' kappa
// ---------------------------------------------------------------------------

struct KappaResult {
  double kappa = 0.0;
  double p_bar = 0.0;   // mean observed agreement
  double pe_bar = 0.0;  // mean agreement expected by chance
  std::string interpretation;
  bool degenerate = false;  // every vote in a single category
};

std::string kappa_interpretation(double kappa);

// rows[i][k] counts raters who chose category k for question i. Every row
// must sum to the same rater count n >= 2. The kappa value is computed in
// exact integer arithmetic and converted once, so rational fixtures come out
// exact. When chance agreement is 1 (all votes in one category) the result
// is kappa = 1 flagged degenerate instead of 0/0.
KappaResult fleiss_kappa(const std::vector<std::vector<std::int64_t>>& rows);

// Convenience for the 4-option tallies used throughout this project.
KappaResult fleiss_kappa(const std::vector<std::array<int, 4>>& tallies);

// ---------------------------------------------------------------------------
// Percentile bootstrap confidence intervals
// ---------------------------------------------------------------------------

struct BootstrapCI {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::int64_t n_resamples = 0;
  std::uint64_t seed = 0;
  double point_estimate = 0.0;
};

// Percentile bootstrap over means of with-replacement resamples (full series
// length each). Bounds are the nearest-rank (1-level)/2 and 1-(1-level)/2
// percentiles of the sorted resample means. The per-resample RNG stream is
// derived from (seed, resample index), so results are independent of any
// parallel execution order. Throws ValidationError on empty series, B < 100,
// or level outside (0, 1).
BootstrapCI bootstrap_ci(std::span<const double> series, double level,
                         std::int64_t n_resamples, std::uint64_t seed);

enum class CiRelation { Overlapping, Disjoint };

std::string to_string(CiRelation relation);

// Disjoint iff one interval lies entirely below the other. Throws
// ValidationError when the confidence levels differ.
CiRelation compare_cis(const BootstrapCI& a, const BootstrapCI& b);

}  // namespace quorum
