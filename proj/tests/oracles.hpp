#pragma once

// Independent reference implementations used only by tests. They take
// different computational routes than the library (closed forms instead of
// series/continued fractions, exhaustive counting instead of tallies) so a
// shared bug cannot hide.

#include <array>
#include <cmath>
#include <optional>

#include "quorum/answer_option.hpp"

namespace oracle {

// Chi-square survival function for integer df via the classical closed forms:
//   df = 2k:     Q = e^{-h} * sum_{j=0}^{k-1} h^j / j!
//   df = 2k + 1: Q = erfc(sqrt(h)) + e^{-h} * sum_{j=1}^{k} h^{j-1/2} / Gamma(j+1/2)
// with h = x / 2.
inline double chi_square_sf_reference(double x, int df) {
  const double h = x / 2.0;
  if (x == 0.0) return 1.0;
  if (df % 2 == 0) {
    const int k = df / 2;
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < k; ++j) {
      term *= h / j;
      sum += term;
    }
    return std::exp(-h) * sum;
  }
  const int k = df / 2;
  double result = std::erfc(std::sqrt(h));
  double power = std::sqrt(h);                    // h^{j - 1/2} at j = 1
  double gamma_half = 0.5 * std::sqrt(M_PI);      // Gamma(j + 1/2) at j = 1
  for (int j = 1; j <= k; ++j) {
    result += std::exp(-h) * power / gamma_half;
    power *= h;
    gamma_half *= (j + 0.5);
  }
  return result;
}

struct ConsensusDerivation {
  int max_votes = 0;  // 3 full, 2 partial, 1 none
  std::optional<quorum::AnswerOption> consensus;
  int reliability_eq5 = 0;      // consensus equals the generator answer
  int reliability_caption = 0;  // at least 2 answers equal the generator answer
};

// Exhaustive re-derivation from the three raw selections.
inline ConsensusDerivation derive_consensus(const std::array<quorum::AnswerOption, 3>& answers,
                                            quorum::AnswerOption generator_answer) {
  ConsensusDerivation d;
  for (quorum::AnswerOption candidate : quorum::kAllOptions) {
    int votes = 0;
    for (quorum::AnswerOption a : answers)
      if (a == candidate) ++votes;
    d.max_votes = std::max(d.max_votes, votes);
    if (votes >= 2) d.consensus = candidate;
  }
  d.reliability_eq5 = d.consensus && *d.consensus == generator_answer ? 1 : 0;
  int generator_votes = 0;
  for (quorum::AnswerOption a : answers)
    if (a == generator_answer) ++generator_votes;
  d.reliability_caption = generator_votes >= 2 ? 1 : 0;
  return d;
}

// Direct floating-point evaluation of the kappa formula for one question with
// 3 raters over 4 categories, mirroring the degenerate-case convention.
inline double fleiss_kappa_single_question(const std::array<int, 4>& tally) {
  double pairs = 0.0;
  for (int count : tally) pairs += static_cast<double>(count) * (count - 1);
  const double p_bar = pairs / (3.0 * 2.0);
  double pe_bar = 0.0;
  for (int count : tally) {
    const double p = static_cast<double>(count) / 3.0;
    pe_bar += p * p;
  }
  if (pe_bar == 1.0) return 1.0;
  return (p_bar - pe_bar) / (1.0 - pe_bar);
}

// Normal-approximation interval for a Bernoulli mean.
inline std::pair<double, double> normal_approx_ci(double p_hat, int n) {
  const double half_width = 1.96 * std::sqrt(p_hat * (1.0 - p_hat) / n);
  return {p_hat - half_width, p_hat + half_width};
}

// Closed-form expectations for independent stochastic answerers
// (correlation 0): each is right with probability a, else uniform over the
// three wrong options.
inline double expected_reliability_independent(double a) {
  return a * a * a + 3.0 * a * a * (1.0 - a);
}

inline double expected_full_agreement_independent(double a) {
  const double wrong = 1.0 - a;
  return a * a * a + wrong * wrong * wrong / 9.0;
}

}  // namespace oracle
