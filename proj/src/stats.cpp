#include "quorum/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

#include "quorum/errors.hpp"
#include "quorum/rng.hpp"

namespace quorum {

namespace {

constexpr double kGammaEps = 1e-16;
constexpr int kGammaMaxIter = 500;

// Lower regularized incomplete gamma P(a, x) by power series; valid for
// x < a + 1 where the series converges quickly.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n <= kGammaMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by continued fraction
// (modified Lentz); valid for x >= a + 1.
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kGammaMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double regularized_gamma_q(double a, double x) {
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

std::size_t nearest_rank(double p, std::int64_t count) {
  const double x = p * static_cast<double>(count);
  const double rounded = std::round(x);
  // Treat ranks within representation noise of an integer as exact, so
  // e.g. level 0.95 with B = 10000 lands on rank 250, not 251.
  double r = (std::abs(x - rounded) < 1e-9 * std::max(1.0, std::abs(x))) ? rounded
                                                                          : std::ceil(x);
  r = std::clamp(r, 1.0, static_cast<double>(count));
  return static_cast<std::size_t>(r);
}

}  // namespace

double chi_square_sf(double statistic, int df) {
  if (df < 1) throw ValidationError("chi-square degrees of freedom must be >= 1");
  if (statistic < 0.0) throw ValidationError("chi-square statistic must be nonnegative");
  const double q = regularized_gamma_q(df / 2.0, statistic / 2.0);
  return std::clamp(q, 0.0, 1.0);
}

ChiSquareResult chi_square_test(const std::array<std::int64_t, 4>& observed,
                                std::int64_t n_questions, int n_answerers) {
  if (n_questions <= 0) throw ValidationError("chi-square test requires at least one question");
  if (n_answerers <= 0) throw ValidationError("chi-square test requires at least one answerer");
  std::int64_t total = 0;
  for (std::int64_t count : observed) {
    if (count < 0) throw ValidationError("negative observed count");
    total += count;
  }
  const std::int64_t expected_total = n_questions * n_answerers;
  if (total != expected_total)
    throw ValidationError("observed counts sum to " + std::to_string(total) +
                          " but n_questions * n_answerers = " + std::to_string(expected_total));

  ChiSquareResult result;
  result.observed = observed;
  result.df = kOptionCount - 1;
  result.expected = static_cast<double>(expected_total) / kOptionCount;
  double statistic = 0.0;
  for (std::int64_t count : observed) {
    const double diff = static_cast<double>(count) - result.expected;
    statistic += diff * diff / result.expected;
  }
  result.statistic = statistic;
  result.p_value = chi_square_sf(statistic, result.df);
  return result;
}

std::string kappa_interpretation(double kappa) {
  if (kappa < 0.0) return "Poor agreement";
  if (kappa <= 0.20) return "Slight agreement";
  if (kappa <= 0.40) return "Fair agreement";
  if (kappa <= 0.60) return "Moderate agreement";
  if (kappa <= 0.80) return "Substantial agreement";
  return "Almost perfect agreement";
}

KappaResult fleiss_kappa(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) throw ValidationError("fleiss_kappa requires at least one question");
  const std::size_t categories = rows[0].size();
  if (categories < 2) throw ValidationError("fleiss_kappa requires at least two categories");

  std::int64_t raters = std::accumulate(rows[0].begin(), rows[0].end(), std::int64_t{0});
  std::vector<std::int64_t> column_sums(categories, 0);
  std::int64_t pairs_observed = 0;  // sum over i,k of n_ik * (n_ik - 1)

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != categories)
      throw ValidationError("ragged tally matrix: row " + std::to_string(i) + " has " +
                            std::to_string(row.size()) + " categories, expected " +
                            std::to_string(categories));
    std::int64_t row_sum = 0;
    for (std::size_t k = 0; k < categories; ++k) {
      if (row[k] < 0) throw ValidationError("negative vote count");
      row_sum += row[k];
      column_sums[k] += row[k];
      pairs_observed += row[k] * (row[k] - 1);
    }
    if (row_sum != raters)
      throw ValidationError("ragged tally matrix: row " + std::to_string(i) + " sums to " +
                            std::to_string(row_sum) + ", expected " + std::to_string(raters));
  }
  if (raters < 2) throw ValidationError("fleiss_kappa requires at least 2 raters per question");

  const std::int64_t n_questions = static_cast<std::int64_t>(rows.size());
  using int128 = __int128;
  const int128 pairs_total = static_cast<int128>(n_questions) * raters * (raters - 1);
  const int128 votes_total = static_cast<int128>(n_questions) * raters;
  int128 column_square_sum = 0;
  for (std::int64_t c : column_sums) column_square_sum += static_cast<int128>(c) * c;
  const int128 votes_total_sq = votes_total * votes_total;

  KappaResult result;
  result.p_bar = static_cast<double>(pairs_observed) / static_cast<double>(pairs_total);
  result.pe_bar = static_cast<double>(static_cast<long double>(column_square_sum) /
                                      static_cast<long double>(votes_total_sq));

  if (column_square_sum == votes_total_sq) {
    // Every vote in one category; observed agreement is perfect by
    // inspection, the 0/0 is only an artifact of the formula.
    result.kappa = 1.0;
    result.degenerate = true;
  } else {
    // kappa = (P - Pe) / (1 - Pe) as one exact integer ratio.
    const int128 numerator =
        static_cast<int128>(pairs_observed) * votes_total_sq - pairs_total * column_square_sum;
    const int128 denominator = pairs_total * (votes_total_sq - column_square_sum);
    result.kappa = static_cast<double>(static_cast<long double>(numerator) /
                                       static_cast<long double>(denominator));
  }
  result.interpretation = kappa_interpretation(result.kappa);
  return result;
}

KappaResult fleiss_kappa(const std::vector<std::array<int, 4>>& tallies) {
  std::vector<std::vector<std::int64_t>> rows;
  rows.reserve(tallies.size());
  for (const auto& tally : tallies)
    rows.push_back({tally[0], tally[1], tally[2], tally[3]});
  return fleiss_kappa(rows);
}

BootstrapCI bootstrap_ci(std::span<const double> series, double level,
                         std::int64_t n_resamples, std::uint64_t seed) {
  if (series.empty()) throw ValidationError("bootstrap over an empty series");
  if (n_resamples < 100)
    throw ValidationError("bootstrap needs at least 100 resamples, got " +
                          std::to_string(n_resamples));
  if (!(level > 0.0 && level < 1.0))
    throw ValidationError("confidence level must lie strictly between 0 and 1");

  const std::size_t n = series.size();
  std::vector<double> means(static_cast<std::size_t>(n_resamples));
  for (std::int64_t b = 0; b < n_resamples; ++b) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += series[rng.next_below(n)];
    means[static_cast<std::size_t>(b)] = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());

  const double alpha = 1.0 - level;
  BootstrapCI ci;
  ci.lower = means[nearest_rank(alpha / 2.0, n_resamples) - 1];
  ci.upper = means[nearest_rank(1.0 - alpha / 2.0, n_resamples) - 1];
  ci.level = level;
  ci.n_resamples = n_resamples;
  ci.seed = seed;
  ci.point_estimate =
      std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  return ci;
}

std::string to_string(CiRelation relation) {
  return relation == CiRelation::Disjoint ? "Disjoint" : "Overlapping";
}

CiRelation compare_cis(const BootstrapCI& a, const BootstrapCI& b) {
  if (a.level != b.level)
    throw ValidationError("cannot compare confidence intervals at different levels");
  if (a.upper < b.lower || b.upper < a.lower) return CiRelation::Disjoint;
  return CiRelation::Overlapping;
}

}  // namespace quorum
