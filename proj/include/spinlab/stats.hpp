#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spinlab::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

/// Sample mean and standard error assuming independent values.
MeanSe mean_se(std::span<const double> v);

/// Mean with a batch-means standard error for autocorrelated series.
MeanSe batch_means(std::span<const double> series, std::size_t batches = 50);

/// Binomial proportion with standard error sqrt(p(1-p)/n).
MeanSe proportion(std::size_t successes, std::size_t trials);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
};

/// Ordinary least squares y = intercept + slope·x. Needs two distinct x.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct RankCorrelation {
  double rho = 0.0;
  double p_value = 1.0;  // two-sided, Student-t approximation
};

/// Spearman rank correlation (average ranks on ties).
RankCorrelation spearman(std::span<const double> x, std::span<const double> y);

/// P(Binomial(n, p) > k).
double binomial_upper_tail(std::size_t n, double p, double k);
/// P(Binomial(n, p) <= k).
double binomial_cdf(std::size_t n, double p, double k);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double dof);

/// Pearson goodness-of-fit of observed counts against probabilities; cells
/// with expected count below `min_expected` are pooled into their neighbour.
struct ChiSquare {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};
ChiSquare chi_square_gof(std::span<const std::size_t> observed, std::span<const double> probs,
                         double min_expected = 5.0);

}  // namespace spinlab::stats
