#ifndef LHOM_STATS_HPP
#define LHOM_STATS_HPP

#include <optional>
#include <span>
#include <vector>

namespace lhom::stats {

double mean(std::span<const double> x);

/// Unbiased sample variance (n - 1 denominator).
double sample_variance(std::span<const double> x);

/// Jackknife standard error from the n leave-one-out estimates.
double jackknife_se(std::span<const double> leave_one_out);

/// Leave-one-out sample variances, computed in O(n) on centered data.
std::vector<double> leave_one_out_variances(std::span<const double> x);

/// Leave-one-out means.
std::vector<double> leave_one_out_means(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Weighted least squares y = intercept + slope x with weights w = 1 / sigma^2.
/// Empty when fewer than two points carry positive finite weight.
std::optional<LinearFit> weighted_line_fit(std::span<const double> x, std::span<const double> y,
                                           std::span<const double> w);

}  // namespace lhom::stats

#endif  // LHOM_STATS_HPP
