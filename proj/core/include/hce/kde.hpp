#pragma once

#include <span>
#include <vector>

namespace hce::viz {

/// Silverman's rule: 0.9 * min(sd, IQR / 1.34) * n^(-1/5), falling back to
/// whichever spread measure is non-zero.
double silverman_bandwidth(std::span<const double> values);

struct Density {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

/// Gaussian kernel density on `points` equally spaced locations spanning
/// the data range extended by `cut` bandwidths. Throws InputError for
/// fewer than 5 values or zero bandwidth.
Density gaussian_kde(std::span<const double> values, int points = 256, double cut = 2.0);

struct BoxStats {
  double q1 = 0, median = 0, q3 = 0;
  double whisker_lo = 0, whisker_hi = 0;  // most extreme data within 1.5 IQR
  double mean = 0;
  std::vector<double> outliers;
};

/// Quantiles by linear interpolation between order statistics.
double quantile(std::span<const double> sorted, double p);
BoxStats box_stats(std::span<const double> values);

}  // namespace hce::viz
