#include "hce/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hce/error.hpp"

namespace hce::viz {

double quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double silverman_bandwidth(std::span<const double> values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = (quantile(sorted, 0.75) - quantile(sorted, 0.25)) / 1.34;
  double spread = std::min(sd, iqr);
  if (spread <= 0.0) spread = std::max(sd, iqr);
  return 0.9 * spread * std::pow(n, -0.2);
}

Density gaussian_kde(std::span<const double> values, int points, double cut) {
  if (values.size() < 5) {
    throw InputError("density estimate needs at least 5 values (got " + std::to_string(values.size()) +
                     "); use a scatter plot instead");
  }
  if (points < 2) throw InputError("density grid needs at least 2 points");
  Density d;
  d.bandwidth = silverman_bandwidth(values);
  if (!(d.bandwidth > 0.0)) throw InputError("zero bandwidth: all values are identical");

  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  const double lo = *mn - cut * d.bandwidth;
  const double hi = *mx + cut * d.bandwidth;
  const double norm = 1.0 / (static_cast<double>(values.size()) * d.bandwidth * std::sqrt(2.0 * std::numbers::pi));
  d.grid.resize(static_cast<std::size_t>(points));
  d.density.resize(d.grid.size());
  for (int i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * i / (points - 1);
    double sum = 0.0;
    for (double v : values) {
      const double z = (x - v) / d.bandwidth;
      sum += std::exp(-0.5 * z * z);
    }
    d.grid[static_cast<std::size_t>(i)] = x;
    d.density[static_cast<std::size_t>(i)] = sum * norm;
  }
  return d;
}

BoxStats box_stats(std::span<const double> values) {
  if (values.empty()) throw InputError("box statistics of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats b;
  b.q1 = quantile(sorted, 0.25);
  b.median = quantile(sorted, 0.5);
  b.q3 = quantile(sorted, 0.75);
  b.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
  const double iqr = b.q3 - b.q1;
  const double fence_lo = b.q1 - 1.5 * iqr;
  const double fence_hi = b.q3 + 1.5 * iqr;
  b.whisker_lo = b.q1;
  b.whisker_hi = b.q3;
  for (double v : sorted) {
    if (v >= fence_lo) {
      b.whisker_lo = std::min(v, b.q1);
      break;
    }
  }
  for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
    if (*it <= fence_hi) {
      b.whisker_hi = std::max(*it, b.q3);
      break;
    }
  }
  for (double v : sorted) {
    if (v < fence_lo || v > fence_hi) b.outliers.push_back(v);
  }
  return b;
}

}  // namespace hce::viz
