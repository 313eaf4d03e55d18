#pragma once

#include <cmath>

namespace hce::design::detail {

/// Exponential rate giving event probability `p` within `tau`.
inline double rate_for_probability(double p, double tau) { return -std::log1p(-p) / tau; }

/// P(event within tau) for an exponential with the given rate.
inline double event_probability(double rate, double tau) { return -std::expm1(-rate * tau); }

/// P(T_active > T_control and both <= tau) for independent exponentials.
inline double joint_later_event(double rate_active, double rate_control, double tau) {
  const double total = rate_active + rate_control;
  if (total <= 0.0) return 0.0;
  return event_probability(rate_active, tau) - rate_active / total * event_probability(total, tau);
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace hce::design::detail
