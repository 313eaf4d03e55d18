#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hce/kde.hpp"
#include "hce/svg.hpp"
#include "hce/theme.hpp"

namespace hce::viz::detail {

struct LinearScale {
  double d0, d1, r0, r1;
  double operator()(double v) const { return r0 + (v - d0) / (d1 - d0) * (r1 - r0); }
};

struct LogScale {
  double d0, d1, r0, r1;
  double operator()(double v) const {
    return r0 + (std::log(v) - std::log(d0)) / (std::log(d1) - std::log(d0)) * (r1 - r0);
  }
};

/// Roughly `target` round tick values covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

/// Ticks for a log axis: 1-2-5 style values inside [lo, hi].
std::vector<double> log_ticks(double lo, double hi);

std::string percent(double fraction, int decimals = 1);

/// Left axis line with tick marks and labels.
void y_axis(SvgScene& scene, const std::string& prefix, double x, double y_top, double y_bottom,
            const std::vector<double>& ticks, const LinearScale& scale, int decimals);

/// Bottom axis line with tick marks and labels.
void x_axis(SvgScene& scene, const std::string& prefix, double y, double x_left, double x_right,
            const std::vector<double>& ticks, const LinearScale& scale, int decimals);

Element& label(SvgScene& scene, std::string id, Point at, std::string_view text, std::string_view anchor = "middle",
               double size = 12);

/// Violin outline plus box, whiskers and median. `vertical` puts values on
/// the y axis; `position` is the centre on the other axis.
void draw_violin(SvgScene& scene, const std::string& prefix, std::span<const double> values, const Density& density,
                 bool vertical, double position, double half_width, double max_density, const LinearScale& value_scale,
                 Rgb color);

}  // namespace hce::viz::detail
