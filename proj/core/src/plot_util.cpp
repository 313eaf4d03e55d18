#include "plot_util.hpp"

#include <algorithm>

#include "hce/format.hpp"

namespace hce::viz::detail {

std::vector<double> nice_ticks(double lo, double hi, int target) {
  std::vector<double> ticks;
  if (!(hi > lo)) {
    ticks.push_back(lo);
    return ticks;
  }
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  const double start = std::ceil(lo / step - 1e-9) * step;
  for (double v = start; v <= hi + step * 1e-9; v += step) ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (int e = static_cast<int>(std::floor(std::log10(lo))) - 1; e <= static_cast<int>(std::ceil(std::log10(hi))); ++e) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * std::pow(10.0, e);
      if (v >= lo * (1 - 1e-12) && v <= hi * (1 + 1e-12)) ticks.push_back(v);
    }
  }
  if (ticks.size() < 3) {
    ticks.clear();
    for (double v : nice_ticks(lo, hi, 4)) {
      if (v > 0.0) ticks.push_back(v);
    }
  }
  return ticks;
}

std::string percent(double fraction, int decimals) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f%%", decimals, 100.0 * fraction);
  return buf;
}

Element& label(SvgScene& scene, std::string id, Point at, std::string_view text, std::string_view anchor, double size) {
  auto& e = scene.text(std::move(id), at, text);
  e.attr("text-anchor", anchor).attr("font-size", size).fill("#252525");
  return e;
}

void y_axis(SvgScene& scene, const std::string& prefix, double x, double y_top, double y_bottom,
            const std::vector<double>& ticks, const LinearScale& scale, int decimals) {
  scene.line(prefix + "-line", {x, y_top}, {x, y_bottom}).stroke("#252525");
  int i = 0;
  for (double t : ticks) {
    const double y = scale(t);
    if (y < y_top - 1e-6 || y > y_bottom + 1e-6) continue;
    scene.line(prefix + "-tick-" + std::to_string(i), {x - 5, y}, {x, y}).stroke("#252525");
    label(scene, prefix + "-tick-label-" + std::to_string(i), {x - 8, y + 4}, format_fixed(t, decimals), "end", 11);
    ++i;
  }
}

void x_axis(SvgScene& scene, const std::string& prefix, double y, double x_left, double x_right,
            const std::vector<double>& ticks, const LinearScale& scale, int decimals) {
  scene.line(prefix + "-line", {x_left, y}, {x_right, y}).stroke("#252525");
  int i = 0;
  for (double t : ticks) {
    const double x = scale(t);
    if (x < x_left - 1e-6 || x > x_right + 1e-6) continue;
    scene.line(prefix + "-tick-" + std::to_string(i), {x, y}, {x, y + 5}).stroke("#252525");
    label(scene, prefix + "-tick-label-" + std::to_string(i), {x, y + 18}, format_fixed(t, decimals), "middle", 11);
    ++i;
  }
}

void draw_violin(SvgScene& scene, const std::string& prefix, std::span<const double> values, const Density& density,
                 bool vertical, double position, double half_width, double max_density, const LinearScale& value_scale,
                 Rgb color) {
  auto place = [&](double value, double offset) {
    const double v = value_scale(value);
    return vertical ? Point{position + offset, v} : Point{v, position + offset};
  };
  std::vector<Point> outline;
  for (std::size_t i = 0; i < density.grid.size(); ++i) {
    outline.push_back(place(density.grid[i], half_width * density.density[i] / max_density));
  }
  for (std::size_t i = density.grid.size(); i-- > 0;) {
    outline.push_back(place(density.grid[i], -half_width * density.density[i] / max_density));
  }
  scene.polygon(prefix + "-violin", outline).fill(color.hex()).opacity(0.35).stroke(color.hex(), 1.2);

  const auto box = box_stats(values);
  const double thick = std::max(3.0, 0.18 * half_width);
  const Point q1 = place(box.q1, -thick);
  const Point q3 = place(box.q3, thick);
  scene.rect(prefix + "-box", std::min(q1.x, q3.x), std::min(q1.y, q3.y), std::abs(q3.x - q1.x), std::abs(q3.y - q1.y))
      .fill("#ffffff")
      .stroke("#252525", 1.0);
  scene.line(prefix + "-median", place(box.median, -thick), place(box.median, thick)).stroke("#252525", 2.0);
  scene.line(prefix + "-whisker-lo", place(box.whisker_lo, 0), place(box.q1, 0)).stroke("#252525");
  scene.line(prefix + "-whisker-hi", place(box.q3, 0), place(box.whisker_hi, 0)).stroke("#252525");
  int i = 0;
  for (double v : box.outliers) {
    scene.circle(prefix + "-outlier-" + std::to_string(i++), place(v, 0), 1.5).fill("#252525");
  }
}

}  // namespace hce::viz::detail
