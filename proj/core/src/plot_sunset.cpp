#include <algorithm>
#include <cmath>

#include "hce/contour.hpp"
#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/plots.hpp"
#include "plot_util.hpp"

namespace hce::viz {

namespace {

constexpr double kHighlight = 1.2;

bool is_highlight(double level) { return std::abs(level - kHighlight) < 1e-12; }

// Linear interpolation along an axis at a fractional index.
double axis_at(const std::vector<double>& axis, double index) {
  const double i0 = std::clamp(std::floor(index), 0.0, double(axis.size() - 1));
  const auto i = static_cast<std::size_t>(i0);
  if (i + 1 >= axis.size()) return axis.back();
  return axis[i] + (index - i0) * (axis[i + 1] - axis[i]);
}

}  // namespace

SvgScene render_sunset(const design::SunsetGrid& grid, std::span<const double> iso_levels,
                       std::span<const Anchor> anchors, const design::FeasibilityOverlay& overlay,
                       const PlotTheme& theme) {
  if (grid.rows() < 2 || grid.cols() < 2 || grid.values.size() != grid.rows() * grid.cols()) {
    throw InputError("sunset grid needs at least 2 x 2 values");
  }
  std::vector<double> levels(iso_levels.begin(), iso_levels.end());
  for (double l : levels) {
    if (!std::isfinite(l) || l <= 0.0) throw InputError("iso levels must be finite and positive");
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  SvgScene scene(760, 600);
  const double x0 = 80, x1 = 600, y0 = 50, y1 = 520;
  const double d_lo = grid.delta_axis.front(), d_hi = grid.delta_axis.back();
  const double h_lo = grid.hr_axis.front(), h_hi = grid.hr_axis.back();
  // hr on x and delta on y, both reversed: no effect (high hr, low delta)
  // lands in the upper-left corner, strong effect in the lower-right.
  const detail::LinearScale xs{h_lo, h_hi, x1, x0};
  const detail::LinearScale ys{d_lo, d_hi, y0, y1};
  auto px = [&](double hr, double delta) { return Point{xs(hr), ys(delta)}; };

  auto band_of = [&](double v) {
    return static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), v) - levels.begin());
  };
  auto band_color = [&](std::size_t b) {
    if (levels.empty()) return theme.sunset_color(1.43);
    if (b == 0) return theme.sunset_color(levels.front() - 1.0);
    if (b == levels.size()) return theme.sunset_color(levels.back() + 1.0);
    return theme.sunset_color((levels[b - 1] + levels[b]) / 2);
  };

  double vmin = grid.values.front(), vmax = vmin;
  for (double v : grid.values) {
    if (!std::isfinite(v)) throw DegenerateError("sunset grid contains a non-finite win odds value");
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
  }

  for (std::size_t r = 0; r + 1 < grid.rows(); ++r) {
    for (std::size_t c = 0; c + 1 < grid.cols(); ++c) {
      const double v = (grid.at(r, c) + grid.at(r + 1, c) + grid.at(r, c + 1) + grid.at(r + 1, c + 1)) / 4;
      const Point a = px(grid.hr_axis[c], grid.delta_axis[r]);
      const Point b = px(grid.hr_axis[c + 1], grid.delta_axis[r + 1]);
      scene.rect("cell-" + std::to_string(r) + "-" + std::to_string(c), std::min(a.x, b.x), std::min(a.y, b.y),
                 std::abs(b.x - a.x), std::abs(b.y - a.y))
          .fill(band_color(band_of(v)).hex())
          .stroke(band_color(band_of(v)).hex(), 0.3);
    }
  }

  const ValueGrid field{grid.rows(), grid.cols(), grid.values};
  auto meta_iso = nlohmann::json::array();
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const double level = levels[li];
    const bool hl = is_highlight(level);
    const auto contours = extract_iso_contour(field, level);
    if (contours.empty()) {
      scene.warn("iso level " + format_sig(level) + " lies outside the grid range [" + format_sig(vmin) + ", " +
                 format_sig(vmax) + "]; skipped");
      meta_iso.push_back({{"level", level}, {"highlighted", hl}, {"skipped", true}, {"polylines", nlohmann::json::array()}});
      continue;
    }
    auto lines = nlohmann::json::array();
    for (std::size_t j = 0; j < contours.size(); ++j) {
      std::vector<Point> pts;
      auto data = nlohmann::json::array();
      for (const auto& p : contours[j].points) {
        const double hr = axis_at(grid.hr_axis, p.x);
        const double delta = axis_at(grid.delta_axis, p.y);
        pts.push_back(px(hr, delta));
        data.push_back({hr, delta});
      }
      if (contours[j].closed && !pts.empty()) pts.push_back(pts.front());
      auto& e = scene.polyline("iso-" + std::to_string(li) + "-" + std::to_string(j), pts);
      if (hl) {
        e.stroke(theme.tie_grey.hex(), 3.0);
      } else {
        e.stroke("#ffffff", 0.8).opacity(0.8);
      }
      lines.push_back({{"closed", contours[j].closed}, {"points", data}});
    }
    meta_iso.push_back({{"level", level}, {"highlighted", hl}, {"skipped", false}, {"polylines", lines}});
  }

  auto inside = [&](double hr, double delta) {
    return hr >= h_lo - 1e-12 && hr <= h_hi + 1e-12 && delta >= d_lo - 1e-12 && delta <= d_hi + 1e-12;
  };

  auto meta_overlay = nlohmann::json(nullptr);
  if (!overlay.empty()) {
    meta_overlay = nlohmann::json::object();
    if (overlay.polygon.size() >= 3) {
      std::vector<Point> pts;
      auto data = nlohmann::json::array();
      bool clipped = false;
      for (const auto& p : overlay.polygon) {
        const double hr = std::clamp(p.hr, h_lo, h_hi);
        const double delta = std::clamp(p.delta, d_lo, d_hi);
        clipped |= hr != p.hr || delta != p.delta;
        pts.push_back(px(hr, delta));
        data.push_back({p.hr, p.delta});
      }
      if (clipped) scene.warn("feasibility region extends beyond the plotted range; clamped to the frame");
      scene.polygon("overlay-region", pts).fill("#ffffff").opacity(0.35).stroke("#252525", 1.5).dash("6 3");
      meta_overlay["polygon"] = data;
    }
    auto pts_meta = nlohmann::json::array();
    for (std::size_t i = 0; i < overlay.points.size(); ++i) {
      const auto& p = overlay.points[i];
      if (!inside(p.hr, p.delta)) {
        scene.warn("overlay point " + std::to_string(i + 1) + " lies outside the plotted range; skipped");
        continue;
      }
      const Point at = px(p.hr, p.delta);
      scene.circle("overlay-point-" + std::to_string(i + 1), at, 3.5).fill("#252525");
      if (!p.label.empty()) {
        detail::label(scene, "overlay-label-" + std::to_string(i + 1), {std::min(at.x + 6, x1), at.y - 5}, p.label,
                      "start", 10);
      }
      pts_meta.push_back({{"hr", p.hr}, {"delta", p.delta}, {"label", p.label}});
    }
    meta_overlay["points"] = pts_meta;
  }

  auto meta_anchors = nlohmann::json::array();
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const auto& a = anchors[i];
    if (!inside(a.hr, a.delta)) {
      scene.warn("anchor " + a.label + " lies outside the plotted range; skipped");
      continue;
    }
    const Point at = px(a.hr, a.delta);
    scene.circle("anchor-" + std::to_string(i + 1), at, 5).fill("#ffffff").stroke("#252525", 2.0);
    if (!a.label.empty()) {
      detail::label(scene, "anchor-label-" + std::to_string(i + 1), {std::min(at.x + 8, x1), std::max(at.y - 8, 12.0)},
                    a.label, "start", 11);
    }
    meta_anchors.push_back({{"hr", a.hr}, {"delta", a.delta}, {"label", a.label}});
  }

  scene.rect("frame", x0, y0, x1 - x0, y1 - y0).fill("none").stroke("#252525", 1.0);
  detail::x_axis(scene, "x-axis", y1, x0, x1, detail::nice_ticks(h_lo, h_hi, 6), xs, 2);
  detail::y_axis(scene, "y-axis", x0, y0, y1, detail::nice_ticks(d_lo, d_hi, 6), ys, 2);
  detail::label(scene, "x-axis-title", {(x0 + x1) / 2, y1 + 42}, "Hazard ratio (event component)", "middle", 12);
  detail::label(scene, "y-axis-title", {24, (y0 + y1) / 2}, "Mean difference (continuous outcome)", "middle", 12)
      .attr("transform", "rotate(-90 24 " + svg_number((y0 + y1) / 2) + ")");
  detail::label(scene, "title", {(x0 + x1) / 2, 30}, "Win odds by hazard ratio and mean difference", "middle", 14);

  // Legend: one swatch per band, highest at the top.
  const double lx = 630, lh = 18;
  for (std::size_t b = 0; b <= levels.size(); ++b) {
    const double ly = y0 + lh * double(levels.size() - b);
    scene.rect("legend-" + std::to_string(b), lx, ly, 16, lh).fill(band_color(b).hex());
    const std::string text = b == 0 ? "< " + format_sig(levels.empty() ? 0.0 : levels.front(), 3)
                                    : ">= " + format_sig(levels[b - 1], 3);
    detail::label(scene, "legend-label-" + std::to_string(b), {lx + 22, ly + 13}, text, "start", 10);
  }

  auto& meta = scene.meta();
  meta["kind"] = "sunset";
  meta["axes"] = {{"x", "hr"}, {"y", "delta"}, {"x_reversed", true}, {"y_reversed", true}};
  meta["hr_range"] = {h_lo, h_hi};
  meta["delta_range"] = {d_lo, d_hi};
  meta["grid"] = {{"rows", grid.rows()}, {"cols", grid.cols()}, {"min", vmin}, {"max", vmax}};
  meta["params"] = {{"p_event_control", grid.params.p_event_control},
                    {"sd", grid.params.sd},
                    {"follow_up", grid.params.follow_up}};
  meta["method"] = grid.method == design::GridMethod::ClosedForm ? "cf" : "mc";
  meta["iso"] = meta_iso;
  meta["anchors"] = meta_anchors;
  meta["overlay"] = meta_overlay;
  meta["corners"] = {{"upper_left", {{"hr", h_hi}, {"delta", d_lo}, {"win_odds", grid.at(0, grid.cols() - 1)}}},
                     {"lower_right", {{"hr", h_lo}, {"delta", d_hi}, {"win_odds", grid.at(grid.rows() - 1, 0)}}}};
  return scene;
}

}  // namespace hce::viz
