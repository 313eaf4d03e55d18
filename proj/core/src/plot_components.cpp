#include <algorithm>
#include <cmath>
#include <limits>

#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/plots.hpp"
#include "plot_util.hpp"

namespace hce::viz {

SvgScene render_component_plot(std::span<const CumulativeRow> rows, const PlotTheme& theme) {
  if (rows.empty()) throw InputError("component plot needs at least one row");
  const double row_h = 56, top = 60, bottom = 60;
  SvgScene scene(920, top + row_h * double(rows.size()) + bottom);
  const double bar_x0 = 190, bar_x1 = 520;
  const double bar_w = bar_x1 - bar_x0;
  const double fx0 = 570, fx1 = 890;

  // Log axis over every finite positive estimate and bound, always with 1.
  double lo = 1.0, hi = 1.0;
  for (const auto& r : rows) {
    for (const auto* e : {&r.stats.win_odds, &r.stats.win_ratio}) {
      for (double v : {e->est, e->lo, e->hi}) {
        if (std::isfinite(v) && v > 0.0) {
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
    }
  }
  lo /= 1.15;
  hi *= 1.15;
  const detail::LogScale xs{lo, hi, fx0, fx1};
  auto clamp_x = [&](double v, const std::string& what) {
    if (std::isnan(v)) {
      scene.warn(what + " is undefined; drawn at the axis midpoint");
      return (fx0 + fx1) / 2;
    }
    if (v <= lo || v >= hi) {
      if (!std::isfinite(v) || v <= 0.0) scene.warn(what + " is " + format_exact(v) + "; clamped to the axis edge");
      return v <= lo ? fx0 : fx1;
    }
    return xs(v);
  };

  scene.line("ref-line", {xs(1.0), top - 10}, {xs(1.0), scene.height() - bottom}).stroke("#737373", 1.0).dash("5 4");
  auto meta_rows = nlohmann::json::array();
  for (std::size_t idx = 0; idx < rows.size(); ++idx) {
    const auto& r = rows[idx];
    const std::string k = std::to_string(idx + 1);
    const double y = top + row_h * double(idx);
    const double cy = y + row_h / 2;

    std::string name = r.included_components.empty() ? "" : r.included_components.back();
    if (idx > 0) name = "+ " + name;
    detail::label(scene, "row-label-" + k, {bar_x0 - 10, cy + 4}, name, "end", 12);

    const double wa = r.win_pct_active / 100.0 * bar_w;
    const double wt = r.tie_pct / 100.0 * bar_w;
    const double wc = r.win_pct_control / 100.0 * bar_w;
    const double by = y + 12, bh = row_h - 24;
    scene.rect("bar-" + k + "-active", bar_x0, by, wa, bh).fill(theme.active.hex());
    scene.rect("bar-" + k + "-tie", bar_x0 + wa, by, wt, bh).fill(theme.tie_grey.hex());
    scene.rect("bar-" + k + "-control", bar_x0 + wa + wt, by, wc, bh).fill(theme.control.hex());
    const std::pair<const char*, std::pair<double, double>> segs[] = {
        {"active", {bar_x0, wa}}, {"tie", {bar_x0 + wa, wt}}, {"control", {bar_x0 + wa + wt, wc}}};
    const double pcts[] = {r.win_pct_active, r.tie_pct, r.win_pct_control};
    for (int s = 0; s < 3; ++s) {
      if (segs[s].second.second < 34) continue;
      detail::label(scene, "bar-" + k + "-" + segs[s].first + "-label",
                    {segs[s].second.first + segs[s].second.second / 2, cy + 4}, format_fixed(pcts[s], 1) + "%",
                    "middle", 10)
          .fill("#ffffff");
    }

    const auto& wo = r.stats.win_odds;
    const auto& wr = r.stats.win_ratio;
    const double wo_y = cy - 8, wr_y = cy + 8;
    const double wo_lo = clamp_x(wo.lo, "row " + k + " win odds lower bound");
    const double wo_hi = clamp_x(wo.hi, "row " + k + " win odds upper bound");
    const double wr_lo = clamp_x(wr.lo, "row " + k + " win ratio lower bound");
    const double wr_hi = clamp_x(wr.hi, "row " + k + " win ratio upper bound");
    const double wo_x = clamp_x(wo.est, "row " + k + " win odds");
    const double wr_x = clamp_x(wr.est, "row " + k + " win ratio");
    scene.line("wo-ci-" + k, {wo_lo, wo_y}, {wo_hi, wo_y}).stroke(theme.active.hex(), 1.5);
    scene.circle("wo-" + k, {wo_x, wo_y}, 4).fill(theme.active.hex());
    scene.line("wr-ci-" + k, {wr_lo, wr_y}, {wr_hi, wr_y}).stroke("#525252", 1.5);
    scene.rect("wr-" + k, wr_x - 3.5, wr_y - 3.5, 7, 7).fill("#525252");

    meta_rows.push_back({{"depth", r.depth},
                         {"name", name},
                         {"pct", {{"active", r.win_pct_active}, {"tie", r.tie_pct}, {"control", r.win_pct_control}}},
                         {"bar_px", {{"active", wa}, {"tie", wt}, {"control", wc}}},
                         {"bar_width_px", bar_w},
                         {"wo_x", wo_x},
                         {"wr_x", wr_x}});
  }

  const double axis_y = scene.height() - bottom + 6;
  scene.line("forest-axis-line", {fx0, axis_y}, {fx1, axis_y}).stroke("#252525");
  int t = 0;
  for (double v : detail::log_ticks(lo, hi)) {
    const double x = xs(v);
    scene.line("forest-tick-" + std::to_string(t), {x, axis_y}, {x, axis_y + 5}).stroke("#252525");
    detail::label(scene, "forest-tick-label-" + std::to_string(t), {x, axis_y + 18}, format_sig(v, 3), "middle", 11);
    ++t;
  }
  detail::label(scene, "bar-title", {(bar_x0 + bar_x1) / 2, 30}, "Wins active / ties / wins control", "middle", 13);
  detail::label(scene, "forest-title", {(fx0 + fx1) / 2, 30}, "Win odds (circle) and win ratio (square)", "middle", 13);

  auto& meta = scene.meta();
  meta["kind"] = "components";
  meta["rows"] = meta_rows;
  meta["axis"] = {{"scale", "log"}, {"lo", lo}, {"hi", hi}, {"ref_x", xs(1.0)}};
  return scene;
}

}  // namespace hce::viz
