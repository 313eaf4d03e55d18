#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/plots.hpp"
#include "hce/report.hpp"
#include "plot_util.hpp"

namespace hce::viz {

namespace {

void check_marginals(const Marginals& m, const std::vector<std::string>& labels) {
  if (m.active.empty() || m.active.size() != m.control.size()) {
    throw InputError("marginals must have the same non-zero length in both arms");
  }
  if (labels.size() != m.active.size()) throw InputError("one label per category is required");
  for (const auto* arm : {&m.active, &m.control}) {
    double sum = 0.0;
    for (double p : *arm) {
      if (!(p >= 0.0) || !std::isfinite(p)) throw InputError("category proportions must be finite and non-negative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("category proportions must sum to 1");
  }
}

std::vector<double> cumulative(const std::vector<double>& p) {
  std::vector<double> c(p.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) c[i + 1] = c[i] + p[i];
  c.back() = 1.0;
  return c;
}

double shoelace(const std::vector<UnitPoint>& poly) {
  double s = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a.u * b.v - b.u * a.v;
  }
  return std::abs(s) / 2.0;
}

nlohmann::json unit_points(const std::vector<UnitPoint>& pts) {
  auto arr = nlohmann::json::array();
  for (const auto& p : pts) arr.push_back({p.u, p.v});
  return arr;
}

}  // namespace

std::string win_share_label(double theta) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.0f%% vs %.0f%%", 100.0 * theta, 100.0 * (1.0 - theta));
  return buf;
}

std::string win_odds_label(const WinStats& stats) {
  const auto& wo = stats.win_odds;
  auto two = [](double v) {
    if (!std::isfinite(v)) return format_exact(v);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return std::string(buf);
  };
  return "WO " + two(wo.est) + " (" + two(wo.lo) + "\u2013" + two(wo.hi) + ")";
}

SvgScene render_mosaic(const Marginals& marginals, const std::vector<std::string>& labels,
                       std::optional<int> split_after, const PlotTheme& theme) {
  check_marginals(marginals, labels);
  const int k = static_cast<int>(labels.size());
  if (split_after && (*split_after < 1 || *split_after >= k)) {
    throw InputError("split position must lie between 1 and K-1");
  }
  const double gap = split_after ? 16.0 : 0.0;
  const double legend_w = 180;
  SvgScene scene(420 + legend_w, 480);
  const auto& m = theme.margins;
  const double x0 = m.left, x1 = scene.width() - m.right - legend_w;
  const double y0 = m.top, y1 = scene.height() - m.bottom;
  const double avail = (y1 - y0) - gap;
  const double bar_w = 110;
  const auto colors = theme.severity_ramp(k);

  auto& meta = scene.meta();
  meta["kind"] = "mosaic";
  meta["categories"] = labels;
  meta["split_after"] = split_after ? nlohmann::json(*split_after) : nlohmann::json(nullptr);

  struct ArmBar {
    const char* name;
    const std::vector<double>* p;
    double center;
  };
  for (const ArmBar& arm : {ArmBar{"active", &marginals.active, x0 + 0.3 * (x1 - x0)},
                            ArmBar{"control", &marginals.control, x0 + 0.7 * (x1 - x0)}}) {
    auto segments = nlohmann::json::array();
    double y = y1;
    for (int i = 0; i < k; ++i) {
      const double h = (*arm.p)[i] * avail;
      y -= h;
      const std::string id = std::string("segment-") + arm.name + "-" + std::to_string(i + 1);
      scene.rect(id, arm.center - bar_w / 2, y, bar_w, h).fill(colors[i].hex()).stroke("#ffffff", 0.5);
      if (h > 14) {
        auto& t = detail::label(scene, id + "-label", {arm.center, y + h / 2 + 4}, detail::percent((*arm.p)[i]), "middle", 11);
        t.fill(colors[i].lightness() < 0.5 ? "#ffffff" : "#252525");
      }
      segments.push_back({{"category", i + 1}, {"proportion", (*arm.p)[i]}, {"y", y}, {"height", h}});
      if (split_after && i + 1 == *split_after) y -= gap;
    }
    meta["arms"][arm.name] = segments;
    detail::label(scene, std::string("label-") + arm.name, {arm.center, y1 + 24}, arm.name[0] == 'a' ? "Active" : "Control");
  }
  if (split_after) {
    // The gap sits at the same height in both bars only if the cumulative
    // shares match; record each arm's position.
    for (const char* name : {"active", "control"}) {
      const auto& segs = meta["arms"][name];
      const double top_of_lower = segs[*split_after - 1]["y"].get<double>();
      meta["gaps"][name] = {{"y_bottom", top_of_lower}, {"y_top", top_of_lower - gap}};
    }
  }

  // Legend, best category at the top.
  const double lx = x1 + 20;
  for (int i = k - 1, row = 0; i >= 0; --i, ++row) {
    const double ly = y0 + 20.0 * row;
    scene.rect("legend-" + std::to_string(i + 1), lx, ly, 12, 12).fill(colors[i].hex());
    detail::label(scene, "legend-label-" + std::to_string(i + 1), {lx + 18, ly + 10}, labels[i], "start", 11);
  }
  detail::label(scene, "title", {(x0 + x1) / 2, 28}, "Outcome categories by arm", "middle", 14);
  return scene;
}

SvgScene render_mosaic_2d(const Marginals& marginals, const std::vector<std::string>& labels, const OdgCurve& odg,
                          const WinStats& stats, TieMode tie_mode, const PlotTheme& theme) {
  check_marginals(marginals, labels);
  if (odg.vertices.size() < 2) throw InputError("ordinal dominance graph needs at least two vertices");
  const auto ca = cumulative(marginals.active);
  const auto cc = cumulative(marginals.control);
  const int k = static_cast<int>(labels.size());

  // Every category corner must be a vertex of the curve, otherwise the
  // regions drawn would not line up with the product grid.
  auto on_curve = [&](double u, double v) {
    return std::any_of(odg.vertices.begin(), odg.vertices.end(),
                       [&](const UnitPoint& p) { return std::abs(p.u - u) < 1e-9 && std::abs(p.v - v) < 1e-9; });
  };
  for (int i = 0; i <= k; ++i) {
    if (!on_curve(cc[i], ca[i])) {
      throw InputError("ordinal dominance graph does not pass through category corner " + std::to_string(i));
    }
  }

  const double side = 440, x0 = 150, y0 = 80;
  SvgScene scene(x0 + side + 30, y0 + side + 130);
  auto px = [&](double u, double v) { return Point{x0 + u * side, y0 + (1.0 - v) * side}; };
  auto to_px = [&](const std::vector<UnitPoint>& pts) {
    std::vector<Point> out;
    for (const auto& p : pts) out.push_back(px(p.u, p.v));
    return out;
  };

  std::vector<UnitPoint> win = odg.vertices;
  win.push_back({0.0, 1.0});
  std::vector<UnitPoint> loss = odg.vertices;
  loss.push_back({1.0, 0.0});
  scene.polygon("win-region", to_px(win)).fill(theme.win_region.hex()).opacity(0.6);
  scene.polygon("loss-region", to_px(loss)).fill(theme.loss_region.hex()).opacity(0.6);

  auto triangles = nlohmann::json::array();
  if (tie_mode == TieMode::TriangleSplit) {
    for (int i = 0; i < k; ++i) {
      if (marginals.active[i] <= 0.0 || marginals.control[i] <= 0.0) continue;
      const UnitPoint a{cc[i], ca[i]}, b{cc[i + 1], ca[i + 1]};
      const std::vector<UnitPoint> upper{a, {a.u, b.v}, b};
      const std::vector<UnitPoint> lower{a, {b.u, a.v}, b};
      scene.polygon("tie-win-" + std::to_string(i + 1), to_px(upper)).fill(theme.active_light.hex());
      scene.polygon("tie-loss-" + std::to_string(i + 1), to_px(lower)).fill(theme.control_light.hex());
      triangles.push_back({{"category", i + 1}, {"area", marginals.active[i] * marginals.control[i]}});
    }
  }

  auto rects = nlohmann::json::array();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double w = cc[j + 1] - cc[j];
      const double h = ca[i + 1] - ca[i];
      if (w <= 0.0 || h <= 0.0) continue;
      const Point tl = px(cc[j], ca[i + 1]);
      scene.rect("cell-" + std::to_string(i + 1) + "-" + std::to_string(j + 1), tl.x, tl.y, w * side, h * side)
          .fill("none")
          .stroke("#ffffff", 1.0);
      rects.push_back({{"active_category", i + 1}, {"control_category", j + 1}, {"x", cc[j]}, {"y", ca[i]},
                       {"width", w}, {"height", h}, {"area", w * h}});
    }
  }

  std::vector<Point> curve = to_px(odg.vertices);
  scene.polyline("odg", curve).stroke("#252525", 2.0);
  scene.line("diagonal", px(0, 0), px(1, 1)).stroke("#252525", 1.0).dash("4 3");
  scene.rect("frame", x0, y0, side, side).fill("none").stroke("#252525", 1.0);

  for (int j = 0; j < k; ++j) {
    if (cc[j + 1] - cc[j] <= 0.0) continue;
    const Point at = px((cc[j] + cc[j + 1]) / 2, 0);
    auto& t = detail::label(scene, "control-label-" + std::to_string(j + 1), {at.x, at.y + 14}, labels[j], "end", 10);
    t.attr("transform", "rotate(-40 " + svg_number(at.x) + " " + svg_number(at.y + 14) + ")");
  }
  for (int i = 0; i < k; ++i) {
    if (ca[i + 1] - ca[i] <= 0.0) continue;
    const Point at = px(0, (ca[i] + ca[i + 1]) / 2);
    detail::label(scene, "active-label-" + std::to_string(i + 1), {at.x - 6, at.y + 4}, labels[i], "end", 10);
  }
  detail::label(scene, "axis-control", {x0 + side / 2, y0 + side + 122}, "Control (cumulative)", "middle", 12);
  detail::label(scene, "axis-active", {x0, y0 - 10}, "Active (cumulative)", "middle", 12);
  detail::label(scene, "win-share", {x0 + side, 24}, "Win probability " + win_share_label(stats.theta.est), "end", 13);
  detail::label(scene, "win-odds", {x0 + side, 44}, win_odds_label(stats), "end", 13);

  const double polygon_area = shoelace(win);
  if (std::abs(polygon_area - stats.theta.est) > 1e-9) {
    scene.warn("win region area " + format_sig(polygon_area, 8) + " differs from the win probability " +
               format_sig(stats.theta.est, 8));
  }

  auto& meta = scene.meta();
  meta["kind"] = "mosaic2d";
  meta["tie_mode"] = tie_mode == TieMode::TriangleSplit ? "triangle" : "ordered";
  meta["categories"] = labels;
  meta["cumulative_active"] = ca;
  meta["cumulative_control"] = cc;
  meta["rects"] = rects;
  meta["tie_triangles"] = triangles;
  meta["odg"] = unit_points(odg.vertices);
  meta["odg_area_above"] = odg.area_above;
  meta["win_region"] = {{"vertices", unit_points(win)}, {"area", polygon_area}};
  meta["theta"] = stats.theta.est;
  meta["win_odds"] = estimate_to_json(stats.win_odds);
  meta["plot_square"] = {{"x", x0}, {"y", y0}, {"side", side}};
  return scene;
}

}  // namespace hce::viz
