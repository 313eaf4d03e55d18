#include <algorithm>
#include <numeric>

#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/plots.hpp"
#include "plot_util.hpp"

namespace hce::viz {

namespace {

double mean_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / double(v.size()); }

// Band between two values on a vertical scale; a line when they coincide.
void mean_band(SvgScene& scene, const std::string& id, double x0, double x1, double ya, double yc, Rgb grey) {
  const double top = std::min(ya, yc);
  const double height = std::abs(ya - yc);
  if (height < 1e-9) {
    scene.line(id, {x0, top}, {x1, top}).stroke(grey.hex(), 2.0);
  } else {
    scene.rect(id, x0, top, x1 - x0, height).fill(grey.hex()).opacity(0.45);
  }
}

}  // namespace

SvgScene render_shift_plot(std::span<const double> active, std::span<const double> control, const PlotTheme& theme) {
  for (auto arm : {active, control}) {
    for (double v : arm) {
      if (!std::isfinite(v)) throw InputError("shift plot values must be finite");
    }
  }
  // gaussian_kde rejects small or constant samples with an InputError.
  const Density da = gaussian_kde(active);
  const Density dc = gaussian_kde(control);

  SvgScene scene(560, 480);
  const auto& m = theme.margins;
  const double x0 = m.left, x1 = scene.width() - m.right;
  const double y0 = m.top, y1 = scene.height() - m.bottom;

  const double lo = std::min(da.grid.front(), dc.grid.front());
  const double hi = std::max(da.grid.back(), dc.grid.back());
  const detail::LinearScale ys{lo, hi, y1, y0};
  const double max_density = std::max(*std::max_element(da.density.begin(), da.density.end()),
                                      *std::max_element(dc.density.begin(), dc.density.end()));

  const double mean_a = mean_of(active);
  const double mean_c = mean_of(control);
  mean_band(scene, "shift-band", x0, x1, ys(mean_a), ys(mean_c), theme.band_grey);

  const double half = 0.18 * (x1 - x0);
  const double xa = x0 + 0.3 * (x1 - x0);
  const double xc = x0 + 0.7 * (x1 - x0);
  detail::draw_violin(scene, "active", active, da, true, xa, half, max_density, ys, theme.active);
  detail::draw_violin(scene, "control", control, dc, true, xc, half, max_density, ys, theme.control);
  scene.line("mean-active", {xa - half, ys(mean_a)}, {xa + half, ys(mean_a)}).stroke(theme.active.hex(), 2).dash("5 3");
  scene.line("mean-control", {xc - half, ys(mean_c)}, {xc + half, ys(mean_c)}).stroke(theme.control.hex(), 2).dash("5 3");

  detail::y_axis(scene, "y-axis", x0, y0, y1, detail::nice_ticks(lo, hi), ys, 2);
  detail::label(scene, "label-active", {xa, y1 + 24}, "Active");
  detail::label(scene, "label-control", {xc, y1 + 24}, "Control");
  detail::label(scene, "title", {scene.width() / 2, 28}, "Difference in means: " + format_sig(mean_a - mean_c), "middle", 14);

  auto& meta = scene.meta();
  meta["kind"] = "shift";
  meta["n_active"] = active.size();
  meta["n_control"] = control.size();
  meta["mean_active"] = mean_a;
  meta["mean_control"] = mean_c;
  meta["band"] = {{"lo", std::min(mean_a, mean_c)}, {"hi", std::max(mean_a, mean_c)}, {"height", std::abs(mean_a - mean_c)}};
  meta["bandwidth_active"] = da.bandwidth;
  meta["bandwidth_control"] = dc.bandwidth;
  return scene;
}

SvgScene render_binary_bar(EventTally active, EventTally control, const PlotTheme& theme) {
  for (const auto& t : {active, control}) {
    if (t.total == 0) throw InputError("binary plot needs at least one subject per arm");
    if (t.events > t.total) throw InputError("event count exceeds arm size");
  }
  SvgScene scene(480, 420);
  const auto& m = theme.margins;
  const double x0 = m.left, x1 = scene.width() - m.right;
  const double y0 = m.top, y1 = scene.height() - m.bottom;
  const detail::LinearScale ys{0.0, 1.0, y1, y0};

  const double pa = double(active.events) / double(active.total);
  const double pc = double(control.events) / double(control.total);
  const double bar_w = 90;
  const double xa = x0 + 0.3 * (x1 - x0);
  const double xc = x0 + 0.7 * (x1 - x0);

  scene.rect("bar-active", xa - bar_w / 2, ys(pa), bar_w, y1 - ys(pa)).fill(theme.active.hex());
  scene.rect("bar-control", xc - bar_w / 2, ys(pc), bar_w, y1 - ys(pc)).fill(theme.control.hex());
  mean_band(scene, "binary-band", x0, x1, ys(pa), ys(pc), theme.band_grey);

  detail::label(scene, "value-active", {xa, ys(pa) - 6}, detail::percent(pa));
  detail::label(scene, "value-control", {xc, ys(pc) - 6}, detail::percent(pc));
  detail::y_axis(scene, "y-axis", x0, y0, y1, detail::nice_ticks(0.0, 1.0), ys, 1);
  detail::label(scene, "label-active", {xa, y1 + 24}, "Active");
  detail::label(scene, "label-control", {xc, y1 + 24}, "Control");
  detail::label(scene, "title", {scene.width() / 2, 28}, "Event proportion", "middle", 14);

  auto& meta = scene.meta();
  meta["kind"] = "binary";
  meta["p_active"] = pa;
  meta["p_control"] = pc;
  meta["band"] = {{"lo", std::min(pa, pc)}, {"hi", std::max(pa, pc)}, {"height", std::abs(pa - pc)}};
  return scene;
}

}  // namespace hce::viz
