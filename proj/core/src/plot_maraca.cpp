#include <algorithm>
#include <cmath>
#include <limits>

#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/plots.hpp"
#include "plot_util.hpp"

namespace hce::viz {

namespace {

constexpr double kSliver = 0.01;

// Adds the step curve of one arm over the event bands and returns the
// final cumulative percentage.
double step_curve(SvgScene& scene, const std::string& id, const std::vector<std::vector<double>>& times,
                  const std::vector<double>& edges_px, double follow_up, double n_arm, const detail::LinearScale& ys,
                  Rgb color) {
  std::vector<Point> pts{{edges_px[0], ys(0.0)}};
  double cum = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double bx0 = edges_px[k], bx1 = edges_px[k + 1];
    for (double t : times[k]) {
      const double x = bx0 + t / follow_up * (bx1 - bx0);
      pts.push_back({x, ys(cum)});
      cum += 100.0 / n_arm;
      pts.push_back({x, ys(cum)});
    }
    pts.push_back({bx1, ys(cum)});
  }
  scene.polyline(id, pts).stroke(color.hex(), 2.0);
  return cum;
}

}  // namespace

SvgScene render_maraca(const HceDataset& dataset, const WinStats& stats, const PlotTheme& theme) {
  dataset.require_both_arms();
  const auto& config = dataset.config();
  const int k = static_cast<int>(config.size());
  const int n_tte = k - 1;
  const double follow_up = config.follow_up();

  std::vector<double> counts(k, 0.0);
  std::vector<std::vector<double>> times_a(n_tte), times_c(n_tte);
  std::vector<double> cont_a, cont_c;
  for (const auto& s : dataset.subjects()) {
    const int c = s.value.category;
    counts[c - 1] += 1.0;
    const bool active = s.arm == Arm::Active;
    if (c <= n_tte) {
      (active ? times_a : times_c)[c - 1].push_back(s.value.magnitude);
    } else {
      (active ? cont_a : cont_c).push_back(s.value.magnitude);
    }
  }
  for (auto* v : {&times_a, &times_c}) {
    for (auto& t : *v) std::sort(t.begin(), t.end());
  }
  const double total = double(dataset.subjects().size());
  const double n_a = double(dataset.count(Arm::Active));
  const double n_c = double(dataset.count(Arm::Control));

  SvgScene scene(860, 520);
  std::vector<double> raw(k), fractions(k);
  std::vector<std::string> slivers;
  int empty = 0;
  for (int i = 0; i < k; ++i) {
    raw[i] = counts[i] / total;
    if (counts[i] == 0.0) ++empty;
  }
  for (int i = 0; i < k; ++i) {
    if (counts[i] == 0.0) {
      fractions[i] = kSliver;
      slivers.push_back(config.at_priority(i + 1).name);
    } else {
      fractions[i] = raw[i] * (1.0 - kSliver * empty);
    }
  }
  if (empty > 0) {
    scene.warn("empty components drawn as 1% slivers: " + [&] {
      std::string s;
      for (const auto& n : slivers) s += (s.empty() ? "" : ", ") + n;
      return s;
    }());
  }
  if (std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0.0; }) == 1) {
    scene.warn("degenerate layout: every subject falls in one component");
  }

  const auto& m = theme.margins;
  const double x0 = m.left, x1 = scene.width() - m.right;
  const double y0 = m.top + 10, y1 = scene.height() - m.bottom - 20;
  std::vector<double> edges{x0};
  for (int i = 0; i < k; ++i) edges.push_back(edges.back() + fractions[i] * (x1 - x0));
  edges.back() = x1;

  // Event curves share one axis scaled to the larger arm total.
  double max_pct = 0.0;
  for (const auto* arm : {&times_a, &times_c}) {
    std::size_t events = 0;
    for (const auto& t : *arm) events += t.size();
    const double n = arm == &times_a ? n_a : n_c;
    max_pct = std::max(max_pct, 100.0 * double(events) / n);
  }
  const double y_max = std::max(10.0, std::ceil(max_pct / 10.0 - 1e-12) * 10.0);
  const detail::LinearScale ys{0.0, y_max, y1, y0};

  for (int i = 0; i < k; ++i) {
    if (i % 2 == 1) scene.rect("band-" + std::to_string(i + 1), edges[i], y0, edges[i + 1] - edges[i], y1 - y0).fill("#f3f3f3");
  }
  for (int i = 1; i < k; ++i) {
    scene.line("separator-" + std::to_string(i), {edges[i], y0}, {edges[i], y1}).stroke("#969696", 1.0).dash("4 3");
  }

  const double end_a = step_curve(scene, "step-active", times_a, edges, follow_up, n_a, ys, theme.active);
  const double end_c = step_curve(scene, "step-control", times_c, edges, follow_up, n_c, ys, theme.control);

  // Continuous band: one horizontal violin per arm over the pooled range.
  const double bx0 = edges[k - 1], bx1 = edges[k];
  const double pad = bx1 - bx0 > 40 ? 10.0 : 0.0;
  double lo = 0.0, hi = 1.0;
  if (!cont_a.empty() || !cont_c.empty()) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const auto* v : {&cont_a, &cont_c}) {
      for (double x : *v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    if (lo == hi) {
      lo -= 1.0;
      hi += 1.0;
    }
  }
  const detail::LinearScale xs{lo, hi, bx0 + pad, bx1 - pad};
  const double half = 0.12 * (y1 - y0);
  auto meta_cont = nlohmann::json::object();
  struct ContArm {
    const char* name;
    const std::vector<double>* values;
    double y;
    Rgb color;
  };
  for (const ContArm& arm : {ContArm{"active", &cont_a, y0 + 0.3 * (y1 - y0), theme.active},
                             ContArm{"control", &cont_c, y0 + 0.7 * (y1 - y0), theme.control}}) {
    const std::string prefix = std::string("continuous-") + arm.name;
    std::string shape = "none";
    if (arm.values->size() >= 5 && silverman_bandwidth(*arm.values) > 0.0) {
      const Density d = gaussian_kde(*arm.values, 256, 0.0);
      detail::draw_violin(scene, prefix, *arm.values, d, false, arm.y, half,
                          *std::max_element(d.density.begin(), d.density.end()), xs, arm.color);
      shape = "violin";
    } else if (!arm.values->empty()) {
      scene.warn(std::string("continuous ") + arm.name + " values drawn as points (too few or constant for a density)");
      int i = 0;
      for (double v : *arm.values) {
        scene.circle(prefix + "-point-" + std::to_string(i++), {xs(v), arm.y}, 2.0).fill(arm.color.hex()).opacity(0.7);
      }
      shape = "scatter";
    }
    meta_cont[arm.name] = {{"n", arm.values->size()}, {"shape", shape}};
  }

  detail::y_axis(scene, "y-axis", x0, y0, y1, detail::nice_ticks(0.0, y_max), ys, 0);
  scene.line("x-axis-line", {x0, y1}, {x1, y1}).stroke("#252525");
  for (int i = 0; i < k; ++i) {
    const double cx = (edges[i] + edges[i + 1]) / 2;
    const std::string name = config.at_priority(i + 1).name + (counts[i] == 0.0 ? "*" : "");
    if (edges[i + 1] - edges[i] >= 80) {
      const double dy = i % 2 == 1 && i + 1 < k ? 28.0 : 0.0;  // stagger neighbours
      detail::label(scene, "band-label-" + std::to_string(i + 1), {cx, y1 + 16 + dy}, name, "middle", 10);
      detail::label(scene, "band-share-" + std::to_string(i + 1), {cx, y1 + 30 + dy}, detail::percent(raw[i]), "middle",
                    10);
    } else {
      // Narrow bands get a slanted label instead.
      detail::label(scene, "band-label-" + std::to_string(i + 1), {cx - 3, y1 + 10},
                    name + " " + detail::percent(raw[i]), "start", 9)
          .attr("transform", "rotate(40 " + svg_number(cx - 3) + " " + svg_number(y1 + 10) + ")");
    }
  }
  detail::label(scene, "y-axis-title", {x0 - 45, (y0 + y1) / 2}, "Cumulative events (% of arm)", "middle", 11)
      .attr("transform", "rotate(-90 " + svg_number(x0 - 45) + " " + svg_number((y0 + y1) / 2) + ")");
  detail::label(scene, "wo-label", {x1, 28}, win_odds_label(stats), "end", 13);
  detail::label(scene, "legend-active", {x1 - 330, 28}, "Active", "start", 12).fill(theme.active.hex());
  detail::label(scene, "legend-control", {x1 - 270, 28}, "Control", "start", 12).fill(theme.control.hex());

  auto& meta = scene.meta();
  meta["kind"] = "maraca";
  meta["components"] = nlohmann::json::array();
  for (int i = 0; i < k; ++i) {
    const auto& spec = config.at_priority(i + 1);
    meta["components"].push_back({{"name", spec.name},
                                  {"raw_proportion", raw[i]},
                                  {"band_fraction", fractions[i]},
                                  {"x0", edges[i]},
                                  {"x1", edges[i + 1]},
                                  {"sliver", counts[i] == 0.0}});
  }
  meta["sliver_adjusted"] = empty > 0;
  meta["y_max_pct"] = y_max;
  meta["final_pct"] = {{"active", end_a}, {"control", end_c}};
  meta["continuous"] = meta_cont;
  meta["continuous_range"] = {lo, hi};
  return scene;
}

}  // namespace hce::viz
