#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "hce/contour.hpp"
#include "hce/design.hpp"
#include "hce/error.hpp"
#include "hce/kde.hpp"
#include "hce/plots.hpp"
#include "hce/theme.hpp"
#include "support/oracles.hpp"

using namespace hce;
using namespace hce::viz;

namespace {

std::vector<double> normals(Rng& rng, int n, double mean) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(rng.normal(mean, 1.0));
  return v;
}

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

HceDataset dataset_from(const ComponentConfig& cfg, std::vector<HceValue> a, std::vector<HceValue> c) {
  std::vector<SubjectRecord> s;
  int i = 0;
  for (const auto& v : a) s.push_back({"A" + std::to_string(i++), Arm::Active, v});
  for (const auto& v : c) s.push_back({"C" + std::to_string(i++), Arm::Control, v});
  return HceDataset(cfg, std::move(s));
}

}  // namespace

TEST_CASE("svg scene basics") {
  SvgScene s(100, 50);
  s.rect("r", 0, 0, 100, 50).fill("#ffffff");
  s.text("t", {10, 10}, "a < b & c");
  CHECK_THROWS(s.rect("r", 1, 1, 2, 2));
  CHECK_THROWS(s.line("x", {0, 0}, {101, 0}));
  CHECK_THROWS(s.circle("y", {std::nan(""), 0}, 1));
  const auto svg = s.to_svg();
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(svg.find("viewBox=\"0 0 100 50\"") != std::string::npos);
  CHECK(svg.find("a &lt; b &amp; c") != std::string::npos);
  CHECK(svg == s.to_svg());
  CHECK(svg_number(1.23456) == "1.235");
  CHECK(svg_number(2.0) == "2");
}

TEST_CASE("theme") {
  for (const auto& theme : {default_theme(), colorblind_theme()}) {
    for (int k : {1, 2, 7, 8, 12}) {
      const auto ramp = theme.severity_ramp(k);
      REQUIRE(ramp.size() == std::size_t(k));
      for (int i = 1; i < k; ++i) CHECK(ramp[i].lightness() > ramp[i - 1].lightness());
    }
    CHECK(theme.sunset_color(0.5).hex() == theme.sunset_color(1.0).hex());
    CHECK(theme.sunset_color(3.0).hex() == theme.sunset_color(1.86).hex());
  }
  CHECK(Rgb::from_hex("#1a2b3c").hex() == "#1a2b3c");
  setenv("HCE_THEME", "colorblind", 1);
  CHECK(theme_from_env().name == "colorblind");
  setenv("HCE_THEME", "nonsense", 1);
  CHECK(theme_from_env().name == "default");
  unsetenv("HCE_THEME");
}

TEST_CASE("kde and box statistics") {
  Rng rng(1);
  const auto v = normals(rng, 400, 0.0);
  const auto d = gaussian_kde(v);
  CHECK(d.grid.size() == 256);
  double integral = 0;
  for (std::size_t i = 1; i < d.grid.size(); ++i) {
    integral += (d.density[i] + d.density[i - 1]) / 2 * (d.grid[i] - d.grid[i - 1]);
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(0.01));
  CHECK_THROWS_AS(gaussian_kde(std::vector<double>{1, 2, 3, 4}), InputError);
  CHECK_THROWS_AS(gaussian_kde(std::vector<double>(10, 2.0)), InputError);

  const std::vector<double> s{1, 2, 3, 4, 100};
  const auto b = box_stats(s);
  CHECK(b.median == 3);
  CHECK(b.q1 == 2);
  CHECK(b.q3 == 4);
  CHECK(b.whisker_hi == 4);
  REQUIRE(b.outliers.size() == 1);
  CHECK(b.outliers[0] == 100);
}

TEST_CASE("iso contours") {
  const ValueGrid lin{2, 2, {0, 0, 1, 1}};
  auto c = extract_iso_contour(lin, 0.5);
  REQUIRE(c.size() == 1);
  REQUIRE(c[0].points.size() == 2);
  CHECK(c[0].points[0].y == 0.5);
  CHECK(c[0].points[1].y == 0.5);
  CHECK(std::abs(c[0].points[0].x - c[0].points[1].x) == 1.0);

  CHECK(extract_iso_contour(ValueGrid{3, 3, std::vector<double>(9, 2.0)}, 1.0).empty());
  CHECK(extract_iso_contour(lin, 2.0).empty());

  const std::size_t n = 41;
  ValueGrid bump{n, n, {}};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t col = 0; col < n; ++col) {
      const double x = (double(col) - 20) / 8, y = (double(r) - 20) / 8;
      bump.values.push_back(std::exp(-(x * x + y * y)));
    }
  }
  c = extract_iso_contour(bump, 0.5);
  REQUIRE(c.size() == 1);
  CHECK(c[0].closed);
  // Half-max radius of exp(-r^2) is sqrt(ln 2) in scaled units.
  const double radius = std::sqrt(std::log(2.0)) * 8;
  for (const auto& p : c[0].points) CHECK(std::hypot(p.x - 20, p.y - 20) == doctest::Approx(radius).epsilon(0.03));
}

TEST_CASE("shift plot") {
  Rng rng(2);
  const auto a = normals(rng, 500, 1.0), c = normals(rng, 500, 0.0);
  const auto s = render_shift_plot(a, c);
  const double height = s.meta()["band"]["height"];
  CHECK(std::abs(height - 1.0) <= 0.15);
  CHECK(height == doctest::Approx(std::abs(mean_of(a) - mean_of(c))).epsilon(1e-12));
  REQUIRE(s.find("shift-band") != nullptr);
  CHECK(s.find("shift-band")->tag() == "rect");

  const auto same = render_shift_plot(a, a);
  CHECK(same.meta()["band"]["height"] == 0.0);
  CHECK(same.find("shift-band")->tag() == "line");

  CHECK_THROWS_AS(render_shift_plot(std::vector<double>(10, 1.0), c), InputError);
  CHECK_THROWS_WITH_AS(render_shift_plot(std::vector<double>{1, 2, 3}, c), doctest::Contains("scatter"), InputError);
}

TEST_CASE("binary bar") {
  auto s = render_binary_bar({30, 100}, {40, 100});
  CHECK(s.meta()["band"]["lo"] == 0.3);
  CHECK(s.meta()["band"]["hi"] == 0.4);
  s = render_binary_bar({25, 100}, {25, 100});
  CHECK(s.meta()["band"]["height"] == 0.0);
  s = render_binary_bar({0, 100}, {100, 100});
  CHECK(s.meta()["band"]["lo"] == 0.0);
  CHECK(s.meta()["band"]["hi"] == 1.0);
  CHECK_THROWS_AS(render_binary_bar({0, 0}, {1, 2}), InputError);
}

TEST_CASE("mosaic") {
  const std::vector<double> eq(8, 0.125);
  std::vector<std::string> labels;
  for (int i = 1; i <= 8; ++i) labels.push_back("c" + std::to_string(i));
  auto s = render_mosaic({eq, eq}, labels, 7);
  const auto& segs = s.meta()["arms"]["active"];
  REQUIRE(segs.size() == 8);
  for (const auto& g : segs) CHECK(g["height"].get<double>() == doctest::Approx(segs[0]["height"].get<double>()));
  // Exactly one gap, between segments 7 and 8.
  for (std::size_t i = 1; i < 8; ++i) {
    const double gap = segs[i - 1]["y"].get<double>() - (segs[i]["y"].get<double>() + segs[i]["height"].get<double>());
    CHECK(gap == doctest::Approx(i == 7 ? 16.0 : 0.0));
  }
  s = render_mosaic({{1.0}, {1.0}}, {"only"});
  CHECK(s.find("segment-active-1") != nullptr);
  CHECK(s.find("segment-active-2") == nullptr);
  CHECK_THROWS_AS(render_mosaic({{0.5, 0.4}, {0.5, 0.5}}, {"a", "b"}), InputError);
  CHECK_THROWS_AS(render_mosaic({eq, eq}, labels, 8), InputError);
}

TEST_CASE("2-d mosaic") {
  const auto cfg = oracle::mixed_config(1);
  // One category, identical arms: single block split into two triangles.
  const Marginals one{{1.0}, {1.0}};
  const auto d1 = dataset_from(cfg, {{2, 0}, {2, 0}}, {{2, 0}, {2, 0}});
  auto s = render_mosaic_2d(one, {"all"}, ordinal_dominance_graph(one), analyze(d1), TieMode::TriangleSplit);
  CHECK(s.find("tie-win-1") != nullptr);
  CHECK(s.find("tie-loss-1") != nullptr);
  CHECK(s.meta()["win_region"]["area"] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(oracle::svg_attr(s.to_svg(), "win-share", "x") != "");
  CHECK(s.to_svg().find("50% vs 50%") != std::string::npos);

  // Active dominates.
  Rng rng(6);
  std::vector<HceValue> a, c;
  for (int i = 0; i < 200; ++i) a.push_back({rng.uniform() < 0.2 ? 1 : 2, rng.normal(0.8, 1)});
  for (int i = 0; i < 200; ++i) c.push_back({rng.uniform() < 0.4 ? 1 : 2, rng.normal(0.0, 1)});
  for (auto& v : a) v.magnitude = v.category == 1 ? std::floor(std::abs(v.magnitude) * 300) : v.magnitude;
  for (auto& v : c) v.magnitude = v.category == 1 ? std::floor(std::abs(v.magnitude) * 300) : v.magnitude;
  const auto d = dataset_from(cfg, a, c);
  const auto stats = analyze(d);
  const auto marg = marginal_proportions(category_table(d));
  s = render_mosaic_2d(marg, {"Event", "Continuous"}, ordinal_dominance_graph(d), stats, TieMode::OrderedTieBreak);
  CHECK(stats.theta.est > 0.5);
  CHECK(std::abs(s.meta()["win_region"]["area"].get<double>() - stats.theta.est) <= 1e-9);
  CHECK(s.meta()["warnings"].empty());
  // Re-derive the area from the emitted SVG polygon (3-decimal pixels).
  const auto pts = oracle::parse_points(oracle::svg_attr(s.to_svg(), "win-region", "points"));
  const double side = s.meta()["plot_square"]["side"];
  CHECK(std::abs(oracle::polygon_area(pts) / (side * side) - stats.theta.est) < 1e-5);
  for (const auto& r : s.meta()["rects"]) {
    const int i = r["active_category"], j = r["control_category"];
    CHECK(std::abs(r["area"].get<double>() - marg.active[i - 1] * marg.control[j - 1]) <= 1e-9);
  }

  // Curve that misses a category corner.
  OdgCurve wrong{{{0, 0}, {1, 1}}, 0.5};
  CHECK_THROWS_AS(render_mosaic_2d(marg, {"Event", "Continuous"}, wrong, stats, TieMode::TriangleSplit), InputError);
}

TEST_CASE("annotation labels") {
  CHECK(win_share_label(0.55) == "55% vs 45%");
  WinStats s;
  s.win_odds = {1.22, 1.10, 1.35, false};
  CHECK(win_odds_label(s) == "WO 1.22 (1.10–1.35)");
}

TEST_CASE("maraca") {
  const auto cfg = oracle::mixed_config(3);
  Rng rng(10);
  const auto d = oracle::random_dataset(rng, cfg, 150, 150, false);
  const auto s = render_maraca(d, analyze(d));
  const auto& comps = s.meta()["components"];
  REQUIRE(comps.size() == 4);
  double total_w = 0;
  for (const auto& c : comps) total_w += c["x1"].get<double>() - c["x0"].get<double>();
  for (const auto& c : comps) {
    CHECK(std::abs((c["x1"].get<double>() - c["x0"].get<double>()) / total_w - c["raw_proportion"].get<double>()) <= 1e-9);
  }
  CHECK(s.find("separator-1") != nullptr);
  CHECK(s.find("separator-3") != nullptr);
  CHECK(s.find("continuous-active-violin") != nullptr);
  CHECK(s.meta()["sliver_adjusted"] == false);

  // No events at all: one band, slivers for the rest, degenerate warning.
  std::vector<HceValue> a, c;
  for (int i = 0; i < 20; ++i) a.push_back({4, rng.normal(0, 1)});
  for (int i = 0; i < 20; ++i) c.push_back({4, rng.normal(0, 1)});
  const auto z = dataset_from(cfg, a, c);
  const auto zs = render_maraca(z, analyze(z));
  CHECK(zs.meta()["sliver_adjusted"] == true);
  CHECK(zs.meta()["components"][3]["band_fraction"].get<double>() == doctest::Approx(0.97));
  bool degenerate = false;
  for (const auto& w : zs.meta()["warnings"]) degenerate |= w.get<std::string>().find("degenerate") != std::string::npos;
  CHECK(degenerate);

  // Too few continuous values: scatter fallback with a warning.
  const auto few = dataset_from(cfg, {{1, 10}, {4, 1.0}, {4, 2.0}}, {{2, 5}, {4, 0.5}, {4, 3.0}});
  const auto fs = render_maraca(few, analyze(few));
  CHECK(fs.meta()["continuous"]["active"]["shape"] == "scatter");
  CHECK_FALSE(fs.meta()["warnings"].empty());
}

TEST_CASE("component plot") {
  const auto cfg = oracle::mixed_config(3);
  Rng rng(12);
  const auto d = oracle::random_dataset(rng, cfg, 120, 120, false);
  const auto rows = cumulative_components(d);
  const auto s = render_component_plot(rows);
  const auto& mr = s.meta()["rows"];
  REQUIRE(mr.size() == 4);
  for (const auto& r : mr) {
    const double sum = r["bar_px"]["active"].get<double>() + r["bar_px"]["tie"].get<double>() +
                       r["bar_px"]["control"].get<double>();
    CHECK(std::abs(sum - r["bar_width_px"].get<double>()) <= 0.5);
  }
  // Depth K has no ties: win odds and win ratio markers coincide.
  CHECK(std::abs(mr[3]["wo_x"].get<double>() - mr[3]["wr_x"].get<double>()) <= 0.5);
  // Depth 1 has the widest grey segment.
  for (std::size_t k = 1; k < 4; ++k) CHECK(mr[0]["bar_px"]["tie"].get<double>() >= mr[k]["bar_px"]["tie"].get<double>());
  CHECK(s.find("ref-line") != nullptr);
  CHECK(*s.find("ref-line")->find_attr("stroke-dasharray") == "5 4");
  CHECK_THROWS_AS(render_component_plot(std::span<const CumulativeRow>{}), InputError);
}

TEST_CASE("sunset render") {
  using namespace hce::design;
  const auto grid = sunset_grid(GridOptions{}, {});
  const auto iso = default_iso_levels();
  const auto delta = solve_delta_for_win_odds(0.8, 1.2, {}, {-0.5, 2.0});
  REQUIRE(delta);
  const std::vector<Anchor> anchors{{0.8, *delta, "WO 1.2"}};
  const auto s = render_sunset(grid, iso, anchors, {});

  bool found_highlight = false;
  for (const auto& level : s.meta()["iso"]) {
    if (level["skipped"]) continue;
    // Monotone field: each level is one connected open curve.
    CHECK(level["polylines"].size() == 1);
    if (level["highlighted"]) {
      found_highlight = true;
      // The anchor lies on the 1.2 line within one cell diagonal.
      const double dh = grid.hr_axis[1] - grid.hr_axis[0], dd = grid.delta_axis[1] - grid.delta_axis[0];
      double best = 1e9;
      for (const auto& p : level["polylines"][0]["points"]) {
        best = std::min(best, std::hypot((p[0].get<double>() - 0.8) / dh, (p[1].get<double>() - *delta) / dd));
      }
      CHECK(best <= std::sqrt(2.0));
    }
  }
  CHECK(found_highlight);
  // Upper-left corner is the no-effect end.
  CHECK(s.meta()["corners"]["upper_left"]["win_odds"].get<double>() < 1.0);
  CHECK(s.meta()["corners"]["lower_right"]["win_odds"].get<double>() > 1.86);

  // Empty overlay draws the same picture as no overlay.
  CHECK(render_sunset(grid, iso, anchors, FeasibilityOverlay{}).to_svg() == s.to_svg());

  // Out-of-range iso level is skipped with a warning.
  const std::vector<double> far{5.0};
  const auto w = render_sunset(grid, far, {}, {});
  CHECK(w.meta()["iso"][0]["skipped"] == true);
  CHECK_FALSE(w.meta()["warnings"].empty());

  const auto ov = feasibility_overlay({{0.7, 1.1, "a"}, {0.8, 0.4, "b"}, {0.9, 0.9, "c"}}, true);
  const auto o = render_sunset(grid, iso, anchors, ov);
  CHECK(o.find("overlay-region") != nullptr);
  CHECK(o.find("overlay-point-3") != nullptr);
}
