#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hce/design.hpp"
#include "hce/model.hpp"
#include "hce/svg.hpp"
#include "hce/theme.hpp"
#include "hce/win_engine.hpp"

namespace hce::viz {

/// Violin + box per arm with a grey band spanning the two arm means.
SvgScene render_shift_plot(std::span<const double> active, std::span<const double> control,
                           const PlotTheme& theme = default_theme());

struct EventTally {
  std::uint64_t events = 0;
  std::uint64_t total = 0;
};

/// Event-proportion bars with a grey band between the two proportions.
SvgScene render_binary_bar(EventTally active, EventTally control, const PlotTheme& theme = default_theme());

/// One stacked bar per arm, worst category at the bottom. With
/// `split_after` = k, a gap separates categories 1..k from k+1..K.
SvgScene render_mosaic(const Marginals& marginals, const std::vector<std::string>& labels,
                       std::optional<int> split_after = std::nullopt, const PlotTheme& theme = default_theme());

enum class TieMode { TriangleSplit, OrderedTieBreak };

/// Product plot of control (x, column widths) against active (y, row
/// heights) outcome categories, worst at the bottom-left. The win region
/// lies above the ordinal dominance graph; its area is the win
/// probability.
SvgScene render_mosaic_2d(const Marginals& marginals, const std::vector<std::string>& labels, const OdgCurve& odg,
                          const WinStats& stats, TieMode tie_mode, const PlotTheme& theme = default_theme());

/// "55% vs 45%" from the win probability.
std::string win_share_label(double theta);
/// "WO 1.22 (1.10–1.35)".
std::string win_odds_label(const WinStats& stats);

/// HCE distribution plot: x bands sized by pooled component shares, arm
/// cumulative-event step curves across the event bands, continuous
/// outcome violins in the last band.
SvgScene render_maraca(const HceDataset& dataset, const WinStats& stats, const PlotTheme& theme = default_theme());

/// Cumulative component plot: win/tie/loss bars on the left, win odds and
/// win ratio forest on the right.
SvgScene render_component_plot(std::span<const CumulativeRow> rows, const PlotTheme& theme = default_theme());

struct Anchor {
  double hr = 0.0;
  double delta = 0.0;
  std::string label;
};

/// Win-odds landscape: hazard ratio on x, mean difference on y, both axes
/// reversed so no effect sits upper-left and the largest effects
/// lower-right. Filled bands between the iso levels, iso
/// lines, anchors and the feasibility overlay.
SvgScene render_sunset(const design::SunsetGrid& grid, std::span<const double> iso_levels,
                       std::span<const Anchor> anchors, const design::FeasibilityOverlay& overlay,
                       const PlotTheme& theme = default_theme());

}  // namespace hce::viz
