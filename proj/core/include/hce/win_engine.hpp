#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hce/model.hpp"

namespace hce {

struct WinCounts {
  std::uint64_t wins = 0;    // pairs where the active subject is better
  std::uint64_t losses = 0;  // pairs where the control subject is better
  std::uint64_t ties = 0;
  std::uint64_t n_active = 0;
  std::uint64_t n_control = 0;

  std::uint64_t pairs() const { return n_active * n_control; }
  friend bool operator==(const WinCounts&, const WinCounts&) = default;
};

/// Per-subject placement fractions. For an active subject: the share of
/// control subjects it beats / loses to. For a control subject: the share
/// of active subjects that beat it / lose to it.
struct Placements {
  std::vector<double> active_win, active_loss;
  std::vector<double> control_win, control_loss;
};

/// The two arms mapped onto the HCE total order.
struct ArmSample {
  std::vector<OrderKey> active;
  std::vector<OrderKey> control;
};

/// Keys for every subject. With `depth` < K, subjects whose category is
/// worse-ranked than `depth` (category > depth) share one best-ranked key.
ArmSample arm_sample(const HceDataset& dataset, int depth = 0);

/// O(n*m) pairwise comparison through `compare`; reference implementation.
WinCounts win_counts_brute(const HceDataset& dataset);

/// Sort-based O((n+m) log(n+m)) counting; same result as the brute force.
WinCounts win_counts_fast(const HceDataset& dataset);
WinCounts count_wins(const ArmSample& sample);

struct PairwiseSummary {
  WinCounts counts;
  Placements placements;
};
PairwiseSummary pairwise_summary(const ArmSample& sample);

enum class CiMethod { Analytic, Bootstrap };

struct Estimate {
  double est = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool degenerate = false;  // infinite/undefined estimate or collapsed interval
};

struct WinStats {
  WinCounts counts;
  Estimate theta;  // win probability, ties credited half
  Estimate win_odds;
  Estimate win_ratio;
  Estimate net_benefit;
  double alpha = 0.05;
  CiMethod ci_method = CiMethod::Analytic;
  int bootstrap_reps = 0;
  std::vector<std::string> warnings;
};

struct CiOptions {
  double alpha = 0.05;
  CiMethod method = CiMethod::Analytic;
  int bootstrap_reps = 2000;
  std::uint64_t seed = 20240601;
};

/// Point estimates plus large-sample intervals: U-statistic placement
/// variance, logit scale for the win odds, log scale (delta method on the
/// joint win/loss proportions) for the win ratio, identity scale for the
/// net benefit. Needs at least two subjects per arm.
WinStats win_statistics(const WinCounts& counts, const Placements& placements, double alpha);

/// Point estimates with percentile bootstrap intervals; subjects are
/// resampled within arm, replicate r seeded from derive_seed(seed, r).
WinStats bootstrap_statistics(const ArmSample& sample, double alpha, int reps, std::uint64_t seed);

WinStats analyze(const ArmSample& sample, const CiOptions& options);
WinStats analyze(const HceDataset& dataset, const CiOptions& options = {});

struct UnitPoint {
  double u = 0.0;  // cumulative control fraction
  double v = 0.0;  // cumulative active fraction
};

struct OdgCurve {
  std::vector<UnitPoint> vertices;  // (0,0) .. (1,1), worst outcome first
  double area_above = 0.0;
};

OdgCurve ordinal_dominance_graph(const HceDataset& dataset);
OdgCurve ordinal_dominance_graph(const ArmSample& sample);

/// Category-level curve from per-arm proportions (ties within a category
/// become one diagonal segment).
OdgCurve ordinal_dominance_graph(const Marginals& marginals);

/// Area of the unit square above the polyline, by the shoelace formula.
double area_above_curve(std::span<const UnitPoint> vertices);

struct CumulativeRow {
  int depth = 0;
  std::vector<std::string> included_components;
  double win_pct_active = 0.0;
  double win_pct_control = 0.0;
  double tie_pct = 0.0;
  WinStats stats;
};

/// Win statistics as components are added from the highest priority down.
std::vector<CumulativeRow> cumulative_components(const HceDataset& dataset, const CiOptions& options = {});
CumulativeRow cumulative_row(const HceDataset& dataset, int depth, const CiOptions& options = {});

Marginals marginal_proportions(const CategoryTable& counts);

std::string_view to_string(CiMethod method);

}  // namespace hce
