#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hce/model.hpp"

namespace hce::design {

/// Nuisance parameters of the two-component design model: one
/// time-to-event outcome (exponential, proportional hazards, fixed
/// follow-up) and a Normal continuous outcome for event-free subjects.
struct SunsetParams {
  double p_event_control = 0.5;  // P(control event within follow-up)
  double sd = 4.0;               // SD of the continuous outcome, both arms
  double follow_up = 1095.0;     // days

  void validate() const;
};

/// Win probability of active vs control under the design model with
/// hazard ratio `hr` and mean difference `delta` (active minus control).
double sunset_theta(double hr, double delta, const SunsetParams& params);

/// Win odds under the design model, closed form.
double sunset_cell_closed_form(double hr, double delta, const SunsetParams& params);

struct McEstimate {
  double win_odds = 0.0;
  double se = 0.0;  // standard error of win_odds (delta method on mean theta)
  double theta = 0.0;
  double theta_se = 0.0;
  int reps = 0;
};

/// Simulates `reps` trials of `n_per_arm` subjects per arm from the design
/// model; theta is averaged over replicates and mapped to win odds.
McEstimate sunset_cell_mc(double hr, double delta, const SunsetParams& params, int n_per_arm, int reps,
                          std::uint64_t seed);

/// One simulated design-model trial (K = 2: event, then continuous).
HceDataset simulate_design_trial(double hr, double delta, const SunsetParams& params, int n_per_arm,
                                 std::uint64_t seed);

enum class GridMethod { ClosedForm, MonteCarlo };

struct AxisRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct GridOptions {
  AxisRange hr{0.50, 1.15};
  AxisRange delta{-0.5, 2.0};
  int hr_points = 60;
  int delta_points = 60;
  GridMethod method = GridMethod::ClosedForm;
  int mc_n_per_arm = 200;
  int mc_reps = 50;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
};

/// Win odds over hr (columns) x delta (rows).
struct SunsetGrid {
  std::vector<double> hr_axis;
  std::vector<double> delta_axis;
  std::vector<double> values;  // row-major, rows = delta
  std::vector<double> standard_errors;  // Monte Carlo only
  SunsetParams params;
  GridMethod method = GridMethod::ClosedForm;

  std::size_t rows() const { return delta_axis.size(); }
  std::size_t cols() const { return hr_axis.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
};

SunsetGrid sunset_grid(const GridOptions& options, const SunsetParams& params);

/// Ten equal-width win-odds bands on [1.00, 1.86].
std::vector<double> default_band_levels();

/// Band boundaries plus the highlighted 1.2 contour.
std::vector<double> default_iso_levels();

/// CSV matrix: first row "delta\hr,<hr values>", then one row per delta.
std::string grid_to_csv(const SunsetGrid& grid);

/// Mean difference at which the closed-form win odds equals `target` for
/// the given hazard ratio; nullopt when the target is not reached inside
/// `bracket`.
std::optional<double> solve_delta_for_win_odds(double hr, double target, const SunsetParams& params,
                                               AxisRange bracket);

struct ScenarioComponent {
  std::string name;
  double p_control = 0.0;  // P(control subject's HCE category is this component)
};

struct Scenario {
  int n_per_arm = 0;
  std::vector<ScenarioComponent> components;  // priority order, most severe first
  std::string continuous_name = "eGFR change";
  double mean_active = 0.0;
  double mean_control = 0.0;
  double sd = 1.0;
  double hr = 1.0;
  double follow_up = 1095.0;
  std::uint64_t seed = 1;

  void validate() const;
};

Scenario parse_scenario(std::string_view json_text);
std::string scenario_to_json(const Scenario& scenario);

ComponentConfig scenario_config(const Scenario& scenario);

/// Per-subject component-wise exponential event times (active rates
/// scaled by hr); the most severe component that occurs within follow-up
/// sets the category, otherwise a Normal continuous draw.
HceDataset simulate_trial(const Scenario& scenario);

struct ScenarioExpectation {
  double theta = 0.0;
  double win_odds = 0.0;
  double event_fraction_active = 0.0;
  double event_fraction_control = 0.0;
  double event_fraction_pooled = 0.0;
};

/// Exact population values of the scenario model.
ScenarioExpectation scenario_closed_form(const Scenario& scenario);

struct OverlayPoint {
  double hr = 0.0;
  double delta = 0.0;
  std::string label;
};

struct PlanePoint {
  double hr = 0.0;
  double delta = 0.0;
};

struct FeasibilityOverlay {
  std::vector<OverlayPoint> points;
  std::vector<PlanePoint> polygon;

  bool empty() const { return points.empty() && polygon.empty(); }
};

/// Validates user-supplied trial points and the optional region. With
/// `hull` and no explicit polygon, the region is the convex hull of the
/// points.
FeasibilityOverlay feasibility_overlay(std::vector<OverlayPoint> points, bool hull,
                                       std::optional<std::vector<PlanePoint>> polygon = std::nullopt);

/// Reads `HR,DELTA[,LABEL]` rows.
std::vector<OverlayPoint> parse_overlay_csv(std::istream& csv);

std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> points);
bool is_simple_polygon(const std::vector<PlanePoint>& polygon);

}  // namespace hce::design
