#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "hce/design.hpp"
#include "hce/error.hpp"
#include "hce/win_engine.hpp"
#include "support/oracles.hpp"

using namespace hce;
using namespace hce::design;

TEST_CASE("closed form: null, monotone, quadrature agreement") {
  const SunsetParams p;
  CHECK(std::abs(sunset_cell_closed_form(1.0, 0.0, p) - 1.0) <= 1e-12);
  CHECK(sunset_cell_closed_form(0.8, 0.0, p) > 1.0);
  CHECK(sunset_cell_closed_form(1.0, 0.5, p) > 1.0);
  CHECK(sunset_cell_closed_form(1.1, 0.0, p) < 1.0);
  for (double hr : {0.5, 0.8, 1.0, 1.15}) {
    for (double delta : {-0.5, 0.0, 1.0, 2.0}) {
      for (double pe : {0.1, 0.5, 0.9}) {
        const SunsetParams q{pe, 3.0, 730.0};
        CHECK(sunset_theta(hr, delta, q) ==
              doctest::Approx(oracle::sunset_theta_quadrature(hr, delta, pe, 3.0, 730.0)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("closed form: continuous only") {
  const SunsetParams p{0.0, 1.0, 1095.0};
  const double theta = sunset_theta(1.0, 1.0, p);
  CHECK(theta == doctest::Approx(oracle::normal_cdf(1.0 / std::sqrt(2.0))).epsilon(1e-14));
  CHECK(theta == doctest::Approx(0.7602).epsilon(1e-4));
  CHECK(sunset_cell_closed_form(1.0, 1.0, p) == doctest::Approx(3.171).epsilon(1e-3));
}

TEST_CASE("closed form: parameter errors") {
  CHECK_THROWS_AS(sunset_cell_closed_form(0.0, 0.0, {}), InputError);
  CHECK_THROWS_AS(sunset_cell_closed_form(-1.0, 0.0, {}), InputError);
  CHECK_THROWS_AS(sunset_cell_closed_form(1.0, 0.0, {1.0, 4.0, 1095.0}), InputError);
  CHECK_THROWS_AS(sunset_cell_closed_form(1.0, 0.0, {0.5, 0.0, 1095.0}), InputError);
  CHECK_THROWS_AS(sunset_cell_closed_form(1.0, 0.0, {0.5, 4.0, 0.0}), InputError);
}

TEST_CASE("anchor: win odds 1.2 at hr 0.8") {
  const SunsetParams p;
  const auto delta = solve_delta_for_win_odds(0.8, 1.2, p, {-0.5, 2.0});
  REQUIRE(delta.has_value());
  CHECK(sunset_cell_closed_form(0.8, *delta, p) == doctest::Approx(1.2).epsilon(1e-10));
  CHECK_FALSE(solve_delta_for_win_odds(0.8, 50.0, p, {-0.5, 2.0}).has_value());
}

TEST_CASE("monte carlo cell") {
  const SunsetParams p;
  const auto a = sunset_cell_mc(0.8, 0.5, p, 200, 40, 7);
  const auto b = sunset_cell_mc(0.8, 0.5, p, 200, 40, 7);
  CHECK(a.win_odds == b.win_odds);
  CHECK(a.se == b.se);
  CHECK(a.reps == 40);
  CHECK(std::abs(a.win_odds - sunset_cell_closed_form(0.8, 0.5, p)) <= 3 * a.se);
  const auto null = sunset_cell_mc(1.0, 0.0, p, 500, 200, 3);
  CHECK(std::abs(null.win_odds - 1.0) <= 3 * null.se);
  CHECK_THROWS_AS(sunset_cell_mc(1.0, 0.0, p, 1, 10, 3), InputError);
  CHECK_THROWS_AS(sunset_cell_mc(1.0, 0.0, p, 10, 0, 3), InputError);
}

TEST_CASE("design trial agrees with closed form at n = 5000") {
  const SunsetParams p;
  const auto d = simulate_design_trial(0.75, 0.8, p, 5000, 99);
  const auto s = analyze(d);
  const double theta = sunset_theta(0.75, 0.8, p);
  CHECK(std::abs(s.theta.est - theta) <= 3 * (s.theta.hi - s.theta.lo) / (2 * 1.959963984540054));
}

TEST_CASE("sunset grid") {
  GridOptions o;
  const auto g = sunset_grid(o, {});
  CHECK(g.rows() == 60);
  CHECK(g.cols() == 60);
  CHECK(g.hr_axis.front() == 0.5);
  CHECK(g.hr_axis.back() == 1.15);
  CHECK(g.delta_axis.front() == -0.5);
  CHECK(g.delta_axis.back() == 2.0);
  // Rows are delta: (row 0, last col) is hr = 1.15, delta = -0.5.
  CHECK(g.at(0, g.cols() - 1) < 1.0);
  CHECK(g.at(g.rows() - 1, 0) > 1.0);
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (c + 1 < g.cols()) CHECK(g.at(r, c + 1) < g.at(r, c));
      if (r + 1 < g.rows()) CHECK(g.at(r + 1, c) > g.at(r, c));
    }
  }

  GridOptions small;
  small.hr_points = small.delta_points = 2;
  const auto s = sunset_grid(small, {});
  CHECK(s.values.size() == 4);
  CHECK(s.at(0, 0) > s.at(0, 1));
  CHECK(s.at(1, 0) > s.at(0, 0));

  GridOptions bad;
  bad.hr = {1.0, 0.5};
  CHECK_THROWS_AS(sunset_grid(bad, {}), InputError);
  bad = {};
  bad.hr_points = 1;
  CHECK_THROWS_AS(sunset_grid(bad, {}), InputError);
  bad = {};
  bad.hr = {0.0, 1.0};
  CHECK_THROWS_AS(sunset_grid(bad, {}), InputError);
}

TEST_CASE("monte carlo grid is deterministic and thread independent") {
  GridOptions o;
  o.hr_points = o.delta_points = 4;
  o.method = GridMethod::MonteCarlo;
  o.mc_n_per_arm = 50;
  o.mc_reps = 5;
  o.seed = 7;
  o.threads = 1;
  const auto a = sunset_grid(o, {});
  o.threads = 4;
  const auto b = sunset_grid(o, {});
  CHECK(a.values == b.values);
  CHECK(a.standard_errors == b.standard_errors);
  CHECK(grid_to_csv(a) == grid_to_csv(b));
  CHECK(grid_to_csv(a).rfind("delta\\hr,", 0) == 0);
}

TEST_CASE("levels") {
  const auto bands = default_band_levels();
  REQUIRE(bands.size() == 11);
  CHECK(bands.front() == 1.0);
  CHECK(bands.back() == doctest::Approx(1.86));
  const auto iso = default_iso_levels();
  CHECK(std::find_if(iso.begin(), iso.end(), [](double v) { return std::abs(v - 1.2) < 1e-12; }) != iso.end());
}

TEST_CASE("scenario simulation") {
  Scenario s;
  s.n_per_arm = 2000;
  s.components = {{"Death", 0.1}, {"Hosp", 0.2}};
  s.hr = 1.0;
  s.sd = 2.0;
  s.seed = 5;
  const auto d = simulate_trial(s);
  CHECK(d.count(Arm::Active) == 2000);
  const auto st = analyze(d);
  CHECK(std::abs(st.theta.est - 0.5) < 0.03);
  CHECK(dataset_to_csv(simulate_trial(s)) == dataset_to_csv(d));

  const auto e = scenario_closed_form(s);
  CHECK(e.theta == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(e.event_fraction_control == doctest::Approx(0.3).epsilon(1e-12));

  Scenario bad = s;
  bad.components = {{"Death", 0.7}, {"Hosp", 0.4}};
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = s;
  bad.n_per_arm = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = s;
  bad.components[0].p_control = -0.1;
  CHECK_THROWS_AS(bad.validate(), InputError);
}

TEST_CASE("scenario closed form agrees with simulation") {
  Scenario s;
  s.n_per_arm = 5000;
  s.components = {{"Death", 0.05}, {"Failure", 0.1}, {"Decline", 0.15}};
  s.hr = 0.7;
  s.mean_active = 0.5;
  s.sd = 3.0;
  s.seed = 12;
  const auto st = analyze(simulate_trial(s));
  const auto e = scenario_closed_form(s);
  const double se = (st.theta.hi - st.theta.lo) / (2 * 1.959963984540054);
  CHECK(std::abs(st.theta.est - e.theta) <= 3 * se);
}

TEST_CASE("scenario JSON round trip") {
  Scenario s;
  s.n_per_arm = 10;
  s.components = {{"Death", 0.1}};
  s.seed = 42;
  const auto again = parse_scenario(scenario_to_json(s));
  CHECK(again.n_per_arm == 10);
  CHECK(again.components.size() == 1);
  CHECK(again.seed == 42);
  CHECK_THROWS_AS(parse_scenario("{}"), InputError);
  CHECK_THROWS_AS(parse_scenario("[1,2"), InputError);
}

TEST_CASE("feasibility overlay") {
  std::vector<OverlayPoint> pts{{0.7, 1.1, "1"}, {0.78, 0.75, "2"}, {0.85, 1.3, "3"}, {0.8, 0.4, "4"},
                                {0.92, 0.9, "5"}, {0.72, 0.55, "6"}, {0.8, 0.8, "inner"}};
  const auto o = feasibility_overlay(pts, true);
  CHECK(o.points.size() == 7);
  CHECK(o.polygon.size() == 5);  // hull excludes the interior points
  CHECK(is_simple_polygon(o.polygon));

  CHECK(feasibility_overlay({}, true).empty());
  const auto one = feasibility_overlay({{0.8, 1.0, ""}}, true);
  CHECK(one.points.size() == 1);
  CHECK(one.polygon.empty());

  const std::vector<PlanePoint> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(feasibility_overlay({}, false, bowtie), InputError);

  std::istringstream csv("HR,DELTA,LABEL\n0.8,1.0,A\n0.9,0.5,\n");
  const auto parsed = parse_overlay_csv(csv);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].label == "A");
  std::istringstream bad("HR,LABEL\n0.8,A\n");
  CHECK_THROWS_AS(parse_overlay_csv(bad), InputError);
}

TEST_CASE("shipped scenarios") {
  for (const char* name : {"scenario_a.json", "scenario_b.json"}) {
    std::ifstream in(std::string(HCE_DATA_DIR) + "/" + name);
    REQUIRE(in.good());
    std::stringstream text;
    text << in.rdbuf();
    const auto s = parse_scenario(text.str());
    const auto e = scenario_closed_form(s);
    CHECK(e.win_odds >= 1.17);
    CHECK(e.win_odds <= 1.27);
  }
}
