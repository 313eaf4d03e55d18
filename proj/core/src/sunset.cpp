#include <algorithm>
#include <atomic>
#include <optional>
#include <cmath>
#include <sstream>
#include <thread>

#include <boost/math/tools/roots.hpp>

#include "design_internal.hpp"
#include "hce/design.hpp"
#include "hce/error.hpp"
#include "hce/format.hpp"
#include "hce/rng.hpp"
#include "hce/win_engine.hpp"

namespace hce::design {
namespace {

const ComponentConfig& design_config(double follow_up) {
  thread_local std::optional<ComponentConfig> cached;
  if (!cached || cached->follow_up() != follow_up) {
    cached.emplace(std::vector<ComponentSpec>{
                       {"Event", ComponentKind::TimeToEvent, 1, Direction::HigherIsBetter},
                       {"Continuous", ComponentKind::Continuous, 2, Direction::HigherIsBetter},
                   },
                   follow_up);
  }
  return *cached;
}

HceValue draw_subject(Rng& rng, double rate, double mean, double sd, double tau) {
  const double t = rng.exponential(rate);
  if (t <= tau) return HceValue{1, t};
  return HceValue{2, rng.normal(mean, sd)};
}

void check_cell_inputs(double hr, double delta, const SunsetParams& params) {
  params.validate();
  if (!(std::isfinite(hr) && hr > 0.0)) throw InputError("hazard ratio must be positive");
  if (!std::isfinite(delta)) throw InputError("mean difference must be finite");
}

std::vector<double> linspace(AxisRange range, int points) {
  std::vector<double> axis(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    axis[static_cast<std::size_t>(i)] =
        i == points - 1 ? range.hi : range.lo + (range.hi - range.lo) * i / (points - 1);
  }
  return axis;
}

template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                    : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

}  // namespace

void SunsetParams::validate() const {
  if (!(p_event_control >= 0.0 && p_event_control < 1.0)) {
    throw InputError("p_event_control must be in [0, 1)");
  }
  if (!(std::isfinite(sd) && sd > 0.0)) throw InputError("sd must be positive");
  if (!(std::isfinite(follow_up) && follow_up > 0.0)) throw InputError("follow-up must be positive");
}

double sunset_theta(double hr, double delta, const SunsetParams& params) {
  check_cell_inputs(hr, delta, params);
  const double tau = params.follow_up;
  const double rate_c = detail::rate_for_probability(params.p_event_control, tau);
  const double rate_a = hr * rate_c;
  const double pc = params.p_event_control;
  const double pa = detail::event_probability(rate_a, tau);

  const double both_events = detail::joint_later_event(rate_a, rate_c, tau);
  const double active_free = (1.0 - pa) * pc;
  const double both_free = (1.0 - pa) * (1.0 - pc) * detail::normal_cdf(delta / (params.sd * std::sqrt(2.0)));
  return both_events + active_free + both_free;
}

double sunset_cell_closed_form(double hr, double delta, const SunsetParams& params) {
  const double theta = sunset_theta(hr, delta, params);
  return theta / (1.0 - theta);
}

HceDataset simulate_design_trial(double hr, double delta, const SunsetParams& params, int n_per_arm,
                                 std::uint64_t seed) {
  check_cell_inputs(hr, delta, params);
  if (n_per_arm < 1) throw InputError("n_per_arm must be positive");
  const double tau = params.follow_up;
  const double rate_c = detail::rate_for_probability(params.p_event_control, tau);
  Rng rng(seed);
  std::vector<SubjectRecord> subjects;
  subjects.reserve(2 * static_cast<std::size_t>(n_per_arm));
  for (int i = 0; i < n_per_arm; ++i) {
    subjects.push_back({"A" + std::to_string(i + 1), Arm::Active, draw_subject(rng, hr * rate_c, delta, params.sd, tau)});
  }
  for (int i = 0; i < n_per_arm; ++i) {
    subjects.push_back({"C" + std::to_string(i + 1), Arm::Control, draw_subject(rng, rate_c, 0.0, params.sd, tau)});
  }
  return HceDataset(design_config(tau), std::move(subjects));
}

McEstimate sunset_cell_mc(double hr, double delta, const SunsetParams& params, int n_per_arm, int reps,
                          std::uint64_t seed) {
  check_cell_inputs(hr, delta, params);
  if (n_per_arm < 2) throw InputError("n_per_arm must be at least 2");
  if (reps < 1) throw InputError("reps must be at least 1");
  const double tau = params.follow_up;
  const double rate_c = detail::rate_for_probability(params.p_event_control, tau);
  const auto& cfg = design_config(tau);

  double sum = 0.0, sum_sq = 0.0;
  ArmSample sample;
  sample.active.resize(static_cast<std::size_t>(n_per_arm));
  sample.control.resize(static_cast<std::size_t>(n_per_arm));
  for (int r = 0; r < reps; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    for (auto& k : sample.active) k = order_key(draw_subject(rng, hr * rate_c, delta, params.sd, tau), cfg);
    for (auto& k : sample.control) k = order_key(draw_subject(rng, rate_c, 0.0, params.sd, tau), cfg);
    const auto c = count_wins(sample);
    const double theta = (2.0 * static_cast<double>(c.wins) + static_cast<double>(c.ties)) /
                         (2.0 * static_cast<double>(c.pairs()));
    sum += theta;
    sum_sq += theta * theta;
  }
  McEstimate est;
  est.reps = reps;
  est.theta = sum / reps;
  if (reps > 1) {
    const double var = std::max(0.0, (sum_sq - reps * est.theta * est.theta) / (reps - 1));
    est.theta_se = std::sqrt(var / reps);
  }
  est.win_odds = est.theta / (1.0 - est.theta);
  est.se = est.theta_se / ((1.0 - est.theta) * (1.0 - est.theta));
  return est;
}

SunsetGrid sunset_grid(const GridOptions& options, const SunsetParams& params) {
  params.validate();
  if (!(options.hr.lo > 0.0 && options.hr.lo < options.hr.hi && std::isfinite(options.hr.hi))) {
    throw InputError("hazard-ratio range must be positive and ascending");
  }
  if (!(options.delta.lo < options.delta.hi && std::isfinite(options.delta.lo) && std::isfinite(options.delta.hi))) {
    throw InputError("mean-difference range must be ascending");
  }
  if (options.hr_points < 2 || options.delta_points < 2) throw InputError("grid resolution must be at least 2");

  SunsetGrid grid;
  grid.params = params;
  grid.method = options.method;
  grid.hr_axis = linspace(options.hr, options.hr_points);
  grid.delta_axis = linspace(options.delta, options.delta_points);
  const std::size_t cols = grid.cols();
  grid.values.assign(grid.rows() * cols, 0.0);

  if (options.method == GridMethod::ClosedForm) {
    for (std::size_t r = 0; r < grid.rows(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        grid.values[r * cols + c] = sunset_cell_closed_form(grid.hr_axis[c], grid.delta_axis[r], params);
      }
    }
    return grid;
  }

  grid.standard_errors.assign(grid.values.size(), 0.0);
  parallel_for(grid.values.size(), options.threads, [&](std::size_t idx) {
    const std::size_t r = idx / cols;
    const std::size_t c = idx % cols;
    const auto est = sunset_cell_mc(grid.hr_axis[c], grid.delta_axis[r], params, options.mc_n_per_arm,
                                    options.mc_reps, derive_seed(options.seed, r, c));
    grid.values[idx] = est.win_odds;
    grid.standard_errors[idx] = est.se;
  });
  return grid;
}

std::vector<double> default_band_levels() {
  std::vector<double> levels;
  for (int i = 0; i <= 10; ++i) levels.push_back(1.0 + 0.086 * i);
  levels.back() = 1.86;
  return levels;
}

std::vector<double> default_iso_levels() {
  auto levels = default_band_levels();
  levels.push_back(1.2);
  std::sort(levels.begin(), levels.end());
  return levels;
}

std::string grid_to_csv(const SunsetGrid& grid) {
  std::ostringstream out;
  out << "delta\\hr";
  for (double hr : grid.hr_axis) out << ',' << format_exact(hr);
  out << '\n';
  for (std::size_t r = 0; r < grid.rows(); ++r) {
    out << format_exact(grid.delta_axis[r]);
    for (std::size_t c = 0; c < grid.cols(); ++c) out << ',' << format_exact(grid.at(r, c));
    out << '\n';
  }
  return out.str();
}

std::optional<double> solve_delta_for_win_odds(double hr, double target, const SunsetParams& params,
                                               AxisRange bracket) {
  if (!(target > 0.0)) throw InputError("target win odds must be positive");
  auto f = [&](double delta) { return sunset_cell_closed_form(hr, delta, params) - target; };
  const double f_lo = f(bracket.lo);
  const double f_hi = f(bracket.hi);
  if (f_lo == 0.0) return bracket.lo;
  if (f_hi == 0.0) return bracket.hi;
  if (f_lo > 0.0 || f_hi < 0.0) return std::nullopt;
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, f_lo, f_hi,
                                                        boost::math::tools::eps_tolerance<double>(52), max_iter);
  return 0.5 * (a + b);
}

}  // namespace hce::design
