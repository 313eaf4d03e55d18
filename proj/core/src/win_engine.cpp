#include "hce/win_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/normal.hpp>

#include "hce/error.hpp"
#include "win_internal.hpp"

namespace hce {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_nonempty(const ArmSample& sample) {
  if (sample.active.empty()) throw DegenerateError("active arm is empty");
  if (sample.control.empty()) throw DegenerateError("control arm is empty");
}

struct Moments {
  double var_win = 0.0, var_loss = 0.0, cov = 0.0;
};

Moments sample_moments(const std::vector<double>& win, const std::vector<double>& loss) {
  const auto n = static_cast<double>(win.size());
  double mw = 0.0, ml = 0.0;
  for (std::size_t i = 0; i < win.size(); ++i) {
    mw += win[i];
    ml += loss[i];
  }
  mw /= n;
  ml /= n;
  Moments m;
  for (std::size_t i = 0; i < win.size(); ++i) {
    const double dw = win[i] - mw;
    const double dl = loss[i] - ml;
    m.var_win += dw * dw;
    m.var_loss += dl * dl;
    m.cov += dw * dl;
  }
  m.var_win /= n - 1.0;
  m.var_loss /= n - 1.0;
  m.cov /= n - 1.0;
  return m;
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

}  // namespace

ArmSample arm_sample(const HceDataset& dataset, int depth) {
  const auto& cfg = dataset.config();
  if (depth < 0 || depth > cfg.size()) throw InputError("invalid depth " + std::to_string(depth));
  const bool truncate = depth > 0 && depth < cfg.size();
  ArmSample sample;
  for (const auto& s : dataset.subjects()) {
    OrderKey key = truncate && s.value.category > depth ? OrderKey{depth + 1, 0.0}
                                                        : order_key(s.value, cfg);
    (s.arm == Arm::Active ? sample.active : sample.control).push_back(key);
  }
  return sample;
}

WinCounts win_counts_brute(const HceDataset& dataset) {
  dataset.require_both_arms();
  const auto active = dataset.values(Arm::Active);
  const auto control = dataset.values(Arm::Control);
  WinCounts counts;
  counts.n_active = active.size();
  counts.n_control = control.size();
  for (const auto& a : active) {
    for (const auto& c : control) {
      switch (compare(a, c, dataset.config())) {
        case Outcome::AWins: ++counts.wins; break;
        case Outcome::BWins: ++counts.losses; break;
        case Outcome::Tie: ++counts.ties; break;
      }
    }
  }
  return counts;
}

WinCounts count_wins(const ArmSample& sample) {
  require_nonempty(sample);
  auto control = sample.control;
  std::sort(control.begin(), control.end());
  WinCounts counts;
  counts.n_active = sample.active.size();
  counts.n_control = control.size();
  for (const auto& key : sample.active) {
    const auto [lo, hi] = std::equal_range(control.begin(), control.end(), key);
    const auto below = static_cast<std::uint64_t>(lo - control.begin());
    const auto equal = static_cast<std::uint64_t>(hi - lo);
    counts.wins += below;
    counts.ties += equal;
  }
  counts.losses = counts.pairs() - counts.wins - counts.ties;
  return counts;
}

WinCounts win_counts_fast(const HceDataset& dataset) {
  dataset.require_both_arms();
  return count_wins(arm_sample(dataset));
}

PairwiseSummary pairwise_summary(const ArmSample& sample) {
  require_nonempty(sample);
  auto active = sample.active;
  auto control = sample.control;
  std::sort(active.begin(), active.end());
  std::sort(control.begin(), control.end());
  const auto n = static_cast<double>(active.size());
  const auto m = static_cast<double>(control.size());

  PairwiseSummary out;
  out.counts.n_active = active.size();
  out.counts.n_control = control.size();
  auto& p = out.placements;
  p.active_win.reserve(active.size());
  p.active_loss.reserve(active.size());
  for (const auto& key : sample.active) {
    const auto [lo, hi] = std::equal_range(control.begin(), control.end(), key);
    const auto below = static_cast<std::uint64_t>(lo - control.begin());
    const auto above = static_cast<std::uint64_t>(control.end() - hi);
    out.counts.wins += below;
    out.counts.losses += above;
    p.active_win.push_back(static_cast<double>(below) / m);
    p.active_loss.push_back(static_cast<double>(above) / m);
  }
  out.counts.ties = out.counts.pairs() - out.counts.wins - out.counts.losses;

  p.control_win.reserve(control.size());
  p.control_loss.reserve(control.size());
  for (const auto& key : sample.control) {
    const auto [lo, hi] = std::equal_range(active.begin(), active.end(), key);
    const auto beaten_by = static_cast<std::uint64_t>(active.end() - hi);
    const auto beats = static_cast<std::uint64_t>(lo - active.begin());
    p.control_win.push_back(static_cast<double>(beaten_by) / n);
    p.control_loss.push_back(static_cast<double>(beats) / n);
  }
  return out;
}

namespace detail {

WinStats point_estimates(const WinCounts& c, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0, 1)");
  if (c.n_active == 0 || c.n_control == 0) throw DegenerateError("empty arm");
  if (c.wins + c.losses + c.ties != c.pairs()) throw InputError("win counts do not sum to n*m");

  WinStats s;
  s.counts = c;
  s.alpha = alpha;
  const double pairs2 = 2.0 * static_cast<double>(c.pairs());
  const double good = 2.0 * static_cast<double>(c.wins) + static_cast<double>(c.ties);
  const double bad = 2.0 * static_cast<double>(c.losses) + static_cast<double>(c.ties);

  s.theta.est = good / pairs2;
  if (bad == 0.0) {
    s.win_odds.est = kInf;
    s.win_odds.degenerate = true;
  } else {
    // (2w + t) / (2l + t): identical to theta / (1 - theta) and exactly
    // wins / losses when there are no ties.
    s.win_odds.est = good / bad;
    s.win_odds.degenerate = good == 0.0;
  }
  if (c.losses == 0) {
    s.win_ratio.est = c.wins == 0 ? kNaN : kInf;
    s.win_ratio.degenerate = true;
  } else {
    s.win_ratio.est = static_cast<double>(c.wins) / static_cast<double>(c.losses);
    s.win_ratio.degenerate = c.wins == 0;
  }
  s.net_benefit.est = (static_cast<double>(c.wins) - static_cast<double>(c.losses)) /
                      static_cast<double>(c.pairs());
  for (Estimate* e : {&s.theta, &s.win_odds, &s.win_ratio, &s.net_benefit}) {
    e->lo = e->est;
    e->hi = e->est;
  }
  if (s.win_ratio.degenerate) s.warnings.push_back("win ratio is degenerate (no wins or no losses)");
  if (s.win_odds.degenerate) s.warnings.push_back("win odds is degenerate (win probability 0 or 1)");
  return s;
}

}  // namespace detail

WinStats win_statistics(const WinCounts& counts, const Placements& placements, double alpha) {
  WinStats s = detail::point_estimates(counts, alpha);
  if (counts.n_active < 2 || counts.n_control < 2) {
    throw DegenerateError("analytic confidence intervals need at least 2 subjects per arm; use bootstrap intervals");
  }
  if (placements.active_win.size() != counts.n_active || placements.control_win.size() != counts.n_control) {
    throw InputError("placements do not match counts");
  }
  s.ci_method = CiMethod::Analytic;

  const auto n = static_cast<double>(counts.n_active);
  const auto m = static_cast<double>(counts.n_control);
  const auto a = sample_moments(placements.active_win, placements.active_loss);
  const auto c = sample_moments(placements.control_win, placements.control_loss);
  const double var_win = a.var_win / n + c.var_win / m;
  const double var_loss = a.var_loss / n + c.var_loss / m;
  const double cov = a.cov / n + c.cov / m;
  const double var_theta = std::max(0.0, (var_win + var_loss - 2.0 * cov) / 4.0);
  const double z = normal_quantile(1.0 - alpha / 2.0);

  if (!s.win_odds.degenerate) {
    const double theta = s.theta.est;
    const double log_wo = std::log(s.win_odds.est);
    const double se = std::sqrt(var_theta) / (theta * (1.0 - theta));
    s.win_odds.lo = std::exp(log_wo - z * se);
    s.win_odds.hi = std::exp(log_wo + z * se);
    s.theta.lo = s.win_odds.lo / (1.0 + s.win_odds.lo);
    s.theta.hi = s.win_odds.hi / (1.0 + s.win_odds.hi);
  }

  if (!s.win_ratio.degenerate) {
    const double pairs = static_cast<double>(counts.pairs());
    const double pw = static_cast<double>(counts.wins) / pairs;
    const double pl = static_cast<double>(counts.losses) / pairs;
    const double var_log = std::max(0.0, var_win / (pw * pw) + var_loss / (pl * pl) - 2.0 * cov / (pw * pl));
    const double log_wr = std::log(s.win_ratio.est);
    s.win_ratio.lo = std::exp(log_wr - z * std::sqrt(var_log));
    s.win_ratio.hi = std::exp(log_wr + z * std::sqrt(var_log));
  }

  const double half_nb = z * 2.0 * std::sqrt(var_theta);
  s.net_benefit.lo = std::max(-1.0, s.net_benefit.est - half_nb);
  s.net_benefit.hi = std::min(1.0, s.net_benefit.est + half_nb);
  return s;
}

WinStats analyze(const ArmSample& sample, const CiOptions& options) {
  if (options.method == CiMethod::Bootstrap) {
    return bootstrap_statistics(sample, options.alpha, options.bootstrap_reps, options.seed);
  }
  const auto summary = pairwise_summary(sample);
  return win_statistics(summary.counts, summary.placements, options.alpha);
}

WinStats analyze(const HceDataset& dataset, const CiOptions& options) {
  dataset.require_both_arms();
  return analyze(arm_sample(dataset), options);
}

CumulativeRow cumulative_row(const HceDataset& dataset, int depth, const CiOptions& options) {
  const auto& cfg = dataset.config();
  if (depth < 1 || depth > cfg.size()) {
    throw InputError("invalid depth " + std::to_string(depth) + " (expected 1.." + std::to_string(cfg.size()) + ")");
  }
  dataset.require_both_arms();
  CumulativeRow row;
  row.depth = depth;
  for (int k = 1; k <= depth; ++k) row.included_components.push_back(cfg.at_priority(k).name);
  row.stats = analyze(arm_sample(dataset, depth), options);
  const auto& c = row.stats.counts;
  const double pairs = static_cast<double>(c.pairs());
  row.win_pct_active = 100.0 * static_cast<double>(c.wins) / pairs;
  row.win_pct_control = 100.0 * static_cast<double>(c.losses) / pairs;
  row.tie_pct = 100.0 * static_cast<double>(c.ties) / pairs;
  return row;
}

std::vector<CumulativeRow> cumulative_components(const HceDataset& dataset, const CiOptions& options) {
  std::vector<CumulativeRow> rows;
  for (int k = 1; k <= dataset.config().size(); ++k) rows.push_back(cumulative_row(dataset, k, options));
  return rows;
}

Marginals marginal_proportions(const CategoryTable& counts) {
  if (counts.active.size() != counts.control.size()) throw InputError("arms have different category counts");
  auto normalize = [](const std::vector<std::uint64_t>& v, const char* arm) {
    std::uint64_t total = 0;
    for (auto x : v) total += x;
    if (total == 0) throw DegenerateError(std::string(arm) + " arm has no subjects");
    std::vector<double> out;
    out.reserve(v.size());
    for (auto x : v) out.push_back(static_cast<double>(x) / static_cast<double>(total));
    return out;
  };
  return Marginals{normalize(counts.active, "active"), normalize(counts.control, "control")};
}

std::string_view to_string(CiMethod method) {
  return method == CiMethod::Analytic ? "analytic" : "bootstrap";
}

}  // namespace hce
