#include <algorithm>
#include <cmath>

#include "hce/error.hpp"
#include "hce/rng.hpp"
#include "hce/win_engine.hpp"
#include "win_internal.hpp"

namespace hce {
namespace {

std::vector<OrderKey> resample(const std::vector<OrderKey>& keys, Rng& rng) {
  std::vector<OrderKey> out(keys.size());
  for (auto& k : out) k = keys[rng.below(keys.size())];
  return out;
}

// Nearest-rank percentile on sorted data.
double percentile(const std::vector<double>& sorted, double q) {
  const auto b = static_cast<double>(sorted.size());
  auto idx = static_cast<long>(std::ceil(q * b)) - 1;
  idx = std::clamp(idx, 0L, static_cast<long>(sorted.size()) - 1);
  return sorted[static_cast<std::size_t>(idx)];
}

void assign_interval(Estimate& e, std::vector<double> draws, double alpha) {
  std::erase_if(draws, [](double x) { return std::isnan(x); });
  if (draws.empty()) return;
  std::sort(draws.begin(), draws.end());
  e.lo = percentile(draws, alpha / 2.0);
  e.hi = percentile(draws, 1.0 - alpha / 2.0);
}

}  // namespace

WinStats bootstrap_statistics(const ArmSample& sample, double alpha, int reps, std::uint64_t seed) {
  if (reps < 1) throw InputError("bootstrap needs at least one replicate");
  WinStats s = detail::point_estimates(count_wins(sample), alpha);
  s.ci_method = CiMethod::Bootstrap;
  s.bootstrap_reps = reps;

  std::vector<double> theta, wo, wr, nb;
  theta.reserve(static_cast<std::size_t>(reps));
  wo.reserve(theta.capacity());
  wr.reserve(theta.capacity());
  nb.reserve(theta.capacity());
  std::size_t undefined_wr = 0;
  for (int r = 0; r < reps; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    ArmSample boot{resample(sample.active, rng), resample(sample.control, rng)};
    const auto rep = detail::point_estimates(count_wins(boot), alpha);
    theta.push_back(rep.theta.est);
    wo.push_back(rep.win_odds.est);
    wr.push_back(rep.win_ratio.est);
    nb.push_back(rep.net_benefit.est);
    if (std::isnan(rep.win_ratio.est)) ++undefined_wr;
  }
  assign_interval(s.theta, std::move(theta), alpha);
  assign_interval(s.win_odds, std::move(wo), alpha);
  assign_interval(s.win_ratio, std::move(wr), alpha);
  assign_interval(s.net_benefit, std::move(nb), alpha);
  if (undefined_wr > 0) {
    s.warnings.push_back(std::to_string(undefined_wr) + " bootstrap replicates had an undefined win ratio");
  }
  if (std::isinf(s.win_odds.hi) || std::isinf(s.win_ratio.hi)) {
    s.warnings.push_back("bootstrap interval reaches +infinity");
  }
  return s;
}

}  // namespace hce
