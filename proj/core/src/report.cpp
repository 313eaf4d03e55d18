#include "hce/report.hpp"

#include <cmath>
#include <limits>

#include "hce/error.hpp"

namespace hce {

nlohmann::json json_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

double real_from_json(const nlohmann::json& value) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    const auto s = value.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw InputError("expected a number or \"inf\"/\"nan\" in JSON");
}

nlohmann::json estimate_to_json(const Estimate& e) {
  return {{"est", json_real(e.est)}, {"lo", json_real(e.lo)}, {"hi", json_real(e.hi)},
          {"degenerate", e.degenerate}};
}

nlohmann::json stats_to_json(const WinStats& s) {
  nlohmann::json doc;
  doc["counts"] = {{"wins", s.counts.wins},
                   {"losses", s.counts.losses},
                   {"ties", s.counts.ties},
                   {"n_active", s.counts.n_active},
                   {"n_control", s.counts.n_control}};
  doc["theta"] = estimate_to_json(s.theta);
  doc["win_odds"] = estimate_to_json(s.win_odds);
  doc["win_ratio"] = estimate_to_json(s.win_ratio);
  doc["net_benefit"] = estimate_to_json(s.net_benefit);
  doc["alpha"] = s.alpha;
  doc["ci_method"] = std::string(to_string(s.ci_method));
  if (s.ci_method == CiMethod::Bootstrap) doc["bootstrap_reps"] = s.bootstrap_reps;
  doc["warnings"] = s.warnings;
  return doc;
}

nlohmann::json cumulative_row_to_json(const CumulativeRow& row) {
  auto doc = stats_to_json(row.stats);
  doc["depth"] = row.depth;
  doc["included_components"] = row.included_components;
  doc["win_pct_active"] = row.win_pct_active;
  doc["win_pct_control"] = row.win_pct_control;
  doc["tie_pct"] = row.tie_pct;
  return doc;
}

nlohmann::json analysis_document(const WinStats& overall, std::span<const CumulativeRow> cumulative) {
  auto doc = stats_to_json(overall);
  doc["cumulative"] = nlohmann::json::array();
  for (const auto& row : cumulative) doc["cumulative"].push_back(cumulative_row_to_json(row));
  return doc;
}

}  // namespace hce
