#pragma once

#include <span>

#include <nlohmann/json.hpp>

#include "hce/win_engine.hpp"

namespace hce {

/// Finite doubles as JSON numbers; +inf / -inf / nan as the strings
/// "inf" / "-inf" / "nan".
nlohmann::json json_real(double value);
double real_from_json(const nlohmann::json& value);

nlohmann::json estimate_to_json(const Estimate& estimate);
nlohmann::json stats_to_json(const WinStats& stats);
nlohmann::json cumulative_row_to_json(const CumulativeRow& row);

/// The stats document written by `hcevis summarize`.
nlohmann::json analysis_document(const WinStats& overall, std::span<const CumulativeRow> cumulative);

}  // namespace hce
