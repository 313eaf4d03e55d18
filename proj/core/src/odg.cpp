#include <algorithm>
#include <cmath>

#include "hce/error.hpp"
#include "hce/win_engine.hpp"

namespace hce {

double area_above_curve(std::span<const UnitPoint> vertices) {
  double area = 0.0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const auto& p = vertices[i - 1];
    const auto& q = vertices[i];
    area += (q.u - p.u) * (1.0 - 0.5 * (p.v + q.v));
  }
  return area;
}

OdgCurve ordinal_dominance_graph(const ArmSample& sample) {
  if (sample.active.empty() || sample.control.empty()) throw DegenerateError("empty arm");
  auto active = sample.active;
  auto control = sample.control;
  std::sort(active.begin(), active.end());
  std::sort(control.begin(), control.end());
  const auto n = static_cast<double>(active.size());
  const auto m = static_cast<double>(control.size());

  OdgCurve curve;
  curve.vertices.push_back({0.0, 0.0});
  std::size_t i = 0, j = 0;
  while (i < active.size() || j < control.size()) {
    OrderKey key;
    if (i == active.size()) key = control[j];
    else if (j == control.size()) key = active[i];
    else key = std::min(active[i], control[j]);
    while (i < active.size() && active[i] == key) ++i;
    while (j < control.size() && control[j] == key) ++j;
    curve.vertices.push_back({static_cast<double>(j) / m, static_cast<double>(i) / n});
  }
  curve.area_above = area_above_curve(curve.vertices);
  return curve;
}

OdgCurve ordinal_dominance_graph(const HceDataset& dataset) {
  dataset.require_both_arms();
  return ordinal_dominance_graph(arm_sample(dataset));
}

OdgCurve ordinal_dominance_graph(const Marginals& marginals) {
  if (marginals.active.size() != marginals.control.size() || marginals.active.empty()) {
    throw InputError("marginals must cover the same non-empty set of categories");
  }
  OdgCurve curve;
  curve.vertices.push_back({0.0, 0.0});
  double u = 0.0, v = 0.0;
  for (std::size_t k = 0; k < marginals.active.size(); ++k) {
    const double pa = marginals.active[k];
    const double pc = marginals.control[k];
    if (pa < 0.0 || pc < 0.0) throw InputError("negative proportion");
    if (pa == 0.0 && pc == 0.0) continue;
    u += pc;
    v += pa;
    curve.vertices.push_back({u, v});
  }
  auto& last = curve.vertices.back();
  if (std::abs(last.u - 1.0) > 1e-9 || std::abs(last.v - 1.0) > 1e-9) {
    throw InputError("marginals are not normalized");
  }
  last = {1.0, 1.0};
  curve.area_above = area_above_curve(curve.vertices);
  return curve;
}

}  // namespace hce
