#include <algorithm>
#include <cmath>

#include "csv.hpp"
#include "hce/design.hpp"
#include "hce/error.hpp"

namespace hce::design {
namespace {

double cross(const PlanePoint& o, const PlanePoint& a, const PlanePoint& b) {
  return (a.hr - o.hr) * (b.delta - o.delta) - (a.delta - o.delta) * (b.hr - o.hr);
}

bool on_segment(const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
  return std::min(p.hr, r.hr) <= q.hr && q.hr <= std::max(p.hr, r.hr) && std::min(p.delta, r.delta) <= q.delta &&
         q.delta <= std::max(p.delta, r.delta);
}

int sign(double x) { return (x > 0.0) - (x < 0.0); }

bool segments_intersect(const PlanePoint& p1, const PlanePoint& p2, const PlanePoint& q1, const PlanePoint& q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 != d2 && d3 != d4 && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  if (d4 == 0 && on_segment(p1, q2, p2)) return true;
  return false;
}

}  // namespace

std::vector<PlanePoint> convex_hull(std::vector<PlanePoint> points) {
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) {
    return a.hr != b.hr ? a.hr < b.hr : a.delta < b.delta;
  });
  points.erase(std::unique(points.begin(), points.end(),
                           [](const auto& a, const auto& b) { return a.hr == b.hr && a.delta == b.delta; }),
               points.end());
  if (points.size() < 3) return points;

  std::vector<PlanePoint> hull(2 * points.size());
  std::size_t k = 0;
  for (const auto& p : points) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0.0) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool is_simple_polygon(const std::vector<PlanePoint>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a1 = polygon[i];
    const auto& a2 = polygon[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a1, a2, polygon[j], polygon[(j + 1) % n])) return false;
    }
  }
  return true;
}

FeasibilityOverlay feasibility_overlay(std::vector<OverlayPoint> points, bool hull,
                                       std::optional<std::vector<PlanePoint>> polygon) {
  for (const auto& p : points) {
    if (!std::isfinite(p.hr) || !std::isfinite(p.delta)) throw InputError("overlay points must be finite");
  }
  FeasibilityOverlay overlay;
  if (polygon) {
    for (const auto& p : *polygon) {
      if (!std::isfinite(p.hr) || !std::isfinite(p.delta)) throw InputError("overlay polygon must be finite");
    }
    if (!is_simple_polygon(*polygon)) throw InputError("overlay polygon is self-intersecting or has fewer than 3 vertices");
    overlay.polygon = std::move(*polygon);
  } else if (hull) {
    std::vector<PlanePoint> plane;
    for (const auto& p : points) plane.push_back({p.hr, p.delta});
    auto h = convex_hull(std::move(plane));
    if (h.size() >= 3) overlay.polygon = std::move(h);
  }
  overlay.points = std::move(points);
  return overlay;
}

std::vector<OverlayPoint> parse_overlay_csv(std::istream& csv) {
  std::string line;
  if (!detail::read_line(csv, line, true)) return {};
  const auto header = detail::split_csv_line(line);
  auto find = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto col_hr = find("HR");
  const auto col_delta = find("DELTA");
  const auto col_label = find("LABEL");
  if (!col_hr) throw InputError("line 1: missing column HR");
  if (!col_delta) throw InputError("line 1: missing column DELTA");

  std::vector<OverlayPoint> points;
  std::size_t line_no = 1;
  while (detail::read_line(csv, line, false)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    const auto need = std::max(*col_hr, *col_delta) + 1;
    if (fields.size() < need) throw InputError("line " + std::to_string(line_no) + ": too few fields");
    const auto hr = detail::parse_double(fields[*col_hr]);
    const auto delta = detail::parse_double(fields[*col_delta]);
    if (!hr || !delta) throw InputError("line " + std::to_string(line_no) + ": unparseable number");
    OverlayPoint p{*hr, *delta, {}};
    if (col_label && *col_label < fields.size()) p.label = fields[*col_label];
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace hce::design
