#include "hce/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <unordered_map>

#include "hce/error.hpp"

namespace hce::viz {
namespace {

// Edge ids: horizontal edge from (r,c) to (r,c+1) -> 2*(r*cols+c);
// vertical edge from (r,c) to (r+1,c) -> 2*(r*cols+c)+1.
struct Segment {
  std::size_t a, b;  // edge ids
};

class Tracer {
 public:
  Tracer(const ValueGrid& grid, double level) : g_(grid), level_(level) {}

  std::size_t h_edge(std::size_t r, std::size_t c) const { return 2 * (r * g_.cols + c); }
  std::size_t v_edge(std::size_t r, std::size_t c) const { return 2 * (r * g_.cols + c) + 1; }

  Point crossing(std::size_t edge) const {
    const std::size_t cell = edge / 2;
    const std::size_t r = cell / g_.cols;
    const std::size_t c = cell % g_.cols;
    const double v0 = g_(r, c);
    const double v1 = edge % 2 == 0 ? g_(r, c + 1) : g_(r + 1, c);
    const double t = v1 == v0 ? 0.5 : std::clamp((level_ - v0) / (v1 - v0), 0.0, 1.0);
    return edge % 2 == 0 ? Point{static_cast<double>(c) + t, static_cast<double>(r)}
                         : Point{static_cast<double>(c), static_cast<double>(r) + t};
  }

  std::vector<Segment> segments() const {
    std::vector<Segment> out;
    for (std::size_t r = 0; r + 1 < g_.rows; ++r) {
      for (std::size_t c = 0; c + 1 < g_.cols; ++c) cell_segments(r, c, out);
    }
    return out;
  }

 private:
  void cell_segments(std::size_t r, std::size_t c, std::vector<Segment>& out) const {
    // Corners counter-clockwise from (r,c): 0=(r,c) 1=(r,c+1) 2=(r+1,c+1) 3=(r+1,c).
    const std::array<double, 4> v{g_(r, c), g_(r, c + 1), g_(r + 1, c + 1), g_(r + 1, c)};
    std::array<bool, 4> above{};
    for (int i = 0; i < 4; ++i) above[static_cast<std::size_t>(i)] = v[static_cast<std::size_t>(i)] >= level_;
    // Edge i joins corner i and corner i+1.
    const std::array<std::size_t, 4> edges{h_edge(r, c), v_edge(r, c + 1), h_edge(r + 1, c), v_edge(r, c)};
    std::array<bool, 4> crossed{};
    int n_crossed = 0;
    for (std::size_t i = 0; i < 4; ++i) {
      crossed[i] = above[i] != above[(i + 1) % 4];
      n_crossed += crossed[i];
    }
    if (n_crossed == 2) {
      std::size_t first = 4, second = 4;
      for (std::size_t i = 0; i < 4; ++i) {
        if (!crossed[i]) continue;
        (first == 4 ? first : second) = i;
      }
      out.push_back({edges[first], edges[second]});
    } else if (n_crossed == 4) {
      const bool center_above = (v[0] + v[1] + v[2] + v[3]) / 4.0 >= level_;
      // Cut off the corners on the opposite side of the center. Corner i
      // touches edges i-1 and i.
      for (std::size_t i = 0; i < 4; ++i) {
        if (above[i] != center_above) out.push_back({edges[(i + 3) % 4], edges[i]});
      }
    }
  }

  const ValueGrid& g_;
  double level_;
};

}  // namespace

std::vector<Contour> extract_iso_contour(const ValueGrid& grid, double level) {
  if (grid.rows < 2 || grid.cols < 2 || grid.values.size() != grid.rows * grid.cols) {
    throw InputError("contour grid must be at least 2x2");
  }
  for (double v : grid.values) {
    if (!std::isfinite(v)) throw InputError("contour grid values must be finite");
  }
  const auto [mn, mx] = std::minmax_element(grid.values.begin(), grid.values.end());
  if (!std::isfinite(level) || level < *mn || level > *mx) return {};

  Tracer tracer(grid, level);
  const auto segments = tracer.segments();

  std::unordered_map<std::size_t, std::vector<std::size_t>> by_edge;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    by_edge[segments[i].a].push_back(i);
    by_edge[segments[i].b].push_back(i);
  }
  std::vector<bool> used(segments.size(), false);

  auto walk = [&](std::size_t start_segment, std::size_t start_edge) {
    Contour contour;
    contour.points.push_back(tracer.crossing(start_edge));
    std::size_t seg = start_segment;
    std::size_t edge = start_edge;
    while (true) {
      used[seg] = true;
      const std::size_t next_edge = segments[seg].a == edge ? segments[seg].b : segments[seg].a;
      contour.points.push_back(tracer.crossing(next_edge));
      if (next_edge == start_edge) {
        contour.closed = true;
        break;
      }
      std::size_t next_seg = segments.size();
      for (std::size_t s : by_edge[next_edge]) {
        if (!used[s]) next_seg = s;
      }
      if (next_seg == segments.size()) break;
      seg = next_seg;
      edge = next_edge;
    }
    return contour;
  };

  std::vector<Contour> out;
  // Open polylines start at edges touched by a single segment (grid boundary).
  std::vector<std::size_t> edge_order;
  for (const auto& [edge, segs] : by_edge) edge_order.push_back(edge);
  std::sort(edge_order.begin(), edge_order.end());
  for (std::size_t edge : edge_order) {
    const auto& segs = by_edge[edge];
    if (segs.size() == 1 && !used[segs[0]]) out.push_back(walk(segs[0], edge));
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!used[i]) out.push_back(walk(i, segments[i].a));
  }
  return out;
}

}  // namespace hce::viz
