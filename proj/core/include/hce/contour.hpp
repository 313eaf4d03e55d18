#pragma once

#include <cstddef>
#include <vector>

#include "hce/svg.hpp"

namespace hce::viz {

/// Row-major scalar field; x runs along columns, y along rows.
struct ValueGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct Contour {
  std::vector<Point> points;  // grid coordinates: x = column, y = row
  bool closed = false;
};

/// Marching-squares isolines at `level`, edge crossings placed by linear
/// interpolation and segments joined into maximal polylines. Corners equal
/// to the level count as above it; saddle cells are resolved by the sign
/// of the cell average. Returns nothing for a level outside [min, max].
std::vector<Contour> extract_iso_contour(const ValueGrid& grid, double level);

}  // namespace hce::viz
