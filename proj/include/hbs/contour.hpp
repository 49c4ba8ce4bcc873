#pragma once

#include <cstdint>
#include <vector>

#include "hbs/error.hpp"

namespace hbs {

enum class Orientation { Clockwise, CounterClockwise };

/// Closed polygon of boundary points, in plane coordinates (y up).
/// The closing edge from back() to front() is implicit.
struct Contour {
  std::vector<Complex> points;
  Orientation orientation = Orientation::Clockwise;

  std::size_t size() const { return points.size(); }
};

/// Row-major binary raster; nonzero pixels are foreground.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  bool at(int row, int col) const {
    if (row < 0 || col < 0 || row >= height || col >= width) return false;
    return pixels[static_cast<std::size_t>(row) * width + col] != 0;
  }
};

/// Twice the signed area (shoelace); positive for counterclockwise polygons.
double signed_area2(const std::vector<Complex>& pts);

double perimeter(const std::vector<Complex>& pts);

/// Outer boundary of the single 4-connected foreground region, traced through
/// border pixel centers with Moore-neighbor tracing and Jacob's stopping
/// criterion. Pixel (row, col) sits at plane point (col, -row). A single-pixel
/// region yields the four corners of that pixel. Result is clockwise.
Contour trace_boundary(const Mask& mask);

/// `n` points equally spaced by arc length along the polygon; the first output
/// point is `c.points[0]`.
Contour resample_uniform(const Contour& c, std::size_t n);

/// Returns `c` or its reversal so that the orientation matches `target`.
/// `original` (optional) receives the input's orientation.
Contour orient(const Contour& c, Orientation target, Orientation* original = nullptr);

/// Orientation from the shoelace area; throws DegenerateArea when
/// |area| <= 1e-12 * bounding-box area.
Orientation detect_orientation(const std::vector<Complex>& pts);

}  // namespace hbs
