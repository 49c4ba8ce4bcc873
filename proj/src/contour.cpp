#include "hbs/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace hbs {

double signed_area2(const std::vector<Complex>& pts) {
  double s = 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex& a = pts[i];
    const Complex& b = pts[(i + 1) % n];
    s += a.real() * b.imag() - b.real() * a.imag();
  }
  return s;
}

double perimeter(const std::vector<Complex>& pts) {
  double len = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) len += std::abs(pts[(i + 1) % pts.size()] - pts[i]);
  return len;
}

Orientation detect_orientation(const std::vector<Complex>& pts) {
  if (pts.size() < 3) throw Error(ErrorCode::TooFewPoints, "contour needs at least 3 points");
  double xmin = pts[0].real(), xmax = xmin, ymin = pts[0].imag(), ymax = ymin;
  for (const auto& p : pts) {
    xmin = std::min(xmin, p.real());
    xmax = std::max(xmax, p.real());
    ymin = std::min(ymin, p.imag());
    ymax = std::max(ymax, p.imag());
  }
  const double box = (xmax - xmin) * (ymax - ymin);
  const double area = 0.5 * signed_area2(pts);
  if (!(std::abs(area) > 1e-12 * box) || box == 0.0)
    throw Error(ErrorCode::DegenerateArea, "contour signed area is degenerate");
  return area > 0 ? Orientation::CounterClockwise : Orientation::Clockwise;
}

Contour orient(const Contour& c, Orientation target, Orientation* original) {
  const Orientation o = detect_orientation(c.points);
  if (original) *original = o;
  Contour out = c;
  if (o != target) std::reverse(out.points.begin(), out.points.end());
  out.orientation = target;
  return out;
}

Contour resample_uniform(const Contour& c, std::size_t n) {
  if (n < 3) throw Error(ErrorCode::TooFewPoints, "resample_uniform needs n >= 3");
  if (c.points.size() < 3) throw Error(ErrorCode::TooFewPoints, "contour needs at least 3 points");

  const std::size_t m = c.points.size();
  std::vector<double> cum(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + std::abs(c.points[(i + 1) % m] - c.points[i]);
  const double total = cum[m];
  if (!(total > 0.0)) throw Error(ErrorCode::DegenerateArea, "contour has zero length");

  Contour out;
  out.orientation = c.orientation;
  out.points.reserve(n);
  out.points.push_back(c.points[0]);
  std::size_t seg = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double s = total * static_cast<double>(k) / static_cast<double>(n);
    while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    const Complex a = c.points[seg];
    const Complex b = c.points[(seg + 1) % m];
    out.points.push_back(a + t * (b - a));
  }
  return out;
}

namespace {

Complex pixel_center(int row, int col) { return {static_cast<double>(col), -static_cast<double>(row)}; }

void check_topology(const Mask& mask, int& first_row, int& first_col) {
  const int h = mask.height, w = mask.width;
  first_row = -1;
  first_col = -1;
  std::size_t count = 0;
  for (int r = 0; r < h && first_row < 0; ++r)
    for (int c = 0; c < w; ++c)
      if (mask.at(r, c)) {
        first_row = r;
        first_col = c;
        break;
      }
  if (first_row < 0) throw Error(ErrorCode::EmptyMask, "mask has no foreground pixels");

  for (auto p : mask.pixels) count += p != 0;

  // Foreground: 4-connected flood from the first pixel.
  std::vector<std::uint8_t> seen(mask.pixels.size(), 0);
  std::queue<std::pair<int, int>> q;
  q.push({first_row, first_col});
  seen[static_cast<std::size_t>(first_row) * w + first_col] = 1;
  std::size_t reached = 0;
  constexpr std::array<int, 4> dr4{-1, 1, 0, 0}, dc4{0, 0, -1, 1};
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop();
    ++reached;
    for (int k = 0; k < 4; ++k) {
      const int rr = r + dr4[k], cc = c + dc4[k];
      if (!mask.at(rr, cc)) continue;
      auto& s = seen[static_cast<std::size_t>(rr) * w + cc];
      if (!s) {
        s = 1;
        q.push({rr, cc});
      }
    }
  }
  if (reached != count) throw Error(ErrorCode::MultipleComponents, "mask has more than one 4-connected component");

  // Background: 8-connected flood from outside on a one-pixel padded frame.
  const int ph = h + 2, pw = w + 2;
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(ph) * pw, 0);
  std::queue<std::pair<int, int>> bq;
  bq.push({0, 0});
  outside[0] = 1;
  std::size_t bg_reached = 0;
  while (!bq.empty()) {
    auto [r, c] = bq.front();
    bq.pop();
    if (r >= 1 && r <= h && c >= 1 && c <= w) ++bg_reached;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr, cc = c + dc;
        if (rr < 0 || cc < 0 || rr >= ph || cc >= pw) continue;
        if (mask.at(rr - 1, cc - 1)) continue;
        auto& o = outside[static_cast<std::size_t>(rr) * pw + cc];
        if (!o) {
          o = 1;
          bq.push({rr, cc});
        }
      }
  }
  const std::size_t background = mask.pixels.size() - count;
  if (bg_reached != background) throw Error(ErrorCode::HoleDetected, "foreground region contains a hole");
}

}  // namespace

Contour trace_boundary(const Mask& mask) {
  if (mask.width <= 0 || mask.height <= 0 ||
      mask.pixels.size() != static_cast<std::size_t>(mask.width) * mask.height)
    throw Error(ErrorCode::EmptyMask, "mask is empty");
  int sr = 0, sc = 0;
  check_topology(mask, sr, sc);

  // Moore neighborhood, clockwise on screen (rows grow downward).
  constexpr std::array<int, 8> dr{0, -1, -1, -1, 0, 1, 1, 1};
  constexpr std::array<int, 8> dc{-1, -1, 0, 1, 1, 1, 0, -1};
  auto dir_of = [&](int r0, int c0, int r1, int c1) {
    for (int k = 0; k < 8; ++k)
      if (r0 + dr[k] == r1 && c0 + dc[k] == c1) return k;
    return -1;
  };

  std::vector<std::pair<int, int>> trace;
  trace.push_back({sr, sc});
  // Start pixel is the first in raster order, so its west neighbor is background.
  int cr = sr, cc = sc;
  int br = sr, bc = sc - 1;
  const int start_back = dir_of(sr, sc, br, bc);
  const std::size_t cap = 4 * mask.pixels.size() + 8;
  for (std::size_t step = 0; step < cap; ++step) {
    const int b = dir_of(cr, cc, br, bc);
    int found = -1;
    int prev_r = br, prev_c = bc;
    for (int k = 1; k <= 8; ++k) {
      const int d = (b + k) % 8;
      const int nr = cr + dr[d], nc = cc + dc[d];
      if (mask.at(nr, nc)) {
        found = d;
        break;
      }
      prev_r = nr;
      prev_c = nc;
    }
    if (found < 0) break;  // isolated pixel
    const int nr = cr + dr[found], nc = cc + dc[found];
    br = prev_r;
    bc = prev_c;
    cr = nr;
    cc = nc;
    // Jacob's criterion: back at the start, entered the same way as initially.
    if (cr == sr && cc == sc && dir_of(cr, cc, br, bc) == start_back) break;
    trace.push_back({cr, cc});
  }

  Contour out;
  for (auto [r, c] : trace) {
    const Complex p = pixel_center(r, c);
    if (out.points.empty() || out.points.back() != p) out.points.push_back(p);
  }
  while (out.points.size() > 1 && out.points.front() == out.points.back()) out.points.pop_back();

  if (out.points.size() < 3) {
    // One- or two-pixel regions: fall back to the pixel-corner rectangle.
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : out.points) {
      xmin = std::min(xmin, p.real() - 0.5);
      xmax = std::max(xmax, p.real() + 0.5);
      ymin = std::min(ymin, p.imag() - 0.5);
      ymax = std::max(ymax, p.imag() + 0.5);
    }
    out.points = {{xmin, ymax}, {xmax, ymax}, {xmax, ymin}, {xmin, ymin}};
  }
  return orient(out, Orientation::Clockwise);
}

}  // namespace hbs
