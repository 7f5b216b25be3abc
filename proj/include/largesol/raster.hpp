#pragma once

// Uniform-grid discretization of planar domains.

#include <cmath>
#include <cstdint>
#include <queue>
#include <vector>

#include "largesol/errors.hpp"
#include "largesol/geometry.hpp"

namespace largesol {

/// Cell (i, j) covers [origin + (i h, j h), origin + ((i+1) h, (j+1) h)];
/// storage is row-major with j as the row index.
struct GridGeometry {
  int nx = 0;
  int ny = 0;
  double h = 1.0;
  Point origin;

  std::size_t cells() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  bool in_bounds(int i, int j) const { return i >= 0 && j >= 0 && i < nx && j < ny; }
  Point center(int i, int j) const { return {origin.x + (i + 0.5) * h, origin.y + (j + 0.5) * h}; }
  Point center(std::size_t k) const {
    return center(static_cast<int>(k % static_cast<std::size_t>(nx)), static_cast<int>(k / static_cast<std::size_t>(nx)));
  }
  /// Cell containing p, or (-1, -1) when outside the grid.
  std::pair<int, int> locate(Point p) const {
    const int i = static_cast<int>(std::floor((p.x - origin.x) / h));
    const int j = static_cast<int>(std::floor((p.y - origin.y) / h));
    if (!in_bounds(i, j)) return {-1, -1};
    return {i, j};
  }
  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Binary set of cells on a grid.
struct Mask {
  GridGeometry geom;
  std::vector<std::uint8_t> cells;

  Mask() = default;
  explicit Mask(GridGeometry g, std::uint8_t fill = 0) : geom(g), cells(g.cells(), fill) {}

  bool at(int i, int j) const { return geom.in_bounds(i, j) && cells[geom.index(i, j)] != 0; }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto b : cells) c += (b != 0);
    return c;
  }
  double area() const { return static_cast<double>(count()) * geom.h * geom.h; }
  bool empty() const { return count() == 0; }

  /// True when every cell of this mask is also in other.
  bool subset_of(const Mask& other) const {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (cells[k] && !other.cells[k]) return false;
    }
    return true;
  }
  /// Area of the symmetric difference.
  double symmetric_difference_area(const Mask& other) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) c += ((cells[k] != 0) != (other.cells[k] != 0));
    return static_cast<double>(c) * geom.h * geom.h;
  }
};

inline bool is_4_connected(const Mask& m) {
  const auto& g = m.geom;
  std::size_t start = m.cells.size();
  for (std::size_t k = 0; k < m.cells.size(); ++k) {
    if (m.cells[k]) {
      start = k;
      break;
    }
  }
  if (start == m.cells.size()) return false;
  std::vector<std::uint8_t> seen(m.cells.size(), 0);
  std::queue<std::size_t> q;
  q.push(start);
  seen[start] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    const std::size_t k = q.front();
    q.pop();
    ++reached;
    const int i = static_cast<int>(k % static_cast<std::size_t>(g.nx));
    const int j = static_cast<int>(k / static_cast<std::size_t>(g.nx));
    const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
    for (int d = 0; d < 4; ++d) {
      const int a = i + di[d], b = j + dj[d];
      if (!g.in_bounds(a, b)) continue;
      const std::size_t kk = g.index(a, b);
      if (m.cells[kk] && !seen[kk]) {
        seen[kk] = 1;
        q.push(kk);
      }
    }
  }
  return reached == m.count();
}

/// Discretized domain: nonempty, 4-connected mask with spacing h.
class RasterDomain {
 public:
  explicit RasterDomain(Mask mask) : mask_(std::move(mask)) {
    if (!(mask_.geom.h > 0.0) || mask_.geom.nx <= 0 || mask_.geom.ny <= 0) {
      throw InvalidResolutionError("domain_geometry", "RasterDomain", "grid must have positive size and spacing");
    }
    if (mask_.cells.size() != mask_.geom.cells()) {
      throw InvalidInputError("domain_geometry", "RasterDomain", "mask size does not match grid");
    }
    if (mask_.empty()) throw InvalidResolutionError("domain_geometry", "RasterDomain", "empty mask");
    if (!is_4_connected(mask_)) throw InvalidDomainError("domain_geometry", "RasterDomain", "mask is not 4-connected");
  }

  const Mask& mask() const { return mask_; }
  const GridGeometry& geom() const { return mask_.geom; }
  double h() const { return mask_.geom.h; }
  double area() const { return mask_.area(); }
  bool inside(int i, int j) const { return mask_.at(i, j); }

 private:
  Mask mask_;
};

namespace detail {

template <class Inside>
RasterDomain rasterize_box(double xmin, double ymin, double xmax, double ymax, double h, Inside&& inside) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw InvalidResolutionError("domain_geometry", "rasterize", "spacing must be positive");
  }
  GridGeometry g;
  g.h = h;
  g.origin = {std::floor(xmin / h + 1e-9) * h, std::floor(ymin / h + 1e-9) * h};
  g.nx = std::max(1, static_cast<int>(std::ceil((xmax - g.origin.x) / h - 1e-9)));
  g.ny = std::max(1, static_cast<int>(std::ceil((ymax - g.origin.y) / h - 1e-9)));
  Mask m(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) m.cells[g.index(i, j)] = inside(g.center(i, j)) ? 1 : 0;
  }
  if (m.empty()) {
    throw InvalidResolutionError("domain_geometry", "rasterize",
                                 "spacing " + std::to_string(h) + " is too coarse: no cell center inside");
  }
  return RasterDomain(std::move(m));
}

}  // namespace detail

/// Cell is inside iff its center lies in the (closed) polygon. The grid is
/// aligned to multiples of h.
inline RasterDomain rasterize(const ConvexPolygon& poly, double h) {
  const auto b = poly.bounding_box();
  return detail::rasterize_box(b.lo.x, b.lo.y, b.hi.x, b.hi.y, h, [&](Point p) { return poly.contains(p); });
}

inline RasterDomain rasterize(const DiskDomain& disk, double h) {
  const double r = disk.radius;
  return detail::rasterize_box(disk.center.x - r, disk.center.y - r, disk.center.x + r, disk.center.y + r, h,
                               [&](Point p) { return disk.contains(p); });
}

inline RasterDomain rasterize(const Domain& d, double h) {
  return std::visit([h](const auto& x) { return rasterize(x, h); }, d);
}

}  // namespace largesol
