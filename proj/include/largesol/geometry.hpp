#pragma once

// Planar convex domains: polygons and disks, inner parallel sets (erosion)
// and morphological openings with Steiner-formula measures.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "largesol/errors.hpp"

namespace largesol {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// Distance from p to the segment [a, b].
inline double segment_distance(Point p, Point a, Point b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + t * ab));
}

/// Counter-clockwise, strictly convex polygon.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Point> vertices) : v_(std::move(vertices)) { validate(); }

  std::span<const Point> vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  Point operator[](std::size_t i) const { return v_[i]; }
  Point edge(std::size_t i) const { return v_[(i + 1) % v_.size()] - v_[i]; }

  double perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += norm(edge(i));
    return s;
  }

  double area() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += cross(v_[i], v_[(i + 1) % v_.size()]);
    return 0.5 * s;
  }

  /// Closed membership test.
  bool contains(Point p) const {
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (cross(edge(i), p - v_[i]) < 0.0) return false;
    }
    return true;
  }

  /// Euclidean distance from p to the polygon (0 inside).
  double distance(Point p) const {
    if (contains(p)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v_.size(); ++i) {
      d = std::min(d, segment_distance(p, v_[i], v_[(i + 1) % v_.size()]));
    }
    return d;
  }

  struct Box {
    Point lo, hi;
  };
  Box bounding_box() const {
    Box b{v_[0], v_[0]};
    for (Point p : v_) {
      b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y)};
      b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y)};
    }
    return b;
  }

 private:
  void validate() const {
    if (v_.size() < 3) {
      throw InvalidDomainError("domain_geometry", "ConvexPolygon", "need at least 3 vertices");
    }
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (!std::isfinite(v_[i].x) || !std::isfinite(v_[i].y)) {
        throw InvalidDomainError("domain_geometry", "ConvexPolygon", "non-finite vertex");
      }
      if (v_[i] == v_[(i + 1) % v_.size()]) {
        throw InvalidDomainError("domain_geometry", "ConvexPolygon", "repeated vertex");
      }
    }
    for (std::size_t i = 0; i < v_.size(); ++i) {
      if (!(cross(edge(i), edge((i + 1) % v_.size())) > 0.0)) {
        throw InvalidDomainError("domain_geometry", "ConvexPolygon",
                                 "vertices are not in strictly convex counter-clockwise order (vertex " +
                                     std::to_string((i + 1) % v_.size()) + ")");
      }
    }
    if (!(area() > 0.0)) {
      throw InvalidDomainError("domain_geometry", "ConvexPolygon", "zero area");
    }
  }

  std::vector<Point> v_;
};

/// Regular n-gon inscribed in the circle (center, radius), first vertex on the +x axis.
inline ConvexPolygon regular_polygon(std::size_t n, Point center, double radius) {
  std::vector<Point> v(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    v[k] = {center.x + radius * std::cos(t), center.y + radius * std::sin(t)};
  }
  return ConvexPolygon(std::move(v));
}

/// Axis-aligned square [x0, x0 + side] x [y0, y0 + side].
inline ConvexPolygon square(double side, Point lower_left = {0.0, 0.0}) {
  const double x0 = lower_left.x, y0 = lower_left.y;
  return ConvexPolygon({{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}});
}

struct DiskDomain {
  Point center;
  double radius = 1.0;

  DiskDomain(Point c, double r) : center(c), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw InvalidDomainError("domain_geometry", "DiskDomain", "radius must be positive");
    }
  }

  double perimeter() const { return 2.0 * std::numbers::pi * radius; }
  double area() const { return std::numbers::pi * radius * radius; }
  bool contains(Point p) const { return norm(p - center) <= radius; }
  double distance(Point p) const { return std::max(0.0, norm(p - center) - radius); }
};

using Domain = std::variant<ConvexPolygon, DiskDomain>;

// ---------------------------------------------------------------------------
// Erosion

namespace detail {

// Keeps the part of a convex polygon on the side n.x <= c of a line.
inline std::vector<Point> clip_halfplane(const std::vector<Point>& poly, Point n, double c) {
  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point a = poly[i], b = poly[(i + 1) % m];
    const double da = dot(n, a) - c, db = dot(n, b) - c;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

// Drops near-duplicate and collinear vertices produced by clipping.
inline std::vector<Point> clean_ring(std::vector<Point> pts, double scale) {
  const double eps_len = 1e-14 * scale;
  bool changed = true;
  while (changed && pts.size() >= 3) {
    changed = false;
    for (std::size_t i = 0; i < pts.size() && pts.size() >= 3; ++i) {
      const std::size_t m = pts.size();
      const Point prev = pts[(i + m - 1) % m], cur = pts[i], next = pts[(i + 1) % m];
      const Point a = cur - prev, b = next - cur;
      if (norm(b) <= eps_len || cross(a, b) <= 1e-12 * norm(a) * norm(b)) {
        pts.erase(pts.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  return pts;
}

inline double ring_area(const std::vector<Point>& pts) {
  double s = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) s += cross(pts[i], pts[(i + 1) % pts.size()]);
  return 0.5 * s;
}

}  // namespace detail

/// Inner parallel set {x : dist(x, complement) >= r}, or nullopt when it has
/// no interior.
inline std::optional<ConvexPolygon> try_erode(const ConvexPolygon& poly, double r) {
  if (r == 0.0) return poly;
  std::vector<Point> ring(poly.vertices().begin(), poly.vertices().end());
  const auto box = poly.bounding_box();
  const double scale = std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point e = poly.edge(i);
    const double len = norm(e);
    const Point outward{e.y / len, -e.x / len};
    ring = detail::clip_halfplane(ring, outward, dot(outward, poly[i]) - r);
    if (ring.size() < 3) return std::nullopt;
  }
  ring = detail::clean_ring(std::move(ring), scale);
  if (ring.size() < 3 || !(detail::ring_area(ring) > 0.0)) return std::nullopt;
  try {
    return ConvexPolygon(std::move(ring));
  } catch (const InvalidDomainError&) {
    return std::nullopt;
  }
}

inline ConvexPolygon erode(const ConvexPolygon& poly, double r) {
  if (!(r >= 0.0)) throw InvalidInputError("domain_geometry", "erode", "radius must be non-negative");
  auto out = try_erode(poly, r);
  if (!out) {
    throw EmptyErosionError("domain_geometry", "erode",
                            "erosion radius " + std::to_string(r) + " is not below the inradius");
  }
  return *std::move(out);
}

// ---------------------------------------------------------------------------
// Measures

/// Largest inscribed-circle radius, by bisection on erosion non-emptiness.
inline double inradius(const ConvexPolygon& poly, double tol = 1e-10) {
  double lo = 0.0;
  double hi = std::sqrt(poly.area() / std::numbers::pi) * (1.0 + 1e-9);
  // Raw half-plane clipping; area tests lose the tiny cores near the inradius.
  auto feasible = [&](double r) {
    std::vector<Point> ring(poly.vertices().begin(), poly.vertices().end());
    for (std::size_t i = 0; i < poly.size() && ring.size() >= 3; ++i) {
      const Point e = poly.edge(i);
      const Point outward{e.y / norm(e), -e.x / norm(e)};
      ring = detail::clip_halfplane(ring, outward, dot(outward, poly[i]) - r);
    }
    return ring.size() >= 3;
  };
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Minimum enclosing circle radius of the vertex set (Welzl, fixed shuffle).
inline double circumradius(const ConvexPolygon& poly) {
  std::vector<Point> pts(poly.vertices().begin(), poly.vertices().end());
  std::mt19937 rng(12345u);
  std::shuffle(pts.begin(), pts.end(), rng);

  struct Circle {
    Point c;
    double r;
  };
  auto outside = [](const Circle& c, Point p) { return norm(p - c.c) > c.r * (1.0 + 1e-12) + 1e-15; };
  auto from2 = [](Point a, Point b) { return Circle{0.5 * (a + b), 0.5 * norm(a - b)}; };
  auto from3 = [&](Point a, Point b, Point c) {
    const Point ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    if (std::abs(d) < 1e-300) {
      Circle best = from2(a, b);
      for (const Circle& k : {from2(a, c), from2(b, c)}) {
        if (k.r > best.r) best = k;
      }
      return best;
    }
    const double b2 = dot(ab, ab), c2 = dot(ac, ac);
    const Point off{(ac.y * b2 - ab.y * c2) / d, (ab.x * c2 - ac.x * b2) / d};
    return Circle{a + off, norm(off)};
  };

  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!outside(c, pts[i])) continue;
    c = {pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (!outside(c, pts[j])) continue;
      c = from2(pts[i], pts[j]);
      for (std::size_t k = 0; k < j; ++k) {
        if (outside(c, pts[k])) c = from3(pts[i], pts[j], pts[k]);
      }
    }
  }
  return c.r;
}

struct PolygonMeasures {
  double perimeter;
  double area;
  double inradius;
  double circumradius;
};

inline PolygonMeasures polygon_measures(const ConvexPolygon& poly) {
  return {poly.perimeter(), poly.area(), inradius(poly), circumradius(poly)};
}

struct OpeningMeasures {
  double perimeter;
  double area;
};

/// Perimeter and area of the opening (poly eroded by r, then dilated by r).
inline OpeningMeasures opening_measures(const ConvexPolygon& poly, double r) {
  const ConvexPolygon core = erode(poly, r);
  const double per = core.perimeter();
  return {per + 2.0 * std::numbers::pi * r, core.area() + r * per + std::numbers::pi * r * r};
}

/// A disk is invariant under opening by any radius below its own.
inline OpeningMeasures opening_measures(const DiskDomain& disk, double r) {
  if (!(r >= 0.0) || !(r < disk.radius)) {
    throw EmptyErosionError("domain_geometry", "opening_measures", "radius not below the disk radius");
  }
  return {disk.perimeter(), disk.area()};
}

inline double perimeter(const Domain& d) {
  return std::visit([](const auto& x) { return x.perimeter(); }, d);
}
inline double area(const Domain& d) {
  return std::visit([](const auto& x) { return x.area(); }, d);
}
inline double inradius(const Domain& d) {
  if (const auto* disk = std::get_if<DiskDomain>(&d)) return disk->radius;
  return inradius(std::get<ConvexPolygon>(d));
}
inline double circumradius(const Domain& d) {
  if (const auto* disk = std::get_if<DiskDomain>(&d)) return disk->radius;
  return circumradius(std::get<ConvexPolygon>(d));
}
inline bool contains(const Domain& d, Point p) {
  return std::visit([p](const auto& x) { return x.contains(p); }, d);
}

// ---------------------------------------------------------------------------
// Openings

/// The opening (core dilated by radius) of a convex domain: core is the
/// domain eroded by radius. For a disk domain the core is the concentric disk.
class RoundedRegion {
 public:
  RoundedRegion(std::variant<ConvexPolygon, DiskDomain> core, double radius)
      : core_(std::move(core)), radius_(radius) {}

  /// Opening of a convex domain by radius r (0 <= r < inradius).
  static RoundedRegion opening(const Domain& domain, double r) {
    if (const auto* disk = std::get_if<DiskDomain>(&domain)) {
      if (!(r >= 0.0) || !(r < disk->radius)) {
        throw EmptyErosionError("domain_geometry", "opening", "radius not below the disk radius");
      }
      return RoundedRegion(DiskDomain(disk->center, disk->radius - r), r);
    }
    return RoundedRegion(erode(std::get<ConvexPolygon>(domain), r), r);
  }

  const std::variant<ConvexPolygon, DiskDomain>& core() const { return core_; }
  double radius() const { return radius_; }

  double perimeter() const {
    return std::visit([](const auto& c) { return c.perimeter(); }, core_) + 2.0 * std::numbers::pi * radius_;
  }
  double area() const {
    const double per = std::visit([](const auto& c) { return c.perimeter(); }, core_);
    const double a = std::visit([](const auto& c) { return c.area(); }, core_);
    return a + radius_ * per + std::numbers::pi * radius_ * radius_;
  }
  bool contains(Point p) const {
    return std::visit([&](const auto& c) { return c.distance(p); }, core_) <= radius_;
  }

 private:
  std::variant<ConvexPolygon, DiskDomain> core_;
  double radius_;
};

}  // namespace largesol
