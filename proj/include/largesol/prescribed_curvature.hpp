#pragma once

// Minimizers of Per(F) - lambda |F| over F inside a domain, and the Cheeger
// constant/set.
//
// Two backends:
//  * analytic, for convex polygons and disks: the minimizer is empty below the
//    Cheeger constant and otherwise the opening of the domain by 1/lambda;
//  * min-cut, for rasters: exact minimizer of the Cauchy-Crofton discrete
//    energy, returning the largest minimizer on ties.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "largesol/cut_graph.hpp"
#include "largesol/geometry.hpp"
#include "largesol/raster.hpp"

namespace largesol {

/// A minimizer of the prescribed-curvature problem for one lambda.
struct LevelSet {
  double lambda = 0.0;
  std::optional<RoundedRegion> shape;  // analytic backend
  std::optional<Mask> mask;            // min-cut backend
  double energy = 0.0;
  double perimeter = 0.0;
  double area = 0.0;

  bool empty() const { return !(area > 0.0); }
};

struct CheegerResult {
  double lambda_K = 0.0;
  LevelSet cheeger_set;  // minimizer at lambda_K
  double ratio_check = 0.0;  // Per(K) / |K|
};

// ---------------------------------------------------------------------------
// Analytic backend

namespace detail {

inline CheegerResult cheeger_polygon(const ConvexPolygon& poly) {
  // |poly eroded by r| - pi r^2 is decreasing in r and changes sign on (0, inradius).
  double lo = 0.0;
  double hi = std::sqrt(poly.area() / std::numbers::pi);
  auto g = [&](double r) {
    const auto core = try_erode(poly, r);
    return (core ? core->area() : 0.0) - std::numbers::pi * r * r;
  };
  if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
    throw InvalidDomainError("prescribed_curvature", "cheeger", "Cheeger radius bisection does not bracket");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  // lo keeps a nonempty core.
  const double r = lo;
  RoundedRegion region = RoundedRegion::opening(poly, r);
  CheegerResult out;
  out.lambda_K = 1.0 / r;
  out.cheeger_set.lambda = out.lambda_K;
  out.cheeger_set.perimeter = region.perimeter();
  out.cheeger_set.area = region.area();
  out.cheeger_set.energy = out.cheeger_set.perimeter - out.lambda_K * out.cheeger_set.area;
  out.cheeger_set.shape = std::move(region);
  out.ratio_check = out.cheeger_set.perimeter / out.cheeger_set.area;
  return out;
}

inline CheegerResult cheeger_disk(const DiskDomain& disk) {
  CheegerResult out;
  out.lambda_K = 2.0 / disk.radius;
  out.cheeger_set.lambda = out.lambda_K;
  out.cheeger_set.perimeter = disk.perimeter();
  out.cheeger_set.area = disk.area();
  out.cheeger_set.energy = 0.0;
  out.cheeger_set.shape = RoundedRegion(disk, 0.0);
  out.ratio_check = out.cheeger_set.perimeter / out.cheeger_set.area;
  return out;
}

}  // namespace detail

/// Cheeger constant and set of a convex domain (analytic path).
inline CheegerResult cheeger(const Domain& domain) {
  if (const auto* disk = std::get_if<DiskDomain>(&domain)) return detail::cheeger_disk(*disk);
  return detail::cheeger_polygon(std::get<ConvexPolygon>(domain));
}

/// Minimizer for one lambda, given the domain's Cheeger constant.
inline LevelSet solve_plambda_convex(const Domain& domain, double lambda, const CheegerResult& k) {
  if (!(lambda > 0.0)) throw InvalidInputError("prescribed_curvature", "solve_plambda_convex", "lambda must be positive");
  LevelSet out;
  out.lambda = lambda;
  if (lambda < k.lambda_K) return out;
  if (lambda == k.lambda_K) {
    out = k.cheeger_set;
    out.energy = out.perimeter - lambda * out.area;
    return out;
  }
  RoundedRegion region = RoundedRegion::opening(domain, 1.0 / lambda);
  out.perimeter = region.perimeter();
  out.area = region.area();
  out.energy = out.perimeter - lambda * out.area;
  out.shape = std::move(region);
  return out;
}

inline LevelSet solve_plambda_convex(const Domain& domain, double lambda) {
  return solve_plambda_convex(domain, lambda, cheeger(domain));
}

// ---------------------------------------------------------------------------
// Min-cut backend

namespace detail {

inline LevelSet level_from_mask(Mask mask, double lambda) {
  LevelSet out;
  out.lambda = lambda;
  out.perimeter = crofton_perimeter(mask);
  out.area = mask.area();
  out.energy = out.perimeter - lambda * out.area;
  out.mask = std::move(mask);
  return out;
}

}  // namespace detail

/// Cold-start discrete minimizer for one lambda (largest minimizer on ties).
inline LevelSet solve_plambda_mincut(const CutGraph& graph, double lambda) {
  if (!(lambda > 0.0)) throw InvalidInputError("prescribed_curvature", "solve_plambda_mincut", "lambda must be positive");
  auto solver = graph.make_solver();
  solver.add_source_capacity(graph.source_capacity(lambda));
  solver.solve();
  return detail::level_from_mask(graph.extract(solver), lambda);
}

inline LevelSet solve_plambda_mincut(const RasterDomain& raster, double lambda) {
  return solve_plambda_mincut(CutGraph(raster), lambda);
}

/// Increasing-lambda sweep that keeps the preflow between solves.
class MincutSweep {
 public:
  explicit MincutSweep(const RasterDomain& raster) : graph_(raster), solver_(graph_.make_solver()) {}

  const CutGraph& graph() const { return graph_; }

  LevelSet advance(double lambda) {
    if (!(lambda > 0.0) || lambda < last_lambda_) {
      throw InvalidInputError("prescribed_curvature", "MincutSweep",
                              "lambda must be positive and non-decreasing across the sweep");
    }
    const CutGraph::Cap cap = graph_.source_capacity(lambda);
    solver_.add_source_capacity(cap - applied_);
    applied_ = cap;
    last_lambda_ = lambda;
    solver_.solve();
    return detail::level_from_mask(graph_.extract(solver_), lambda);
  }

 private:
  CutGraph graph_;
  CutGraph::Solver solver_;
  CutGraph::Cap applied_ = 0;
  double last_lambda_ = 0.0;
};

/// Cheeger constant of a raster by ratio iteration: starting from
/// Per(domain)/|domain|, replace lambda by Per(E)/|E| for the minimizer E at
/// lambda until the minimal energy is zero. The ratios decrease strictly and
/// stop at the smallest lambda with a nonempty minimizer.
inline CheegerResult cheeger(const RasterDomain& raster, int max_iterations = 50) {
  const CutGraph graph(raster);
  LevelSet best = detail::level_from_mask(raster.mask(), 0.0);
  double lambda = best.perimeter / best.area;
  for (int it = 0;; ++it) {
    if (it >= max_iterations) {
      throw SolverFailureError("prescribed_curvature", "cheeger", "ratio iteration did not settle");
    }
    LevelSet s = solve_plambda_mincut(graph, lambda);
    if (s.empty()) break;
    const double ratio = s.perimeter / s.area;
    best = std::move(s);
    if (!(ratio < lambda * (1.0 - 1e-12))) break;
    lambda = ratio;
  }
  CheegerResult out;
  out.lambda_K = best.perimeter / best.area;
  best.lambda = out.lambda_K;
  best.energy = 0.0;
  out.ratio_check = out.lambda_K;
  out.cheeger_set = std::move(best);
  return out;
}

}  // namespace largesol
