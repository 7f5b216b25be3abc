#pragma once

// Variational mean curvature H(x) = -inf{lambda : x in Omega_lambda} assembled
// from a family of prescribed-curvature minimizers, and the large solution
// v = -H of div(Dv/|Dv|) = v.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "largesol/parallel.hpp"
#include "largesol/prescribed_curvature.hpp"

namespace largesol {

enum class Backend { analytic, mincut };

inline const char* to_string(Backend b) { return b == Backend::analytic ? "analytic" : "mincut"; }

/// Strictly increasing list of positive curvature parameters.
class LambdaGrid {
 public:
  explicit LambdaGrid(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw InvalidInputError("curvature_field", "LambdaGrid", "empty grid");
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!(values_[i] > 0.0) || !std::isfinite(values_[i]) || (i > 0 && !(values_[i] > values_[i - 1]))) {
        throw InvalidInputError("curvature_field", "LambdaGrid", "values must be positive and strictly increasing");
      }
    }
  }

  /// n points with constant ratio from first to last; both ends are exact.
  static LambdaGrid geometric(double first, double last, std::size_t n) {
    if (n < 2 || !(first > 0.0) || !(last > first)) {
      throw InvalidInputError("curvature_field", "LambdaGrid", "need 0 < first < last and at least two points");
    }
    std::vector<double> v(n);
    const double ratio = std::log(last / first) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = first * std::exp(ratio * static_cast<double>(i));
    v.front() = first;
    v.back() = last;
    return LambdaGrid(std::move(v));
  }

  /// Same grid with extra values inserted (duplicates dropped).
  LambdaGrid with(std::span<const double> extra) const {
    std::vector<double> v = values_;
    v.insert(v.end(), extra.begin(), extra.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return LambdaGrid(std::move(v));
  }

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  /// Largest ratio between consecutive values.
  double max_ratio() const {
    double r = 1.0;
    for (std::size_t i = 1; i < values_.size(); ++i) r = std::max(r, values_[i] / values_[i - 1]);
    return r;
  }

 private:
  std::vector<double> values_;
};

/// Nested minimizers, one per grid value.
struct LevelFamily {
  LambdaGrid grid;
  std::vector<LevelSet> sets;
  Backend backend;
  double lambda_K;
};

/// Analytic family for a convex domain; openings nest exactly.
inline LevelFamily build_family(const Domain& domain, const LambdaGrid& grid) {
  const CheegerResult k = cheeger(domain);
  std::vector<LevelSet> sets(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { sets[i] = solve_plambda_convex(domain, grid[i], k); });
  return {grid, std::move(sets), Backend::analytic, k.lambda_K};
}

/// Min-cut family on a raster via a warm-started sweep, with nesting
/// enforced by intersecting each set with its successor.
/// Given the raster Cheeger result, a level at or above lambda_K that comes
/// back empty (capacities are quantized, so the tie at lambda_K can fall
/// either way) is replaced by the Cheeger set.
inline LevelFamily build_family(const RasterDomain& raster, const LambdaGrid& grid,
                                const std::optional<CheegerResult>& k = std::nullopt) {
  MincutSweep sweep(raster);
  std::vector<LevelSet> sets;
  sets.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      sets.push_back(sweep.advance(grid[i]));
    } catch (const SolverFailureError& e) {
      throw SolverFailureError("curvature_field", "build_family",
                               std::string(e.what()) + " at lambda = " + std::to_string(grid[i]));
    }
    if (k && sets.back().empty() && grid[i] >= k->lambda_K) {
      sets.back() = detail::level_from_mask(*k->cheeger_set.mask, grid[i]);
    }
  }
  for (std::size_t i = sets.size() - 1; i-- > 0;) {
    Mask& m = *sets[i].mask;
    const Mask& next = *sets[i + 1].mask;
    bool changed = false;
    for (std::size_t k = 0; k < m.cells.size(); ++k) {
      if (m.cells[k] && !next.cells[k]) {
        m.cells[k] = 0;
        changed = true;
      }
    }
    if (changed) sets[i] = detail::level_from_mask(std::move(m), grid[i]);
  }
  return {grid, std::move(sets), Backend::mincut,
          k ? k->lambda_K : std::numeric_limits<double>::quiet_NaN()};
}

/// H, v = -H on a raster. Outside the domain H = v = 0; cells of the domain
/// not reached by the largest level are uncovered: H = -inf, v = +inf.
struct CurvatureField {
  GridGeometry geom;
  std::vector<std::uint8_t> inside;
  std::vector<double> H;
  std::vector<double> v;
  double coverage = 0.0;
  double lambda_max = 0.0;
  std::vector<double> level_lambdas;
  std::vector<double> level_perimeters;

  bool covered(std::size_t k) const { return inside[k] && std::isfinite(v[k]); }

  /// v at the cell containing p.
  double value_at(Point p) const {
    const auto [i, j] = geom.locate(p);
    if (i < 0) return std::numeric_limits<double>::quiet_NaN();
    return v[geom.index(i, j)];
  }

  double min_v() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (inside[k]) m = std::min(m, v[k]);
    }
    return m;
  }
  /// Largest finite value of v on the domain.
  double max_finite_v() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (covered(k)) m = std::max(m, v[k]);
    }
    return m;
  }
};

inline CurvatureField variational_mean_curvature(const LevelFamily& family, const RasterDomain& raster) {
  if (family.sets.empty()) throw InvalidInputError("curvature_field", "variational_mean_curvature", "empty family");
  const GridGeometry& g = raster.geom();
  const std::size_t levels = family.sets.size();
  for (const auto& s : family.sets) {
    if (s.mask && !(s.mask->geom == g)) {
      throw InvalidInputError("curvature_field", "variational_mean_curvature",
                              "family masks are on a different grid than the raster");
    }
  }
  auto member = [&](std::size_t level, std::size_t cell, Point c) {
    const LevelSet& s = family.sets[level];
    if (s.mask) return s.mask->cells[cell] != 0;
    return s.shape && s.shape->contains(c);
  };

  CurvatureField f;
  f.geom = g;
  f.inside = raster.mask().cells;
  f.H.assign(g.cells(), 0.0);
  f.v.assign(g.cells(), 0.0);
  f.lambda_max = family.grid.back();
  parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (!f.inside[k]) continue;
      const Point c = g.center(i, j);
      // Membership is monotone in the level: find the first level containing c.
      std::size_t lo = 0, hi = levels;
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (member(mid, k, c)) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo == levels) {
        f.H[k] = -std::numeric_limits<double>::infinity();
        f.v[k] = std::numeric_limits<double>::infinity();
      } else {
        f.H[k] = -family.grid[lo];
        f.v[k] = family.grid[lo];
      }
    }
  });
  std::size_t in = 0, cov = 0;
  for (std::size_t k = 0; k < f.v.size(); ++k) {
    in += f.inside[k] != 0;
    cov += f.covered(k);
  }
  f.coverage = static_cast<double>(cov) / static_cast<double>(in);
  for (const auto& s : family.sets) {
    f.level_lambdas.push_back(s.lambda);
    f.level_perimeters.push_back(s.perimeter);
  }
  return f;
}

struct LevelMass {
  double lambda;
  double integral;   // integral of H over the level set
  double perimeter;  // perimeter of the level set
  double rel_error;  // |integral + perimeter| / perimeter
};

struct MassReport {
  double total;  // integral of |H| over covered cells
  double perimeter;
  double rel_error;
  std::vector<LevelMass> levels;  // nonempty levels only
};

/// Checks the integral of |H| against Per(domain) and, per grid level, the
/// integral of H over the level against -Per(level).
inline MassReport mass_identities(const CurvatureField& field, double domain_perimeter, double min_coverage = 0.99) {
  if (field.coverage < min_coverage) {
    throw CoverageError("curvature_field", "mass_identities",
                        "coverage " + std::to_string(field.coverage) + " below " + std::to_string(min_coverage) +
                            "; raise lambda_max above " + std::to_string(field.lambda_max));
  }
  const double cell = field.geom.h * field.geom.h;
  std::vector<double> terms;
  terms.reserve(field.v.size());
  for (std::size_t k = 0; k < field.v.size(); ++k) {
    if (field.covered(k)) terms.push_back(std::abs(field.H[k]) * cell);
  }
  MassReport r;
  r.total = pairwise_sum(terms);
  r.perimeter = domain_perimeter;
  r.rel_error = std::abs(r.total - domain_perimeter) / domain_perimeter;
  for (std::size_t l = 0; l < field.level_lambdas.size(); ++l) {
    const double lam = field.level_lambdas[l];
    if (!(field.level_perimeters[l] > 0.0)) continue;
    terms.clear();
    for (std::size_t k = 0; k < field.v.size(); ++k) {
      if (field.covered(k) && field.v[k] <= lam) terms.push_back(field.H[k] * cell);
    }
    const double integral = pairwise_sum(terms);
    const double per = field.level_perimeters[l];
    r.levels.push_back({lam, integral, per, std::abs(integral + per) / per});
  }
  return r;
}

inline MassReport mass_identities(const CurvatureField& field, const Domain& domain, double min_coverage = 0.99) {
  return mass_identities(field, perimeter(domain), min_coverage);
}

inline MassReport mass_identities(const CurvatureField& field, const RasterDomain& raster, double min_coverage = 0.99) {
  return mass_identities(field, crofton_perimeter(raster.mask()), min_coverage);
}

/// Exact integral of |H| over a convex domain from the distribution function
/// |{v > lambda}| = |domain| - |Omega_lambda|, integrated in r = 1/lambda.
/// Until the first edge of the eroded core vanishes the deficit is exactly
/// (K - pi) r^2 with K = sum of cot(half interior angle); that stretch is
/// integrated in closed form to avoid cancellation at small r.
inline double analytic_total_curvature(const Domain& domain) {
  const CheegerResult k = cheeger(domain);
  const double full = area(domain);
  if (std::holds_alternative<DiskDomain>(domain)) return k.lambda_K * full;
  const auto& poly = std::get<ConvexPolygon>(domain);
  const std::size_t n = poly.size();
  std::vector<double> half_turn(n);
  double K = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = poly.edge((i + n - 1) % n), b = poly.edge(i);
    half_turn[i] = std::tan(0.5 * std::atan2(cross(a, b), dot(a, b)));
    K += half_turn[i];
  }
  double r_edge = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    r_edge = std::min(r_edge, norm(poly.edge(i)) / (half_turn[i] + half_turn[(i + 1) % n]));
  }
  const double r_star = 1.0 / k.lambda_K;
  const double r_split = std::min(r_edge, r_star);
  double tail = (K - std::numbers::pi) * r_split;
  if (r_split < r_star) {
    auto deficit_over_r2 = [&](double r) {
      const auto m = opening_measures(poly, r);
      return (full - m.area) / (r * r);
    };
    tail += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(deficit_over_r2, r_split, r_star, 10, 1e-12);
  }
  return k.lambda_K * full + tail;
}

/// Curvature field pipeline: Cheeger constant, geometric grid from lambda_K to
/// lambda_max, family, field. extra_levels are merged into the grid.
inline CurvatureField tv_large_solution(const Domain& domain, double lambda_max, double h,
                                        Backend backend = Backend::analytic, std::size_t points = 64,
                                        std::span<const double> extra_levels = {}) {
  const RasterDomain raster = rasterize(domain, h);
  if (backend == Backend::analytic) {
    const double lk = cheeger(domain).lambda_K;
    if (!(lambda_max > lk)) {
      throw InvalidInputError("curvature_field", "tv_large_solution", "lambda_max must exceed the Cheeger constant");
    }
    const LambdaGrid grid = LambdaGrid::geometric(lk, lambda_max, points).with(extra_levels);
    return variational_mean_curvature(build_family(domain, grid), raster);
  }
  const CheegerResult k = cheeger(raster);
  if (!(lambda_max > k.lambda_K)) {
    throw InvalidInputError("curvature_field", "tv_large_solution", "lambda_max must exceed the Cheeger constant");
  }
  const LambdaGrid grid = LambdaGrid::geometric(k.lambda_K, lambda_max, points).with(extra_levels);
  return variational_mean_curvature(build_family(raster, grid, k), raster);
}

/// Min-cut pipeline on an arbitrary raster domain.
inline CurvatureField tv_large_solution(const RasterDomain& raster, double lambda_max, std::size_t points = 64) {
  const CheegerResult k = cheeger(raster);
  if (!(lambda_max > k.lambda_K)) {
    throw InvalidInputError("curvature_field", "tv_large_solution", "lambda_max must exceed the Cheeger constant");
  }
  return variational_mean_curvature(build_family(raster, LambdaGrid::geometric(k.lambda_K, lambda_max, points), k),
                                    raster);
}

}  // namespace largesol
