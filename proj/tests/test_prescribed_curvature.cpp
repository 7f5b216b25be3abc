#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "largesol/prescribed_curvature.hpp"

using namespace largesol;

namespace {

const double kPi = std::numbers::pi;
const double kLambdaSquare = 2.0 + std::sqrt(kPi);

// Independent oracle: minimum of Per(F) - lambda |F| over every subset F of a
// small raster domain, by enumeration; also the union of all minimizers.
struct Enumerated {
  double energy;
  Mask union_of_minimizers;
};

Enumerated enumerate(const RasterDomain& r, double lambda) {
  std::vector<std::size_t> cells;
  for (std::size_t k = 0; k < r.mask().cells.size(); ++k) {
    if (r.mask().cells[k]) cells.push_back(k);
  }
  const std::size_t n = cells.size();
  std::vector<double> energies(std::size_t{1} << n);
  double best = std::numeric_limits<double>::infinity();
  Mask m(r.geom());
  for (std::size_t bits = 0; bits < energies.size(); ++bits) {
    std::fill(m.cells.begin(), m.cells.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (bits >> i & 1u) m.cells[cells[i]] = 1;
    }
    energies[bits] = discrete_energy(m, lambda);
    best = std::min(best, energies[bits]);
  }
  Mask uni(r.geom());
  const double tol = 1e-9 * std::max(1.0, std::abs(best));
  for (std::size_t bits = 0; bits < energies.size(); ++bits) {
    if (energies[bits] > best + tol) continue;
    for (std::size_t i = 0; i < n; ++i) {
      if (bits >> i & 1u) uni.cells[cells[i]] = 1;
    }
  }
  return {best, uni};
}

}  // namespace

TEST(CheegerAnalytic, UnitSquare) {
  const CheegerResult k = cheeger(Domain(square(1.0)));
  EXPECT_NEAR(k.lambda_K, kLambdaSquare, 1e-8);
  // Smaller root of (1 - 2r)^2 = pi r^2.
  EXPECT_NEAR(1.0 / k.lambda_K, (2.0 - std::sqrt(kPi)) / (4.0 - kPi), 1e-10);
  EXPECT_NEAR(k.ratio_check, k.lambda_K, 1e-8);
  EXPECT_NEAR(k.cheeger_set.energy, 0.0, 1e-9);
}

TEST(CheegerAnalytic, ScalesInverselyWithLength) {
  EXPECT_NEAR(cheeger(Domain(square(2.0))).lambda_K, kLambdaSquare / 2.0, 1e-8);
  EXPECT_NEAR(cheeger(Domain(square(2.0))).lambda_K, 1.886227, 1e-6);
}

TEST(CheegerAnalytic, Disk) {
  const CheegerResult k = cheeger(Domain(DiskDomain({0, 0}, 1.0)));
  EXPECT_DOUBLE_EQ(k.lambda_K, 2.0);
  EXPECT_NEAR(k.cheeger_set.area, kPi, 1e-14);
  EXPECT_DOUBLE_EQ(cheeger(Domain(DiskDomain({0, 0}, 0.5))).lambda_K, 4.0);
}

TEST(CheegerAnalytic, CertificateForPolygons) {
  for (const ConvexPolygon& poly :
       {ConvexPolygon({{0, 0}, {1, 0}, {0, 1}}), regular_polygon(6, {0, 0}, 1.0), regular_polygon(5, {1, 2}, 0.3)}) {
    const CheegerResult k = cheeger(Domain(poly));
    // |poly eroded by r*| = pi r*^2 is the defining equation.
    const double r = 1.0 / k.lambda_K;
    EXPECT_NEAR(erode(poly, r).area(), kPi * r * r, 1e-9 * poly.area());
    EXPECT_LT(std::abs(k.ratio_check - k.lambda_K), 1e-8 * k.lambda_K);
  }
}

TEST(SolveConvex, DiskFromFinePolygon) {
  const Domain disk = regular_polygon(720, {0, 0}, 1.0);
  const LevelSet s = solve_plambda_convex(disk, 3.0);
  EXPECT_NEAR(s.energy, -kPi, 1e-3 * kPi);
  EXPECT_NEAR(s.area, kPi, 1e-3 * kPi);
}

TEST(SolveConvex, SquareBelowAndAbove) {
  const Domain sq = square(1.0);
  const LevelSet below = solve_plambda_convex(sq, 1.0);
  EXPECT_TRUE(below.empty());
  EXPECT_EQ(below.energy, 0.0);
  const LevelSet four = solve_plambda_convex(sq, 4.0);
  const double per = 2.0 + kPi / 2.0, area = 1.0 - (4.0 - kPi) / 16.0;
  EXPECT_NEAR(four.perimeter, per, 1e-12);
  EXPECT_NEAR(four.area, area, 1e-12);
  EXPECT_NEAR(four.energy, per - 4.0 * area, 1e-12);
  EXPECT_NEAR(four.energy, -0.214602, 1e-6);
  ASSERT_TRUE(four.shape.has_value());
  EXPECT_DOUBLE_EQ(four.shape->radius(), 0.25);
  EXPECT_THROW(solve_plambda_convex(sq, 0.0), InvalidInputError);
}

TEST(SolveConvex, EnergyNeverPositive) {
  const Domain tri = ConvexPolygon({{0, 0}, {2, 0}, {0.5, 1.5}});
  for (double lambda = 0.5; lambda < 40.0; lambda *= 1.3) EXPECT_LE(solve_plambda_convex(tri, lambda).energy, 1e-12);
}

TEST(SolveConvex, DiskCalibrable) {
  const Domain disk = DiskDomain({0, 0}, 1.5);
  for (double lambda = 0.1; lambda < 10.0; lambda *= 1.17) {
    const LevelSet s = solve_plambda_convex(disk, lambda);
    if (lambda < 2.0 / 1.5) {
      EXPECT_TRUE(s.empty()) << lambda;
    } else {
      EXPECT_NEAR(s.area, area(disk), 1e-12) << lambda;
    }
  }
}

TEST(Mincut, MatchesEnumerationOnTinyRasters) {
  // 3x4 cell rectangle and an L-shape: 12 and 11 cells.
  const GridGeometry g{4, 5, 0.25, {0, 0}};
  std::vector<Mask> domains;
  {
    Mask m(g);
    for (int j = 1; j < 5; ++j)
      for (int i = 0; i < 3; ++i) m.cells[g.index(i, j)] = 1;
    domains.push_back(m);
    Mask l(g);
    for (int j = 0; j < 5; ++j) l.cells[g.index(0, j)] = 1;
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 4; ++i) l.cells[g.index(i, j)] = 1;
    for (int j = 2; j < 4; ++j) l.cells[g.index(1, j)] = 1;
    domains.push_back(l);
  }
  for (const Mask& dm : domains) {
    const RasterDomain r(dm);
    for (double lambda : {2.0, 6.0, 9.0, 11.0, 12.0, 14.0, 20.0, 40.0}) {
      const LevelSet s = solve_plambda_mincut(r, lambda);
      const Enumerated e = enumerate(r, lambda);
      EXPECT_NEAR(s.energy, e.energy, 1e-7) << lambda;
      EXPECT_EQ(s.mask->cells, e.union_of_minimizers.cells) << lambda;
    }
  }
}

TEST(Mincut, BeatsRandomSubsets) {
  const RasterDomain r = rasterize(ConvexPolygon({{0, 0}, {1, 0}, {0.3, 0.8}}), 1.0 / 32);
  std::mt19937 rng(2024);
  for (double lambda : {6.0, 12.0}) {
    const LevelSet s = solve_plambda_mincut(r, lambda);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      Mask f(r.geom());
      // Mix of noisy masks and discs, both clipped to the domain.
      const double cx = u(rng), cy = u(rng) * 0.8, rad = u(rng) * 0.5;
      const bool noisy = trial % 2 == 0;
      for (std::size_t k = 0; k < f.cells.size(); ++k) {
        if (!r.mask().cells[k]) continue;
        const Point c = r.geom().center(k);
        f.cells[k] = noisy ? coin(rng) : std::hypot(c.x - cx, c.y - cy) <= rad;
      }
      EXPECT_LE(s.energy, discrete_energy(f, lambda) + 1e-9);
    }
  }
}

TEST(Mincut, DiskEmptyBelowFullAbove) {
  const RasterDomain disk = rasterize(DiskDomain({0, 0}, 1.0), 1.0 / 128);
  EXPECT_TRUE(solve_plambda_mincut(disk, 1.5).empty());
  const LevelSet s = solve_plambda_mincut(disk, 3.0);
  EXPECT_LE(s.mask->symmetric_difference_area(disk.mask()), 0.02 * kPi);
}

TEST(Mincut, SquareAgreesWithAnalytic) {
  const Domain sq = square(1.0);
  const RasterDomain r = rasterize(sq, 1.0 / 128);
  for (double lambda : {4.0, 6.0, 10.0}) {
    const LevelSet s = solve_plambda_mincut(r, lambda);
    const LevelSet a = solve_plambda_convex(sq, lambda);
    EXPECT_NEAR(s.area, a.area, 0.02 * a.area) << lambda;
    Mask am(r.geom());
    for (std::size_t k = 0; k < am.cells.size(); ++k) am.cells[k] = a.shape->contains(r.geom().center(k));
    EXPECT_LE(s.mask->symmetric_difference_area(am), 0.03) << lambda;
  }
}

TEST(Mincut, SweepIsNestedAndMatchesColdSolves) {
  const RasterDomain r = rasterize(ConvexPolygon({{0, 0}, {1, 0}, {1.2, 0.7}, {0.1, 0.9}}), 1.0 / 48);
  MincutSweep sweep(r);
  std::optional<Mask> prev;
  for (double lambda = 2.0; lambda < 40.0; lambda *= 1.25) {
    const LevelSet warm = sweep.advance(lambda);
    const LevelSet cold = solve_plambda_mincut(r, lambda);
    EXPECT_EQ(warm.mask->cells, cold.mask->cells) << lambda;
    if (prev) EXPECT_TRUE(prev->subset_of(*warm.mask)) << lambda;
    prev = warm.mask;
  }
  EXPECT_THROW(sweep.advance(1.0), InvalidInputError);
}

TEST(CheegerRaster, SquareWithinTwoPercent) {
  const CheegerResult k = cheeger(rasterize(square(1.0), 1.0 / 128));
  EXPECT_NEAR(k.lambda_K, kLambdaSquare, 0.02 * kLambdaSquare);
  EXPECT_NEAR(k.ratio_check, k.lambda_K, 1e-12);
  EXPECT_FALSE(k.cheeger_set.empty());
}

TEST(CheegerRaster, IsTheTransition) {
  const RasterDomain r = rasterize(DiskDomain({0, 0}, 1.0), 1.0 / 64);
  const CheegerResult k = cheeger(r);
  EXPECT_NEAR(k.lambda_K, 2.0, 0.04);
  EXPECT_TRUE(solve_plambda_mincut(r, k.lambda_K * (1.0 - 1e-6)).empty());
  EXPECT_FALSE(solve_plambda_mincut(r, k.lambda_K * (1.0 + 1e-6)).empty());
}
