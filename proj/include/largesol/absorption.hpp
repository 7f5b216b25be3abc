#pragma once

// Keller-Osserman and (H2) checks for an absorption term f, and the
// composition u = f^{-1}(v) of a curvature field.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "largesol/curvature_field.hpp"
#include "largesol/geometry.hpp"
#include "largesol/nonlinearity.hpp"

namespace largesol {

struct KOReport {
  double p = 0.0;
  bool finite = false;
  double value = 0.0;  // integral over [1, inf) when finite
  std::vector<double> increments;           // integral over each decade [10^{k-1}, 10^k]
  std::vector<double> divergence_evidence;  // partial sums up to 10^k
};

/// Integral of F^{-1/p} over [a, b] by adaptive Gauss-Kronrod.
inline double ko_integral(const Nonlinearity& f, double p, double a, double b) {
  auto integrand = [&](double s) {
    const double F = f.primitive(s);
    if (!(F > 0.0)) {
      throw RangeError("absorption", "keller_osserman", "F must be positive on [1, inf)");
    }
    return std::pow(F, -1.0 / p);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-12);
}

/// Decade-by-decade test of int_1^inf F(s)^{-1/p} ds < inf.
inline KOReport keller_osserman(const Nonlinearity& f, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw ParameterRangeError("absorption", "keller_osserman", "p must exceed 1");
  }
  if (const auto* t = std::get_if<Tabulated>(&f.kind())) {
    if (t->s.back() < 1e8) {
      throw RangeError("absorption", "keller_osserman", "table must extend to s = 1e8 for the decade test");
    }
  }
  KOReport out;
  out.p = p;
  double sum = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double inc = ko_integral(f, p, std::pow(10.0, k - 1), std::pow(10.0, k));
    out.increments.push_back(inc);
    sum += inc;
    out.divergence_evidence.push_back(sum);
  }
  const auto& I = out.increments;
  auto ratio = [&](std::size_t k) { return I[k - 1] > 0.0 ? I[k] / I[k - 1] : 0.0; };
  bool decays = true;
  for (std::size_t k = I.size() - 3; k < I.size(); ++k) decays = decays && ratio(k) < 0.9;
  out.finite = decays;
  if (decays) {
    const double r = ratio(I.size() - 1);
    out.value = sum + I.back() * r / (1.0 - r);
  }
  return out;
}

struct H2Report {
  double lipschitz = 0.0;
  bool pass = false;
};

/// Largest difference quotient of f^{-1} on a 10^4-point grid of [a, b].
inline H2Report check_h2(const Nonlinearity& f, double a, double b) {
  if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) {
    throw InvalidInputError("absorption", "check_h2", "need 0 < a < b");
  }
  if (!f.in_range(a) || !f.in_range(b)) {
    throw RangeError("absorption", "check_h2", "interval not inside the range of f");
  }
  constexpr int kPoints = 10000;
  H2Report out;
  double prev_t = a, prev_s = f.inverse(a);
  for (int i = 1; i < kPoints; ++i) {
    const double t = i == kPoints - 1 ? b : a + (b - a) * i / (kPoints - 1);
    const double s = f.inverse(t);
    if (!(s > prev_s)) {
      throw InvalidNonlinearityError("absorption", "check_h2", "f^{-1} is not strictly increasing near t = " + std::to_string(t));
    }
    out.lipschitz = std::max(out.lipschitz, (s - prev_s) / (t - prev_t));
    prev_t = t;
    prev_s = s;
  }
  out.pass = std::isfinite(out.lipschitz);
  return out;
}

/// A scalar field on the raster of a curvature field. Outside cells hold NaN;
/// cells not covered by the level family hold +inf.
struct ScalarField {
  GridGeometry geom;
  std::vector<std::uint8_t> inside;
  std::vector<double> values;
  double coverage = 0.0;
  double lambda_max = 0.0;

  double value_at(Point p) const {
    const auto [i, j] = geom.locate(p);
    if (i < 0) return std::numeric_limits<double>::quiet_NaN();
    return values[geom.index(i, j)];
  }
};

/// u = f^{-1}(v) cell by cell.
inline ScalarField large_solution(const CurvatureField& field, const Nonlinearity& f) {
  const double lo = field.min_v(), hi = field.max_finite_v();
  if (std::isfinite(lo) && std::isfinite(hi) && hi > lo && lo > 0.0 && f.in_range(lo) && f.in_range(hi)) {
    if (!check_h2(f, lo, hi).pass) {
      throw CompositionError("absorption", "large_solution", "f^{-1} is not Lipschitz on the field range");
    }
  }
  ScalarField u;
  u.geom = field.geom;
  u.inside = field.inside;
  u.coverage = field.coverage;
  u.lambda_max = field.lambda_max;
  u.values.assign(field.v.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < field.v.size(); ++k) {
    if (!field.inside[k]) continue;
    const double v = field.v[k];
    if (std::isinf(v) && v > 0.0) {
      u.values[k] = v;
      continue;
    }
    if (!f.in_range(v)) {
      const auto i = k % static_cast<std::size_t>(field.geom.nx), j = k / static_cast<std::size_t>(field.geom.nx);
      throw CompositionError("absorption", "large_solution",
                             "v = " + std::to_string(v) + " at cell (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") is outside the range of " + f.name());
    }
    u.values[k] = f.inverse(v);
  }
  return u;
}

/// N / R_circ with N = 2: the large solution on the circumscribed disk.
inline double ball_lower_bound(const Domain& domain) { return 2.0 / circumradius(domain); }

}  // namespace largesol
