#pragma once

// Self-check suites run by `largesol verify`. Each check records what was
// expected, what was computed, the tolerance and whether it passed.

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "largesol/absorption.hpp"
#include "largesol/curvature_field.hpp"
#include "largesol/p_radial.hpp"
#include "largesol/prescribed_curvature.hpp"

namespace largesol {

struct VerifyCheck {
  std::string name;
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  std::string mode;  // "abs", "rel", "at_least", "at_most"
  bool pass = false;
  std::string note;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return !checks.empty();
  }

  nlohmann::json to_json() const {
    auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(std::to_string(x)); };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"expected", num(c.expected)},
                     {"computed", num(c.computed)},
                     {"tolerance", num(c.tolerance)},
                     {"mode", c.mode},
                     {"pass", c.pass},
                     {"note", c.note}});
    }
    std::size_t passed = 0;
    for (const auto& c : checks) passed += c.pass;
    return {{"suite", suite}, {"pass", pass()}, {"passed", passed}, {"total", checks.size()}, {"checks", arr}};
  }
};

struct VerifyOptions {
  double h = 1.0 / 512.0;
  std::size_t grid_points = 64;
  int radial_intervals = 1000;
};

namespace detail {

inline VerifyCheck check_abs(std::string name, double expected, double computed, double tol, std::string note = {}) {
  return {std::move(name), expected, computed, tol, "abs", std::abs(computed - expected) <= tol, std::move(note)};
}
inline VerifyCheck check_rel(std::string name, double expected, double computed, double tol, std::string note = {}) {
  return {std::move(name), expected, computed, tol, "rel", std::abs(computed - expected) <= tol * std::abs(expected),
          std::move(note)};
}
inline VerifyCheck check_at_least(std::string name, double bound, double computed, std::string note = {}) {
  return {std::move(name), bound, computed, 0.0, "at_least", computed >= bound, std::move(note)};
}
inline VerifyCheck check_at_most(std::string name, double bound, double computed, std::string note = {}) {
  return {std::move(name), bound, computed, 0.0, "at_most", computed <= bound, std::move(note)};
}

// Runs a check body; library errors become failed checks.
inline void guarded(VerifyReport& rep, const std::string& name, const std::function<void()>& body) {
  try {
    body();
  } catch (const Error& e) {
    VerifyCheck c;
    c.name = name;
    c.mode = "error";
    c.note = e.what();
    rep.checks.push_back(std::move(c));
  }
}

inline double max_abs_deviation(const CurvatureField& f, const std::vector<double>& values, double target) {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (f.inside[k]) m = std::max(m, std::abs(values[k] - target));
  }
  return m;
}

}  // namespace detail

inline VerifyReport verify_disk(const VerifyOptions& opt = {}) {
  using namespace detail;
  VerifyReport rep{"disk", {}};
  const Domain disk = DiskDomain{{0.0, 0.0}, 1.0};
  const double two_pi = 2.0 * std::numbers::pi;
  guarded(rep, "disk.analytic", [&] {
    const CurvatureField f = tv_large_solution(disk, 6.0, opt.h, Backend::analytic, opt.grid_points);
    rep.checks.push_back(check_abs("disk.analytic_v_is_2", 0.0, max_abs_deviation(f, f.v, 2.0), 1e-9,
                                   "max |v - 2| over the disk"));
    rep.checks.push_back(check_rel("disk.total_curvature", two_pi, mass_identities(f, disk).total, 0.02));
    const std::pair<const char*, Nonlinearity> cases[] = {{"disk.u_power", Nonlinearity::power(1.0, 2.0)},
                                                          {"disk.u_log1p", Nonlinearity::log1p()},
                                                          {"disk.u_exp", Nonlinearity::exponential()}};
    for (const auto& [name, fn] : cases) {
      const ScalarField u = large_solution(f, fn);
      const double target = fn.inverse(2.0);
      double dev = 0.0;
      for (std::size_t k = 0; k < u.values.size(); ++k) {
        if (u.inside[k]) dev = std::max(dev, std::abs(u.values[k] - target));
      }
      rep.checks.push_back(check_abs(name, 0.0, dev, 1e-9, "max |u - f^{-1}(2)|"));
    }
  });
  guarded(rep, "disk.mincut", [&] {
    const CurvatureField f = tv_large_solution(disk, 6.0, opt.h, Backend::mincut, opt.grid_points);
    std::size_t ok = 0, n = 0;
    for (std::size_t k = 0; k < f.v.size(); ++k) {
      if (!f.inside[k]) continue;
      ++n;
      ok += std::abs(f.v[k] - 2.0) <= 0.05;
    }
    rep.checks.push_back(check_at_least("disk.mincut_v_near_2", 0.98, static_cast<double>(ok) / static_cast<double>(n),
                                        "fraction of cells with |v - 2| <= 0.05"));
  });
  return rep;
}

inline VerifyReport verify_square(const VerifyOptions& opt = {}) {
  using namespace detail;
  VerifyReport rep{"square", {}};
  const Domain sq = square(1.0, {0.0, 0.0});
  const double lk_exact = 2.0 + std::sqrt(std::numbers::pi);
  guarded(rep, "square.cheeger", [&] {
    rep.checks.push_back(check_abs("square.cheeger_analytic", lk_exact, cheeger(sq).lambda_K, 1e-8));
    rep.checks.push_back(check_rel("square.cheeger_mincut", lk_exact, cheeger(rasterize(sq, opt.h)).lambda_K, 0.02));
    rep.checks.push_back(check_abs("square.total_curvature_exact", 4.0, analytic_total_curvature(sq), 1e-9));
  });
  guarded(rep, "square.field", [&] {
    for (double lmax : {20.0, 40.0, 80.0}) {
      const CurvatureField f = tv_large_solution(sq, lmax, opt.h, Backend::analytic, opt.grid_points);
      rep.checks.push_back(check_at_least("square.corner_growth_" + std::to_string(static_cast<int>(lmax)),
                                          0.9 * lmax, f.max_finite_v()));
      if (lmax == 40.0) {
        rep.checks.push_back(check_rel("square.total_curvature_field", 4.0, mass_identities(f, sq).total, 0.02));
        const LambdaGrid grid = LambdaGrid::geometric(f.level_lambdas.front(), lmax, opt.grid_points);
        const double ratio = grid.max_ratio();
        for (double d : {0.05, 0.1}) {
          const double formula = 1.0 / (d * (2.0 + std::sqrt(2.0)));
          const double v = f.value_at({d, d});
          const bool pass = v <= formula * ratio && v >= formula / ratio;
          rep.checks.push_back({"square.corner_formula_d" + std::to_string(d).substr(0, 4), formula, v, ratio,
                                "ratio", pass, "within one grid ratio of 1/(d(2+sqrt 2))"});
        }
      }
    }
  });
  guarded(rep, "square.levels", [&] {
    const std::vector<double> extra{4.0, 6.0, 10.0};
    const CurvatureField f = tv_large_solution(sq, 40.0, opt.h, Backend::mincut, opt.grid_points, extra);
    const MassReport m = mass_identities(f, rasterize(sq, opt.h));
    for (double lam : extra) {
      for (const auto& lv : m.levels) {
        if (lv.lambda == lam) {
          rep.checks.push_back(check_rel("square.level_identity_" + std::to_string(static_cast<int>(lam)), lv.perimeter,
                                         -lv.integral, 0.02, "integral of H over the level vs -perimeter"));
        }
      }
    }
  });
  return rep;
}

inline VerifyReport verify_radial(const VerifyOptions& opt = {}) {
  using namespace detail;
  VerifyReport rep{"radial", {}};
  for (double p : {1.2, 1.5, 1.8}) {
    for (int N : {2, 3}) {
      char name[64];
      std::snprintf(name, sizeof name, "radial.w0_residual_p%.1f_N%d", p, N);
      guarded(rep, name, [&] { rep.checks.push_back(check_at_most(name, 1e-4, w0_residual(PParams(p), N, 1.0, 1e-3))); });
    }
  }
  const ShootingOptions sopt{opt.radial_intervals, 1e-8};
  const RadialProblem sq(2, 1.0, Nonlinearity::power(1.0, 2.0));
  guarded(rep, "radial.bounds", [&] {
    rep.checks.push_back(check_abs("radial.center_bound_p1.5", 6.0, ball_bound(sq, PParams(1.5), 0.0), 1e-12));
    const RadialProblem ex(2, 1.0, Nonlinearity::exponential());
    for (const auto& [prob, p] : {std::pair{&sq, 1.5}, std::pair{&sq, 1.2}, std::pair{&ex, 1.2}}) {
      const RadialProfile prof = large_profile(*prob, PParams(p), sopt);
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < prof.r.size(); ++i) worst = std::max(worst, prof.u[i] - prof.bound[i]);
      char name[64];
      std::snprintf(name, sizeof name, "radial.ball_bound_%s_p%.1f", prob == &sq ? "power" : "exp", p);
      rep.checks.push_back(check_at_most(name, 1e-6, worst, "max of u - bound over nodes"));
    }
  });
  guarded(rep, "radial.sweep", [&] {
    const std::vector<double> plist{1.5, 1.3, 1.2, 1.1, 1.05};
    const SweepTable t = p_sweep(sq, plist, sopt);
    if (!t.complete()) {
      for (const auto& r : t.rows) {
        if (!r.error.empty()) throw ShootingFailureError("p_radial", "p_sweep", r.error);
      }
    }
    const double root2 = std::sqrt(2.0);
    rep.checks.push_back(check_rel("radial.sweep_mean_p1.05", root2, t.rows.back().interior_mean, 0.15));
    bool monotone = true;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
      monotone = monotone && std::abs(t.rows[i].interior_mean - root2) <= std::abs(t.rows[i - 1].interior_mean - root2);
    }
    rep.checks.push_back({"radial.sweep_gap_nonincreasing", 1.0, monotone ? 1.0 : 0.0, 0.0, "flag", monotone, {}});
    rep.checks.push_back(check_abs("radial.limit_bound_global", std::sqrt(3.0), *t.limit_bound_global, 1e-12));
    rep.checks.push_back(check_abs("radial.limit_bound_optimal", root2, *t.limit_bound_optimal, 1e-12));
    rep.checks.push_back(
        check_rel("radial.exp_center_bound_p1.05", std::log(2.0), exponential_bound(PParams(1.05), 2, 1.0, 0.0), 0.05));
  });
  return rep;
}

inline VerifyReport verify_suite(const std::string& suite, const VerifyOptions& opt = {}) {
  if (suite == "disk") return verify_disk(opt);
  if (suite == "square") return verify_square(opt);
  if (suite == "radial") return verify_radial(opt);
  if (suite == "all") {
    VerifyReport all{"all", {}};
    for (auto* fn : {&verify_disk, &verify_square, &verify_radial}) {
      VerifyReport r = fn(opt);
      all.checks.insert(all.checks.end(), r.checks.begin(), r.checks.end());
    }
    return all;
  }
  throw ConfigError("cli_runner", "verify", "unknown suite '" + suite + "' (disk, square, radial, all)");
}

}  // namespace largesol
