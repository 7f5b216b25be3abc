#pragma once

// Radial p-Laplacian blow-up problem  Delta_p u = f(u) on a ball of radius R
// in dimension N, for 1 < p < 2.
//
// Dirichlet approximations u(R) = n are computed by shooting on the centre
// value alpha for the flux system
//   u' = (Q / r^{N-1})^{1/(p-1)},   Q' = r^{N-1} f(u),   Q(0) = 0,
// and the large solution is the limit n -> inf. Psi_p and the explicit
// supersolution bounds live here too.

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "largesol/absorption.hpp"
#include "largesol/errors.hpp"
#include "largesol/nonlinearity.hpp"
#include "largesol/parallel.hpp"

namespace largesol {

struct PParams {
  double p = 1.5;
  double p_conj = 3.0;

  PParams() = default;
  explicit PParams(double p_) : p(p_), p_conj(p_ / (p_ - 1.0)) {
    if (!(p_ > 1.0) || !(p_ < 2.0)) {
      throw ParameterRangeError("p_radial", "PParams", "p must lie in (1, 2), got " + std::to_string(p_));
    }
  }
};

struct RadialProblem {
  int N = 2;
  double R = 1.0;
  Nonlinearity f = Nonlinearity::power(1.0, 2.0);
  double s_Omega = 1.0;

  RadialProblem(int N_, double R_, Nonlinearity f_) : N(N_), R(R_), f(std::move(f_)), s_Omega(R_) {
    if (N < 2) throw ParameterRangeError("p_radial", "RadialProblem", "dimension must be at least 2");
    if (!(R > 0.0) || !std::isfinite(R)) throw ParameterRangeError("p_radial", "RadialProblem", "radius must be positive");
  }
};

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> u;
  std::vector<double> bound;  // Psi_p^{-1}(w0(r))
  PParams params;
  double dirichlet_n = 0.0;  // +inf for the large solution
  double alpha = 0.0;        // centre value
  double boundary_residual = 0.0;  // |u(R) - n| / n of the final shot
  int doublings = 0;
};

// ---------------------------------------------------------------------------
// Psi_p(t) = int_t^inf (p' F(s))^{-1/p} ds and its inverse

namespace detail {

inline void require_ko(const Nonlinearity& f, const PParams& pp, const char* op) {
  if (const auto* pw = f.as_power()) {
    if (!(pw->q > pp.p - 1.0)) {
      throw UndefinedTransformError("p_radial", op, "s^q with q <= p - 1 fails the Keller-Osserman condition");
    }
    return;
  }
  if (f.is_exponential()) return;
  if (!keller_osserman(f, pp.p).finite) {
    throw UndefinedTransformError("p_radial", op, f.name() + " fails the Keller-Osserman condition");
  }
}

// Integral of F^{-1/p} beyond 1e8, taken from the Keller-Osserman report.
inline double psi_tail(const Nonlinearity& f, const PParams& pp) {
  const KOReport ko = keller_osserman(f, pp.p);
  if (!ko.finite) throw UndefinedTransformError("p_radial", "psi", f.name() + " fails the Keller-Osserman condition");
  return ko.value - ko.divergence_evidence.back();
}

// Quadrature path: decades from t up to 1e8, then the tail.
inline double psi_quadrature(const Nonlinearity& f, const PParams& pp, double t, double tail) {
  constexpr double kTop = 1e8;
  if (!(t < kTop)) throw RangeError("p_radial", "psi", "t beyond the tabulated range");
  auto g = [&](double s) { return std::pow(f.primitive(s), -1.0 / pp.p); };
  double body = 0.0;
  double a = t;
  // Integrate decade by decade so the adaptive rule sees comparable scales.
  while (a < kTop) {
    const double b = std::min(kTop, std::max(10.0 * a, a + 1.0));
    body += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a, b, 15, 1e-13);
    a = b;
  }
  return std::pow(pp.p_conj, -1.0 / pp.p) * (body + tail);
}

}  // namespace detail

inline double psi(const Nonlinearity& f, const PParams& pp, double t) {
  detail::require_ko(f, pp, "psi");
  const double p = pp.p;
  if (const auto* pw = f.as_power()) {
    if (!(t > 0.0)) throw RangeError("p_radial", "psi", "t must be positive");
    const double e = pw->q + 1.0 - p;
    return std::pow((pw->q + 1.0) / (pw->c * pp.p_conj), 1.0 / p) * p / e * std::pow(t, -e / p);
  }
  if (f.is_exponential()) {
    if (!std::isfinite(t)) throw RangeError("p_radial", "psi", "t must be finite");
    return std::pow(pp.p_conj, -1.0 / p) * p * std::exp(-t / p);
  }
  if (!(t > 0.0)) throw RangeError("p_radial", "psi", "t must be positive");
  return detail::psi_quadrature(f, pp, t, detail::psi_tail(f, pp));
}

inline double psi_inv(const Nonlinearity& f, const PParams& pp, double s) {
  detail::require_ko(f, pp, "psi_inv");
  const double p = pp.p;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw RangeError("p_radial", "psi_inv", "s must be positive and finite, got " + std::to_string(s));
  }
  if (const auto* pw = f.as_power()) {
    const double e = pw->q + 1.0 - p;
    return std::pow(std::pow((pw->q + 1.0) / (pw->c * pp.p_conj), 1.0 / p) * p / (e * s), p / e);
  }
  if (f.is_exponential()) {
    return std::log((p - 1.0) * std::pow(p, p - 1.0) / std::pow(s, p));
  }
  // Psi is decreasing; bracket then bisect in t.
  const double tail = detail::psi_tail(f, pp);
  auto psi_t = [&](double t) { return detail::psi_quadrature(f, pp, t, tail); };
  double lo = 1e-12, hi = 1.0;
  if (!(s < psi_t(lo))) throw RangeError("p_radial", "psi_inv", "s is not below Psi(0+)");
  while (psi_t(hi) > s) {
    lo = hi;
    hi *= 10.0;
    if (hi > 1e8) throw RangeError("p_radial", "psi_inv", "s below the representable range of Psi");
  }
  // Safeguarded Newton with Psi'(t) = -(p' F(t))^{-1/p}.
  double t = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double g = psi_t(t) - s;
    if (std::abs(g) <= 1e-14 * s) break;
    (g > 0.0 ? lo : hi) = t;
    const double slope = -std::pow(pp.p_conj * f.primitive(t), -1.0 / p);
    double next = t - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == t || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
    t = next;
  }
  return t;
}

// ---------------------------------------------------------------------------
// Explicit supersolution data

/// w0(r) = (1/(p'N)) (R - r^{p'} / R^{1/(p-1)}), the radial solution of
/// Delta_p w = -N^{2-p}/R vanishing on |x| = R.
inline double w0(const PParams& pp, int N, double R, double r) {
  if (!(r >= 0.0) || !(r <= R)) throw RangeError("p_radial", "w0", "r must lie in [0, R]");
  return (R - std::pow(r, pp.p_conj) / std::pow(R, 1.0 / (pp.p - 1.0))) / (pp.p_conj * N);
}

/// Factor a with Delta_p (a w0) = a^{p-1} Delta_p w0 equal to the improved
/// right-hand side -(N^{2-p}/R) ((q+1)/(q+1-p))^{1/p'}.
inline double w0_optimal_factor(const PParams& pp, int N, double q) {
  if (!(q > 1.0 / (N - 1))) {
    throw ParameterRangeError("p_radial", "w0_optimal", "needs q > 1/(N-1)");
  }
  if (!(pp.p < 1.0 + q)) throw ParameterRangeError("p_radial", "w0_optimal", "needs p < 1 + q");
  return std::pow((q + 1.0) / (q + 1.0 - pp.p), 1.0 / pp.p);
}

inline double w0_optimal(const PParams& pp, int N, double R, double q, double r) {
  return w0_optimal_factor(pp, N, q) * w0(pp, N, R, r);
}

/// Max over interior nodes r_i = i h of |Delta_p^h w(r_i) - target| for the
/// conservative centred scheme
///   (r_{i+1/2}^{N-1} phi(Dw_{i+1/2}) - r_{i-1/2}^{N-1} phi(Dw_{i-1/2})) / V_i,
/// with phi(s) = |s|^{p-2} s and V_i = (r_{i+1/2}^N - r_{i-1/2}^N) / N.
/// increment(i) must return w(r_{i+1}) - w(r_i).
template <class Increment>
double radial_p_laplacian_residual(const PParams& pp, int N, double R, double h, Increment&& increment, double target) {
  if (!(h > 0.0) || !(h < R)) throw ParameterRangeError("p_radial", "w0_residual", "need 0 < h < R");
  const auto M = static_cast<long>(std::llround(R / h));
  auto phi = [&](double s) { return std::copysign(std::pow(std::abs(s), pp.p - 1.0), s); };
  auto flux = [&](long i) {  // at r_{i+1/2}
    const double rm = (static_cast<double>(i) + 0.5) * h;
    return std::pow(rm, N - 1) * phi(increment(i) / h);
  };
  double worst = 0.0;
  double left = flux(0);
  for (long i = 1; i < M; ++i) {
    const double right = flux(i);
    const double a = (static_cast<double>(i) - 0.5) * h, b = (static_cast<double>(i) + 0.5) * h;
    const double vol = (std::pow(b, N) - std::pow(a, N)) / N;
    worst = std::max(worst, std::abs((right - left) / vol - target));
    left = right;
  }
  return worst;
}

namespace detail {

// w0(r_{i+1}) - w0(r_i) without cancellation.
inline double w0_increment(const PParams& pp, int N, double R, double h, long i) {
  const double r = static_cast<double>(i) * h;
  const double d = i == 0 ? std::pow(h, pp.p_conj) : std::pow(r, pp.p_conj) * std::expm1(pp.p_conj * std::log1p(h / r));
  return -d / (std::pow(R, 1.0 / (pp.p - 1.0)) * pp.p_conj * N);
}

}  // namespace detail

/// Residual of the discrete p-Laplacian of w0 against -N^{2-p}/R.
inline double w0_residual(const PParams& pp, int N, double R, double h) {
  return radial_p_laplacian_residual(
      pp, N, R, h, [&](long i) { return detail::w0_increment(pp, N, R, h, i); }, -std::pow(N, 2.0 - pp.p) / R);
}

/// Pointwise upper bound Psi_p^{-1}(w0(r)); +inf at r = R.
inline double ball_bound(const RadialProblem& prob, const PParams& pp, double r) {
  const double w = w0(pp, prob.N, prob.R, std::min(r, prob.R));
  if (!(w > 0.0)) return std::numeric_limits<double>::infinity();
  return psi_inv(prob.f, pp, w);
}

/// Improved power-law bound Psi_p^{-1}(a w0(r)).
inline double optimal_ball_bound(const RadialProblem& prob, const PParams& pp, double r) {
  const auto* pw = prob.f.as_power();
  if (!pw) throw InvalidNonlinearityError("p_radial", "optimal_ball_bound", "needs a power nonlinearity");
  const double w = w0_optimal(pp, prob.N, prob.R, pw->q, std::min(r, prob.R));
  if (!(w > 0.0)) return std::numeric_limits<double>::infinity();
  return psi_inv(prob.f, pp, w);
}

/// Explicit bound for f = e^s:
/// log(p^{2p-1} N^p / ((p-1)^{p-1} (s - r^{p'}/s^{1/(p-1)})^p)).
inline double exponential_bound(const PParams& pp, int N, double s_Omega, double r) {
  const double p = pp.p;
  const double gap = s_Omega - std::pow(r, pp.p_conj) / std::pow(s_Omega, 1.0 / (p - 1.0));
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  return (2.0 * p - 1.0) * std::log(p) + p * std::log(static_cast<double>(N)) - (p - 1.0) * std::log(p - 1.0) -
         p * std::log(gap);
}

/// p -> 1 limit of the global power-law bound: f^{-1}((q+1) N / (q s)).
inline double power_limit_bound(const RadialProblem& prob) {
  const auto* pw = prob.f.as_power();
  if (!pw) throw InvalidNonlinearityError("p_radial", "power_limit_bound", "needs a power nonlinearity");
  return prob.f.inverse((pw->q + 1.0) * prob.N / (pw->q * prob.s_Omega));
}

/// The 1-Laplacian large solution on the ball: f^{-1}(N/R).
inline double limit_reference(const RadialProblem& prob) { return prob.f.inverse(prob.N / prob.R); }

// ---------------------------------------------------------------------------
// Shooting

namespace detail {

struct Shot {
  bool reached = false;  // integrated to R without exceeding n
  double u_end = 0.0;
  std::vector<double> u;  // values at mesh nodes (filled when reached)
};

class Shooter {
 public:
  using State = std::array<double, 2>;

  Shooter(const RadialProblem& prob, const PParams& pp, int intervals)
      : prob_(prob), pp_(pp), eps_(1e-6 * prob.R) {
    if (intervals < 2) throw ParameterRangeError("p_radial", "solve_dirichlet", "mesh needs at least 2 intervals");
    nodes_.resize(static_cast<std::size_t>(intervals) + 1);
    for (int i = 0; i <= intervals; ++i) nodes_[i] = prob.R * i / intervals;
    nodes_.back() = prob.R;
  }

  const std::vector<double>& nodes() const { return nodes_; }

  Shot shoot(double alpha, double n, bool keep) const {
    namespace odeint = boost::numeric::odeint;
    const int N = prob_.N;
    const double inv = 1.0 / (pp_.p - 1.0);
    const double fa = prob_.f(alpha);
    const double fa_pos = std::max(fa, 0.0);
    auto series_u = [&](double r) {
      return alpha + (pp_.p - 1.0) / pp_.p * std::pow(fa_pos / N, inv) * std::pow(r, pp_.p_conj);
    };
    auto rhs = [&](const State& x, State& dx, double r) {
      const double Q = std::max(x[1], 0.0);
      dx[0] = std::pow(Q / std::pow(r, N - 1), inv);
      dx[1] = std::pow(r, N - 1) * prob_.f(x[0]);
    };

    Shot out;
    if (keep) out.u.assign(nodes_.size(), 0.0);
    std::size_t next = 0;
    while (next < nodes_.size() && nodes_[next] <= eps_) {
      if (keep) out.u[next] = series_u(nodes_[next]);
      ++next;
    }
    State x{series_u(eps_), fa_pos * std::pow(eps_, N) / N};
    double r = eps_;
    double dt = 1e-3 * prob_.R;
    auto stepper = odeint::make_controlled(1e-12, 1e-11, odeint::runge_kutta_dopri5<State>());
    for (long guard = 0; next < nodes_.size(); ++guard) {
      if (guard > 20'000'000) throw ShootingFailureError("p_radial", "solve_dirichlet", "step budget exhausted");
      const double target = nodes_[next];
      dt = std::min(dt, target - r);
      State trial = x;
      double rt = r, dtt = dt;
      const auto res = stepper.try_step(rhs, trial, rt, dtt);
      if (res == odeint::fail || !std::isfinite(trial[0]) || !std::isfinite(trial[1])) {
        if (res != odeint::fail) dtt = 0.25 * dt;
        dt = dtt;
        if (dt < 1e-15 * prob_.R) return out;  // blow-up inside [r, r + dt]: datum exceeded
        continue;
      }
      x = trial;
      // rt can round onto the node even when dt fell short of it.
      const bool landed = dt >= target - r || rt >= target;
      r = landed ? target : rt;
      dt = dtt;
      if (x[0] > n) return out;
      if (landed) {
        if (keep) out.u[next] = x[0];
        ++next;
      }
    }
    out.reached = true;
    out.u_end = x[0];
    return out;
  }

 private:
  const RadialProblem& prob_;
  PParams pp_;
  double eps_;
  std::vector<double> nodes_;
};

}  // namespace detail

struct ShootingOptions {
  int intervals = 1000;
  double rel_tol = 1e-8;  // on |u(R) - n| / n
};

namespace detail {

inline RadialProfile finish_profile(const RadialProblem& prob, const PParams& pp, const std::vector<double>& r,
                                    std::vector<double> u, double n, double alpha, double residual) {
  RadialProfile out;
  out.r = r;
  out.u = std::move(u);
  out.params = pp;
  out.dirichlet_n = n;
  out.alpha = alpha;
  out.boundary_residual = residual;
  out.bound.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.bound[i] = ball_bound(prob, pp, r[i]);
  return out;
}

// Bisection on the centre value. lo_hint (if any) is known to stay below n.
inline RadialProfile shoot_dirichlet(const RadialProblem& prob, const PParams& pp, double n,
                                     const ShootingOptions& opt, std::optional<double> lo_hint) {
  const Shooter shooter(prob, pp, opt.intervals);
  double hi = psi_inv(prob.f, pp, w0(pp, prob.N, prob.R, 0.0));
  double lo = lo_hint.value_or(std::min(0.0, hi));
  auto below = [&](double a) {
    const Shot s = shooter.shoot(a, n, false);
    return s.reached ? std::optional<double>(s.u_end) : std::nullopt;
  };
  auto lo_end = below(lo);
  for (int k = 0; !lo_end || *lo_end > n; ++k) {
    if (k > 60) throw ShootingFailureError("p_radial", "solve_dirichlet", "no lower centre value found");
    lo -= std::ldexp(1.0, k);
    lo_end = below(lo);
  }
  {
    const auto hi_end = below(hi);
    if (hi_end && *hi_end < n) {
      throw ShootingFailureError("p_radial", "solve_dirichlet",
                                 "centre value bracket exhausted: u(R) < n at the upper bound alpha = " +
                                     std::to_string(hi));
    }
  }
  double best = lo, best_end = *lo_end;
  for (int it = 0; it < 200; ++it) {
    if (std::abs(best_end - n) <= opt.rel_tol * n) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const auto end = below(mid);
    if (end && *end <= n) {
      lo = mid;
      best = mid;
      best_end = *end;
    } else {
      hi = mid;
    }
  }
  Shot s = shooter.shoot(best, n, true);
  if (!s.reached) throw ShootingFailureError("p_radial", "solve_dirichlet", "final shot did not reach R");
  return finish_profile(prob, pp, shooter.nodes(), std::move(s.u), n, best, std::abs(s.u_end - n) / n);
}

}  // namespace detail

/// Radial solution of Delta_p u = f(u) in B_R with u = n on the boundary.
inline RadialProfile solve_dirichlet(const RadialProblem& prob, const PParams& pp, double n,
                                     const ShootingOptions& opt = {}) {
  if (!(n > 0.0) || !std::isfinite(n)) throw ParameterRangeError("p_radial", "solve_dirichlet", "n must be positive");
  return detail::shoot_dirichlet(prob, pp, n, opt, std::nullopt);
}

/// Large solution as the limit of Dirichlet data n = 2^k n0, stopped once the
/// profile on [0, 0.9 R] moves by less than 1e-6 relative.
inline RadialProfile large_profile(const RadialProblem& prob, const PParams& pp, const ShootingOptions& opt = {}) {
  constexpr int kMaxDoublings = 30;
  constexpr double kStable = 1e-6;
  const double n0 = ball_bound(prob, pp, 0.9 * prob.R);
  RadialProfile prev = detail::shoot_dirichlet(prob, pp, n0, opt, std::nullopt);
  for (int k = 1; k <= kMaxDoublings; ++k) {
    RadialProfile cur = detail::shoot_dirichlet(prob, pp, std::ldexp(n0, k), opt, prev.alpha);
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < cur.r.size() && cur.r[i] <= 0.9 * prob.R * (1.0 + 1e-12); ++i) {
      diff = std::max(diff, std::abs(cur.u[i] - prev.u[i]));
      scale = std::max(scale, std::abs(cur.u[i]));
    }
    prev = std::move(cur);
    if (diff <= kStable * scale) {
      prev.dirichlet_n = std::numeric_limits<double>::infinity();
      prev.doublings = k;
      return prev;
    }
  }
  throw ConvergenceFailureError("p_radial", "large_profile",
                                "profile did not stabilise after " + std::to_string(kMaxDoublings) + " doublings");
}

/// Volume-weighted mean of a profile over {r <= radius} (trapezoid rule on
/// u r^{N-1}).
inline double interior_mean(const RadialProfile& prof, int N, double radius) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 1; i < prof.r.size() && prof.r[i] <= radius * (1.0 + 1e-12); ++i) {
    const double a = prof.r[i - 1], b = prof.r[i];
    const double wa = std::pow(a, N - 1), wb = std::pow(b, N - 1);
    num += 0.5 * (b - a) * (prof.u[i - 1] * wa + prof.u[i] * wb);
    den += 0.5 * (b - a) * (wa + wb);
  }
  return num / den;
}

struct SweepRow {
  double p = 0.0;
  double interior_mean = std::numeric_limits<double>::quiet_NaN();
  double center_value = std::numeric_limits<double>::quiet_NaN();
  double center_bound = std::numeric_limits<double>::quiet_NaN();  // Psi^{-1}(w0(0))
  double limit_ref = 0.0;                                         // f^{-1}(N/R)
  std::string error;                                               // empty on success
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::optional<double> limit_bound_global;   // power law only
  std::optional<double> limit_bound_optimal;  // power law with q > 1/(N-1)
  bool complete() const {
    return std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.error.empty(); });
  }
};

/// Large profiles for a decreasing list of p. Failures are recorded per row.
inline SweepTable p_sweep(const RadialProblem& prob, const std::vector<double>& p_list,
                          const ShootingOptions& opt = {}) {
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    PParams{p_list[i]};
    if (i > 0 && !(p_list[i] < p_list[i - 1])) {
      throw ParameterRangeError("p_radial", "p_sweep", "p list must be strictly decreasing");
    }
    if (const auto* pw = prob.f.as_power(); pw && !(p_list[i] < 1.0 + pw->q)) {
      throw ParameterRangeError("p_radial", "p_sweep", "each p must satisfy p < 1 + q");
    }
  }
  SweepTable out;
  out.rows.resize(p_list.size());
  const double ref = limit_reference(prob);
  parallel_for(p_list.size(), [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    row.p = p_list[i];
    row.limit_ref = ref;
    try {
      const PParams pp(row.p);
      row.center_bound = ball_bound(prob, pp, 0.0);
      const RadialProfile prof = large_profile(prob, pp, opt);
      row.center_value = prof.u.front();
      row.interior_mean = interior_mean(prof, prob.N, 0.5 * prob.R);
    } catch (const Error& e) {
      row.error = e.what();
    }
  });
  if (const auto* pw = prob.f.as_power()) {
    out.limit_bound_global = power_limit_bound(prob);
    if (pw->q > 1.0 / (prob.N - 1)) out.limit_bound_optimal = std::pow(prob.N / (pw->c * prob.R), 1.0 / pw->q);
  }
  return out;
}

}  // namespace largesol
