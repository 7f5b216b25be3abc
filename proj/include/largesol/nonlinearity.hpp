#pragma once

// Absorption nonlinearities f with inverse and primitive F(s) = int_0^s f.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "largesol/errors.hpp"

namespace largesol {

/// f(s) = c s^q, extended as an odd function to s < 0.
struct PowerLaw {
  double c = 1.0;
  double q = 1.0;
};

/// f(s) = e^s with primitive taken as F(s) = e^s (the additive constant is
/// dropped, which leaves the Keller-Osserman and Psi transforms exact).
struct Exponential {};

/// f(s) = log(1 + s), s > -1.
struct Log1p {};

/// Piecewise-linear interpolation of strictly increasing samples.
struct Tabulated {
  std::vector<double> s;
  std::vector<double> f;
  std::vector<double> cumulative;  // integral of the interpolant from s.front() to s[i]
};

class Nonlinearity {
 public:
  using Kind = std::variant<PowerLaw, Exponential, Log1p, Tabulated>;

  static Nonlinearity power(double c, double q) {
    if (!(c > 0.0) || !(q > 0.0) || !std::isfinite(c) || !std::isfinite(q)) {
      throw InvalidNonlinearityError("absorption", "Nonlinearity", "power law needs c > 0 and q > 0");
    }
    return Nonlinearity(PowerLaw{c, q});
  }
  static Nonlinearity exponential() { return Nonlinearity(Exponential{}); }
  static Nonlinearity log1p() { return Nonlinearity(Log1p{}); }
  static Nonlinearity table(std::vector<double> s, std::vector<double> f) {
    if (s.size() != f.size() || s.size() < 2) {
      throw InvalidNonlinearityError("absorption", "Nonlinearity", "table needs at least two (s, f) samples");
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (!(s[i] > s[i - 1]) || !(f[i] > f[i - 1])) {
        throw InvalidNonlinearityError("absorption", "Nonlinearity",
                                       "table must be strictly increasing in s and f (row " + std::to_string(i) + ")");
      }
    }
    std::vector<double> cum(s.size(), 0.0);
    for (std::size_t i = 1; i < s.size(); ++i) cum[i] = cum[i - 1] + 0.5 * (s[i] - s[i - 1]) * (f[i] + f[i - 1]);
    return Nonlinearity(Tabulated{std::move(s), std::move(f), std::move(cum)});
  }

  /// Parses "power:c=1,q=2", "exp", "log1p" or "table:path.csv".
  static Nonlinearity parse(std::string_view spec);

  const Kind& kind() const { return kind_; }
  const PowerLaw* as_power() const { return std::get_if<PowerLaw>(&kind_); }
  bool is_exponential() const { return std::holds_alternative<Exponential>(kind_); }

  std::string name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerLaw>) {
            std::ostringstream os;
            os << "power:c=" << k.c << ",q=" << k.q;
            return os.str();
          } else if constexpr (std::is_same_v<K, Exponential>) {
            return "exp";
          } else if constexpr (std::is_same_v<K, Log1p>) {
            return "log1p";
          } else {
            return "table";
          }
        },
        kind_);
  }

  /// Interval of f values on which the inverse is defined.
  std::pair<double, double> range() const {
    constexpr static double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [](const auto& k) -> std::pair<double, double> {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerLaw>) {
            return {-inf, inf};
          } else if constexpr (std::is_same_v<K, Exponential>) {
            return {0.0, inf};
          } else if constexpr (std::is_same_v<K, Log1p>) {
            return {-inf, inf};
          } else {
            return {k.f.front(), k.f.back()};
          }
        },
        kind_);
  }

  bool in_range(double t) const {
    const auto [lo, hi] = range();
    if (is_exponential()) return t > lo && t <= hi;
    return t >= lo && t <= hi;
  }

  double operator()(double s) const {
    return std::visit(
        [s](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerLaw>) {
            return std::copysign(k.c * std::pow(std::abs(s), k.q), s);
          } else if constexpr (std::is_same_v<K, Exponential>) {
            return std::exp(s);
          } else if constexpr (std::is_same_v<K, Log1p>) {
            if (!(s > -1.0)) throw RangeError("absorption", "f", "log(1+s) needs s > -1");
            return std::log1p(s);
          } else {
            return interpolate(k.s, k.f, s, "f");
          }
        },
        kind_);
  }

  double inverse(double t) const {
    return std::visit(
        [t](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerLaw>) {
            return std::copysign(std::pow(std::abs(t) / k.c, 1.0 / k.q), t);
          } else if constexpr (std::is_same_v<K, Exponential>) {
            if (!(t > 0.0)) throw RangeError("absorption", "f_inverse", "e^s only takes positive values");
            return std::log(t);
          } else if constexpr (std::is_same_v<K, Log1p>) {
            return std::expm1(t);
          } else {
            return interpolate(k.f, k.s, t, "f_inverse");
          }
        },
        kind_);
  }

  /// F(s) = int_0^s f (e^s for the exponential kind).
  double primitive(double s) const {
    return std::visit(
        [s](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, PowerLaw>) {
            return k.c * std::pow(std::abs(s), k.q + 1.0) / (k.q + 1.0);
          } else if constexpr (std::is_same_v<K, Exponential>) {
            return std::exp(s);
          } else if constexpr (std::is_same_v<K, Log1p>) {
            if (!(s > -1.0)) throw RangeError("absorption", "F", "log(1+s) needs s > -1");
            return (1.0 + s) * std::log1p(s) - s;
          } else {
            return table_primitive(k, s);
          }
        },
        kind_);
  }

 private:
  explicit Nonlinearity(Kind k) : kind_(std::move(k)) {}

  static double interpolate(const std::vector<double>& x, const std::vector<double>& y, double t, const char* op) {
    if (!(t >= x.front()) || !(t <= x.back())) {
      throw RangeError("absorption", op, "argument " + std::to_string(t) + " outside the tabulated range");
    }
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const std::size_t i = it == x.end() ? x.size() - 2 : static_cast<std::size_t>(it - x.begin()) - 1;
    const double w = (t - x[i]) / (x[i + 1] - x[i]);
    return y[i] + w * (y[i + 1] - y[i]);
  }

  // Exact integral of the interpolant from 0 to s.
  static double table_primitive(const Tabulated& k, double s) {
    if (!(k.s.front() <= 0.0) || !(s >= k.s.front()) || !(s <= k.s.back())) {
      throw RangeError("absorption", "F", "table must cover [0, s] to integrate f");
    }
    auto from_start = [&](double x) {
      const auto it = std::upper_bound(k.s.begin(), k.s.end(), x);
      const std::size_t i = it == k.s.end() ? k.s.size() - 2 : static_cast<std::size_t>(it - k.s.begin()) - 1;
      const double fx = interpolate(k.s, k.f, x, "F");
      return k.cumulative[i] + 0.5 * (x - k.s[i]) * (k.f[i] + fx);
    };
    return from_start(s) - from_start(0.0);
  }

  Kind kind_;
};

namespace detail {

inline double parse_double(std::string_view text, std::string_view what) {
  double x = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("absorption", "parse", "bad number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return x;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// CSV with columns s,f(s); a non-numeric first line is treated as a header.
inline Nonlinearity read_table_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("absorption", "read_table", "cannot open " + path);
  std::vector<double> s, f;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const std::string_view row = trim(line);
    if (row.empty() || row.front() == '#') continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) {
      throw ConfigError("absorption", "read_table", "expected two columns in " + path);
    }
    const auto a = trim(row.substr(0, comma)), b = trim(row.substr(comma + 1));
    double x = 0.0, y = 0.0;
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
    if (ra.ec != std::errc() || rb.ec != std::errc()) {
      if (first) {
        first = false;
        continue;
      }
      throw ConfigError("absorption", "read_table", "non-numeric row in " + path);
    }
    first = false;
    s.push_back(x);
    f.push_back(y);
  }
  return Nonlinearity::table(std::move(s), std::move(f));
}

}  // namespace detail

inline Nonlinearity Nonlinearity::parse(std::string_view spec) {
  spec = detail::trim(spec);
  if (spec == "exp") return exponential();
  if (spec == "log1p") return log1p();
  if (spec.starts_with("table:")) return detail::read_table_csv(std::string(spec.substr(6)));
  if (spec.starts_with("power")) {
    double c = 1.0, q = 1.0;
    std::string_view rest = spec.substr(5);
    if (!rest.empty()) {
      if (rest.front() != ':') throw ConfigError("absorption", "parse", "expected 'power:c=..,q=..'");
      rest.remove_prefix(1);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = detail::trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError("absorption", "parse", "expected key=value in power spec");
        const auto key = detail::trim(item.substr(0, eq));
        const double val = detail::parse_double(detail::trim(item.substr(eq + 1)), key);
        if (key == "c") {
          c = val;
        } else if (key == "q") {
          q = val;
        } else {
          throw ConfigError("absorption", "parse", "unknown power parameter '" + std::string(key) + "'");
        }
      }
    }
    return power(c, q);
  }
  throw ConfigError("absorption", "parse", "unknown nonlinearity '" + std::string(spec) + "'");
}

}  // namespace largesol
