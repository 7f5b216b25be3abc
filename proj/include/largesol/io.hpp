#pragma once

// File formats: polygon JSON, PGM masks with a JSON sidecar, field CSV and
// binary dumps, radial profile and sweep tables.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "largesol/absorption.hpp"
#include "largesol/curvature_field.hpp"
#include "largesol/errors.hpp"
#include "largesol/geometry.hpp"
#include "largesol/p_radial.hpp"
#include "largesol/prescribed_curvature.hpp"
#include "largesol/raster.hpp"

namespace largesol::io {

using nlohmann::json;

inline std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("io", "read_json", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("io", "read_json", path.string() + ": " + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("io", "write", "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("io", "write", "write failed for " + path.string());
}

inline void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Sidecar path: the same name with a .json extension.
inline std::filesystem::path sidecar_path(std::filesystem::path path) { return path.replace_extension(".json"); }

// ---------------------------------------------------------------------------
// Polygons

/// {"vertices": [[x, y], ...]}, counter-clockwise.
inline ConvexPolygon read_polygon(const std::filesystem::path& path) {
  const json j = read_json(path);
  std::vector<Point> pts;
  try {
    for (const auto& v : j.at("vertices")) pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
  } catch (const json::exception& e) {
    throw ConfigError("io", "read_polygon", path.string() + ": " + e.what());
  }
  return ConvexPolygon(std::move(pts));
}

inline void write_polygon(const std::filesystem::path& path, const ConvexPolygon& poly) {
  json v = json::array();
  for (const Point& p : poly.vertices()) v.push_back({p.x, p.y});
  write_json(path, json{{"vertices", v}});
}

// ---------------------------------------------------------------------------
// PGM masks. Image rows run top to bottom, i.e. grid row ny-1 comes first.

inline json grid_json(const GridGeometry& g) { return json{{"h", g.h}, {"origin", {g.origin.x, g.origin.y}}}; }

inline void write_pgm(const std::filesystem::path& path, const Mask& m, bool binary = true) {
  const auto& g = m.geom;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("io", "write_pgm", "cannot open " + path.string() + " for writing");
  out << (binary ? "P5" : "P2") << "\n" << g.nx << " " << g.ny << "\n255\n";
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      const unsigned char px = m.cells[g.index(i, j)] ? 255 : 0;
      if (binary) {
        out.put(static_cast<char>(px));
      } else {
        out << static_cast<int>(px) << (i + 1 == g.nx ? '\n' : ' ');
      }
    }
  }
  if (!out) throw IoError("io", "write_pgm", "write failed for " + path.string());
}

/// Mask plus sidecar {"h", "origin"} and any extra report fields.
inline void write_mask(const std::filesystem::path& path, const Mask& m, json extra = json::object()) {
  write_pgm(path, m);
  json side = grid_json(m.geom);
  side.update(extra);
  write_json(sidecar_path(path), side);
}

namespace detail {

inline int pgm_int(std::istream& in, const std::string& path) {
  in >> std::ws;
  while (in.peek() == '#') {
    std::string skip;
    std::getline(in, skip);
    in >> std::ws;
  }
  int v = 0;
  if (!(in >> v)) throw ConfigError("io", "read_pgm", "malformed header in " + path);
  return v;
}

}  // namespace detail

/// Reads a P2/P5 mask (nonzero = inside) with its JSON sidecar.
inline Mask read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io", "read_pgm", "cannot open " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "P2" && magic != "P5") throw ConfigError("io", "read_pgm", path.string() + " is not a P2/P5 PGM");
  const int nx = detail::pgm_int(in, path.string());
  const int ny = detail::pgm_int(in, path.string());
  const int maxval = detail::pgm_int(in, path.string());
  if (nx <= 0 || ny <= 0 || maxval <= 0 || maxval > 255) {
    throw ConfigError("io", "read_pgm", "unsupported PGM dimensions or depth in " + path.string());
  }
  const auto side_path = sidecar_path(path);
  if (!std::filesystem::exists(side_path)) {
    throw IoError("io", "read_pgm", "missing sidecar " + side_path.string());
  }
  const json side = read_json(side_path);
  GridGeometry g;
  try {
    g.nx = nx;
    g.ny = ny;
    g.h = side.at("h").get<double>();
    g.origin = {side.at("origin").at(0).get<double>(), side.at("origin").at(1).get<double>()};
  } catch (const json::exception& e) {
    throw ConfigError("io", "read_pgm", side_path.string() + ": " + e.what());
  }
  if (!(g.h > 0.0)) throw InvalidResolutionError("io", "read_pgm", "sidecar spacing must be positive");
  Mask m(g);
  if (magic == "P5") in.get();  // single whitespace after maxval
  for (int j = ny - 1; j >= 0; --j) {
    for (int i = 0; i < nx; ++i) {
      int v = 0;
      if (magic == "P5") {
        const int c = in.get();
        if (c == EOF) throw ConfigError("io", "read_pgm", "truncated pixel data in " + path.string());
        v = c;
      } else {
        v = detail::pgm_int(in, path.string());
      }
      m.cells[g.index(i, j)] = v != 0 ? 1 : 0;
    }
  }
  return m;
}

inline json level_report(const LevelSet& s) {
  return json{{"lambda", s.lambda}, {"energy", s.energy}, {"perimeter", s.perimeter}, {"area", s.area}};
}

// ---------------------------------------------------------------------------
// Fields

/// CSV "x,y,v" over the cells of the domain.
inline void write_field_csv(const std::filesystem::path& path, const GridGeometry& g,
                            const std::vector<std::uint8_t>& inside, const std::vector<double>& values,
                            const std::string& column = "v") {
  std::ostringstream os;
  os << "x,y," << column << "\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      if (!inside[k]) continue;
      const Point c = g.center(i, j);
      os << fmt(c.x) << ',' << fmt(c.y) << ',' << fmt(values[k]) << '\n';
    }
  }
  write_text(path, os.str());
}

/// Row-major float64 dump plus sidecar
/// {"nx", "ny", "h", "origin", "lambda_max", "coverage"}. Cells outside the
/// domain hold NaN.
inline void write_field_binary(const std::filesystem::path& path, const GridGeometry& g,
                               const std::vector<std::uint8_t>& inside, const std::vector<double>& values,
                               double lambda_max, double coverage) {
  std::vector<double> data(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    data[k] = inside[k] ? values[k] : std::numeric_limits<double>::quiet_NaN();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("io", "write_field", "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw IoError("io", "write_field", "write failed for " + path.string());
  write_json(sidecar_path(path), json{{"nx", g.nx},
                                      {"ny", g.ny},
                                      {"h", g.h},
                                      {"origin", {g.origin.x, g.origin.y}},
                                      {"lambda_max", lambda_max},
                                      {"coverage", coverage}});
}

struct FieldDump {
  GridGeometry geom;
  std::vector<double> values;
  double lambda_max = 0.0;
  double coverage = 0.0;
};

inline FieldDump read_field_binary(const std::filesystem::path& path) {
  const json side = read_json(sidecar_path(path));
  FieldDump d;
  try {
    d.geom.nx = side.at("nx").get<int>();
    d.geom.ny = side.at("ny").get<int>();
    d.geom.h = side.at("h").get<double>();
    d.geom.origin = {side.at("origin").at(0).get<double>(), side.at("origin").at(1).get<double>()};
    d.lambda_max = side.at("lambda_max").get<double>();
    d.coverage = side.at("coverage").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError("io", "read_field", e.what());
  }
  d.values.resize(d.geom.cells());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("io", "read_field", "cannot open " + path.string());
  in.read(reinterpret_cast<char*>(d.values.data()), static_cast<std::streamsize>(d.values.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(d.values.size() * sizeof(double))) {
    throw IoError("io", "read_field", "truncated field dump " + path.string());
  }
  return d;
}

/// Writes .csv as CSV and anything else as a binary dump.
inline void write_field(const std::filesystem::path& path, const CurvatureField& f) {
  if (path.extension() == ".csv") {
    write_field_csv(path, f.geom, f.inside, f.v, "v");
  } else {
    write_field_binary(path, f.geom, f.inside, f.v, f.lambda_max, f.coverage);
  }
}

inline void write_field(const std::filesystem::path& path, const ScalarField& u) {
  if (path.extension() == ".csv") {
    write_field_csv(path, u.geom, u.inside, u.values, "u");
  } else {
    write_field_binary(path, u.geom, u.inside, u.values, u.lambda_max, u.coverage);
  }
}

// ---------------------------------------------------------------------------
// Radial tables

inline void write_profile_csv(const std::filesystem::path& path, const RadialProfile& prof) {
  std::ostringstream os;
  os << "r,u,bound\n";
  for (std::size_t i = 0; i < prof.r.size(); ++i) {
    os << fmt(prof.r[i]) << ',' << fmt(prof.u[i]) << ',' << fmt(prof.bound[i]) << '\n';
  }
  write_text(path, os.str());
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepTable& table) {
  std::ostringstream os;
  os << "p,interior_mean,center_bound,limit_ref\n";
  for (const auto& r : table.rows) {
    os << fmt(r.p) << ',' << fmt(r.interior_mean) << ',' << fmt(r.center_bound) << ',' << fmt(r.limit_ref) << '\n';
  }
  write_text(path, os.str());
}

}  // namespace largesol::io
