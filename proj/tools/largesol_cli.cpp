// largesol: command-line front end.
//
//   largesol cheeger   --domain poly.json | --disk R | --mask m.pgm [--raster h]
//   largesol plambda   <domain> --lambda L [--backend analytic|mincut] [--h h] --out set.pgm
//   largesol curvature <domain> --lambda-max L [--h h] [--points n] [--backend b] --out v.bin|v.csv
//   largesol large     <domain> --f spec --lambda-max L [--h h] --out u.bin|u.csv
//   largesol ko        --f spec --p p
//   largesol radial    --f spec --R R --p p (--n n | --large) --out profile.csv
//   largesol psweep    --f spec --R R --plist 1.5,1.3 --out table.csv
//   largesol verify    --suite disk|square|radial|all [--out report.json]
//
// Reports go to stdout as JSON. Exit codes: 0 ok, 2 configuration,
// 3 solver, 4 verification, 5 I/O.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "largesol/largesol.hpp"

namespace {

using namespace largesol;
using nlohmann::json;

constexpr double kDefaultH = 1.0 / 512.0;
constexpr std::size_t kDefaultPoints = 64;

struct DomainArgs {
  std::string polygon;
  double disk = 0.0;
  std::string mask;

  void attach(CLI::App* app) {
    auto* a = app->add_option("--domain", polygon, "convex polygon JSON {\"vertices\": [[x,y],...]}");
    auto* b = app->add_option("--disk", disk, "disk of radius R centred at the origin");
    auto* c = app->add_option("--mask", mask, "raster domain: PGM mask with JSON sidecar");
    a->excludes(b)->excludes(c);
    b->excludes(c);
  }

  bool is_raster() const { return !mask.empty(); }

  Domain domain() const {
    if (!polygon.empty()) return io::read_polygon(polygon);
    if (disk != 0.0) return DiskDomain({0.0, 0.0}, disk);
    throw ConfigError("cli_runner", "run", "a domain is required: --domain, --disk or --mask");
  }

  RasterDomain raster(double h) const {
    if (is_raster()) return RasterDomain(io::read_pgm(mask));
    return rasterize(domain(), h);
  }

  json describe() const {
    if (!polygon.empty()) return {{"polygon", polygon}};
    if (is_raster()) return {{"mask", mask}};
    return {{"disk", disk}};
  }
};

Backend parse_backend(const std::string& s) {
  if (s == "analytic") return Backend::analytic;
  if (s == "mincut") return Backend::mincut;
  throw ConfigError("cli_runner", "run", "backend must be analytic or mincut");
}

void emit(const json& report, const std::string& out_json) {
  std::cout << report.dump(2) << std::endl;
  if (!out_json.empty()) io::write_json(out_json, report);
}

json field_summary(const CurvatureField& f) {
  return {{"nx", f.geom.nx},
          {"ny", f.geom.ny},
          {"h", f.geom.h},
          {"lambda_K", f.level_lambdas.empty() ? 0.0 : f.level_lambdas.front()},
          {"lambda_max", f.lambda_max},
          {"levels", f.level_lambdas.size()},
          {"coverage", f.coverage},
          {"min_v", f.min_v()},
          {"max_finite_v", f.max_finite_v()}};
}

CurvatureField compute_field(const DomainArgs& d, double lambda_max, double h, std::size_t points,
                             const std::string& backend) {
  if (d.is_raster()) return tv_large_solution(d.raster(h), lambda_max, points);
  return tv_large_solution(d.domain(), lambda_max, h, parse_backend(backend), points);
}

std::vector<double> parse_plist(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    out.push_back(largesol::detail::parse_double(largesol::detail::trim(item), "p list"));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Large solutions of the 1-Laplacian absorption problem"};
  app.set_help_flag("--help", "print this help and exit");  // frees -h for the spacing option
  app.fallthrough();  // --workers may follow the subcommand
  app.require_subcommand(1);
  unsigned workers = 0;
  app.add_option("--workers", workers, "worker threads (default: " + std::string(kWorkersEnv) + " or all cores)");

  // cheeger
  DomainArgs cd;
  double cheeger_h = 0.0;
  std::string cheeger_out;
  auto* cheeger_cmd = app.add_subcommand("cheeger", "Cheeger constant and set");
  cd.attach(cheeger_cmd);
  cheeger_cmd->add_option("--raster", cheeger_h, "use the min-cut backend on a raster of this spacing");
  cheeger_cmd->add_option("--report", cheeger_out, "also write the report to this JSON file");

  // plambda
  DomainArgs pd;
  double lambda = 0.0, plambda_h = kDefaultH;
  std::string plambda_backend = "analytic", plambda_out;
  auto* plambda_cmd = app.add_subcommand("plambda", "minimiser of Per(F) - lambda |F|");
  pd.attach(plambda_cmd);
  plambda_cmd->add_option("--lambda", lambda, "curvature parameter")->required();
  plambda_cmd->add_option("--backend", plambda_backend, "analytic or mincut")->check(CLI::IsMember({"analytic", "mincut"}));
  plambda_cmd->add_option("--h", plambda_h, "raster spacing");
  plambda_cmd->add_option("--out", plambda_out, "PGM mask; the report goes to the .json sidecar");

  // curvature / large share their options
  struct FieldArgs {
    DomainArgs d;
    double lambda_max = 0.0;
    double h = kDefaultH;
    std::size_t points = kDefaultPoints;
    std::string backend = "analytic";
    std::string out;
    std::string f;
  };
  FieldArgs ca, la;
  auto attach_field = [](CLI::App* cmd, FieldArgs& a) {
    a.d.attach(cmd);
    cmd->add_option("--lambda-max", a.lambda_max, "largest level of the lambda grid")->required();
    cmd->add_option("--h", a.h, "raster spacing");
    cmd->add_option("--points", a.points, "geometric lambda-grid size");
    cmd->add_option("--backend", a.backend, "analytic or mincut")->check(CLI::IsMember({"analytic", "mincut"}));
    cmd->add_option("--out", a.out, "field output (.csv or binary dump)");
  };
  auto* curvature_cmd = app.add_subcommand("curvature", "variational mean curvature field v");
  attach_field(curvature_cmd, ca);
  auto* large_cmd = app.add_subcommand("large", "large solution u = f^{-1}(v)");
  attach_field(large_cmd, la);
  large_cmd->add_option("--f", la.f, "power:c=..,q=.. | exp | log1p | table:path.csv")->required();

  // ko
  std::string ko_f;
  double ko_p = 0.0;
  auto* ko_cmd = app.add_subcommand("ko", "Keller-Osserman check");
  ko_cmd->add_option("--f", ko_f, "nonlinearity")->required();
  ko_cmd->add_option("--p", ko_p, "exponent p > 1")->required();

  // radial
  std::string radial_f, radial_out;
  double radial_R = 1.0, radial_p = 1.5, radial_n = 0.0;
  int radial_N = 2, radial_intervals = 1000;
  bool radial_large = false;
  auto* radial_cmd = app.add_subcommand("radial", "radial p-Laplacian profile");
  radial_cmd->add_option("--f", radial_f, "nonlinearity")->required();
  radial_cmd->add_option("--R", radial_R, "ball radius");
  radial_cmd->add_option("--N", radial_N, "dimension");
  radial_cmd->add_option("--p", radial_p, "exponent in (1, 2)");
  radial_cmd->add_option("--intervals", radial_intervals, "mesh intervals on [0, R]");
  auto* n_opt = radial_cmd->add_option("--n", radial_n, "Dirichlet datum");
  auto* large_flag = radial_cmd->add_flag("--large", radial_large, "large solution (n -> infinity)");
  n_opt->excludes(large_flag);
  radial_cmd->add_option("--out", radial_out, "profile CSV (r,u,bound)");

  // psweep
  std::string sweep_f, sweep_plist = "1.5,1.3,1.2,1.1,1.05", sweep_out;
  double sweep_R = 1.0;
  int sweep_N = 2, sweep_intervals = 1000;
  auto* sweep_cmd = app.add_subcommand("psweep", "large profiles as p -> 1");
  sweep_cmd->add_option("--f", sweep_f, "nonlinearity")->required();
  sweep_cmd->add_option("--R", sweep_R, "ball radius");
  sweep_cmd->add_option("--N", sweep_N, "dimension");
  sweep_cmd->add_option("--plist", sweep_plist, "decreasing comma-separated p values");
  sweep_cmd->add_option("--intervals", sweep_intervals, "mesh intervals on [0, R]");
  sweep_cmd->add_option("--out", sweep_out, "table CSV (p,interior_mean,center_bound,limit_ref)");

  // verify
  std::string suite = "all", verify_out;
  VerifyOptions vopt;
  auto* verify_cmd = app.add_subcommand("verify", "built-in verification suites");
  verify_cmd->add_option("--suite", suite, "disk, square, radial or all")->check(CLI::IsMember({"disk", "square", "radial", "all"}));
  verify_cmd->add_option("--h", vopt.h, "raster spacing");
  verify_cmd->add_option("--out", verify_out, "JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (workers > 0) setenv(kWorkersEnv, std::to_string(workers).c_str(), 1);

  if (*cheeger_cmd) {
    json rep{{"command", "cheeger"}, {"domain", cd.describe()}};
    CheegerResult k;
    if (cd.is_raster() || cheeger_h > 0.0) {
      k = cheeger(cd.raster(cheeger_h > 0.0 ? cheeger_h : kDefaultH));
      rep["backend"] = "mincut";
      if (!cd.is_raster()) rep["h"] = cheeger_h;
    } else {
      k = cheeger(cd.domain());
      rep["backend"] = "analytic";
    }
    rep["lambda_K"] = k.lambda_K;
    rep["ratio_check"] = k.ratio_check;
    rep["perimeter"] = k.cheeger_set.perimeter;
    rep["area"] = k.cheeger_set.area;
    emit(rep, cheeger_out);
    return 0;
  }

  if (*plambda_cmd) {
    LevelSet s;
    Mask mask;
    if (pd.is_raster() || plambda_backend == "mincut") {
      s = solve_plambda_mincut(pd.raster(plambda_h), lambda);
      mask = *s.mask;
    } else {
      const Domain dom = pd.domain();
      s = solve_plambda_convex(dom, lambda);
      const RasterDomain r = rasterize(dom, plambda_h);
      mask = Mask(r.geom());
      if (s.shape) {
        for (int j = 0; j < r.geom().ny; ++j) {
          for (int i = 0; i < r.geom().nx; ++i) {
            mask.cells[r.geom().index(i, j)] = r.mask().at(i, j) && s.shape->contains(r.geom().center(i, j));
          }
        }
      }
    }
    json rep = io::level_report(s);
    if (!plambda_out.empty()) io::write_mask(plambda_out, mask, rep);
    rep["command"] = "plambda";
    rep["backend"] = pd.is_raster() ? "mincut" : plambda_backend;
    rep["domain"] = pd.describe();
    rep["empty"] = s.empty();
    emit(rep, "");
    return 0;
  }

  if (*curvature_cmd || *large_cmd) {
    const bool large = large_cmd->parsed();
    const FieldArgs& a = large ? la : ca;
    std::optional<Nonlinearity> f;
    if (large) f = Nonlinearity::parse(a.f);
    const CurvatureField field = compute_field(a.d, a.lambda_max, a.h, a.points, a.backend);
    json rep{{"command", large ? "large" : "curvature"},
             {"domain", a.d.describe()},
             {"backend", a.d.is_raster() ? "mincut" : a.backend},
             {"defaults", {{"h", kDefaultH}, {"points", kDefaultPoints}}},
             {"field", field_summary(field)}};
    const MassReport mass = a.d.is_raster() ? mass_identities(field, a.d.raster(a.h)) : mass_identities(field, a.d.domain());
    rep["total_curvature"] = mass.total;
    rep["domain_perimeter"] = mass.perimeter;
    if (large) {
      const ScalarField u = large_solution(field, *f);
      double umin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < u.values.size(); ++k) {
        if (u.inside[k]) umin = std::min(umin, u.values[k]);
      }
      rep["f"] = f->name();
      rep["min_u"] = umin;
      if (!a.out.empty()) io::write_field(a.out, u);
    } else if (!a.out.empty()) {
      io::write_field(a.out, field);
    }
    emit(rep, "");
    return 0;
  }

  if (*ko_cmd) {
    const Nonlinearity f = Nonlinearity::parse(ko_f);
    const KOReport r = keller_osserman(f, ko_p);
    json rep{{"command", "ko"}, {"f", f.name()}, {"p", r.p}, {"result", r.finite ? "finite" : "infinite"},
             {"decade_increments", r.increments}, {"partial_sums", r.divergence_evidence}};
    if (r.finite) rep["value"] = r.value;
    emit(rep, "");
    return 0;
  }

  if (*radial_cmd) {
    if (!radial_large && !(radial_n > 0.0)) throw ConfigError("cli_runner", "radial", "give --n n > 0 or --large");
    const RadialProblem prob(radial_N, radial_R, Nonlinearity::parse(radial_f));
    const PParams pp(radial_p);
    const ShootingOptions opt{radial_intervals, 1e-8};
    const RadialProfile prof = radial_large ? large_profile(prob, pp, opt) : solve_dirichlet(prob, pp, radial_n, opt);
    if (!radial_out.empty()) io::write_profile_csv(radial_out, prof);
    json rep{{"command", "radial"}, {"f", prob.f.name()}, {"N", prob.N}, {"R", prob.R}, {"p", pp.p},
             {"center_value", prof.alpha}, {"center_bound", prof.bound.front()},
             {"boundary_value", prof.u.back()}, {"boundary_residual", prof.boundary_residual}};
    rep["datum"] = radial_large ? json("infinity") : json(prof.dirichlet_n);
    if (radial_large) rep["doublings"] = prof.doublings;
    emit(rep, "");
    return 0;
  }

  if (*sweep_cmd) {
    const RadialProblem prob(sweep_N, sweep_R, Nonlinearity::parse(sweep_f));
    const SweepTable t = p_sweep(prob, parse_plist(sweep_plist), {sweep_intervals, 1e-8});
    if (!sweep_out.empty()) io::write_sweep_csv(sweep_out, t);
    json rows = json::array();
    for (const auto& r : t.rows) {
      json row{{"p", r.p}, {"interior_mean", r.interior_mean}, {"center_value", r.center_value},
               {"center_bound", r.center_bound}, {"limit_ref", r.limit_ref}};
      if (!r.error.empty()) row["error"] = r.error;
      rows.push_back(row);
    }
    json rep{{"command", "psweep"}, {"f", prob.f.name()}, {"R", prob.R}, {"rows", rows}};
    if (t.limit_bound_global) rep["limit_bound_global"] = *t.limit_bound_global;
    if (t.limit_bound_optimal) rep["limit_bound_optimal"] = *t.limit_bound_optimal;
    emit(rep, "");
    if (!t.complete()) {
      std::cerr << "error: p_radial::p_sweep: some rows failed (see report)\n";
      return exit_code(ErrorKind::solver);
    }
    return 0;
  }

  if (*verify_cmd) {
    const VerifyReport r = verify_suite(suite, vopt);
    json rep = r.to_json();
    rep["defaults"] = {{"h", vopt.h}, {"points", vopt.grid_points}, {"radial_intervals", vopt.radial_intervals}};
    for (const auto& c : r.checks) {
      std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  computed=" << c.computed << " expected=" << c.expected;
      if (!c.note.empty()) std::cerr << "  (" << c.note << ")";
      std::cerr << "\n";
    }
    emit(rep, verify_out);
    if (!r.pass()) {
      std::cerr << "error: cli_runner::verify: suite " << suite << " has failing checks\n";
      return exit_code(ErrorKind::verification);
    }
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const largesol::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return largesol::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: cli_runner::run: " << e.what() << "\n";
    return largesol::exit_code(largesol::ErrorKind::solver);
  }
}
