#include "cheegerlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cheegerlab/battery.hpp"
#include "cheegerlab/cheeger.hpp"
#include "cheegerlab/config.hpp"
#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/io.hpp"
#include "cheegerlab/ratio.hpp"
#include "cheegerlab/shapeopt.hpp"
#include "cheegerlab/sweep.hpp"

#ifndef CHEEGERLAB_VERSION
#define CHEEGERLAB_VERSION "unknown"
#endif

namespace cheegerlab {

namespace fs = std::filesystem;

namespace {

/// Raised when verification rows fail; maps to exit code 1.
struct ChecksFailed {
  std::size_t failures;
};

struct Flags {
  std::string config_file;
  std::vector<std::string> sets;
  std::vector<std::string> shapes;
  std::string domain;
  std::vector<std::string> p, q;
  std::vector<int> punctures;
  std::string mode, out, battery, family;
  int grid = 0, min_short_cells = -1, max_iterations = 0, inner_iterations = 0, steps = -1, batch = 0;
  double tolerance = 0.0, temperature = 0.0, cooling = 0.0, slack = std::nan("");
  long long seed = -1;
  bool repair = false;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_file, "key=value configuration file");
  cmd->add_option("--set", f.sets, "extra key=value assignment (repeatable)");
  cmd->add_option("--shape", f.shapes, "shape, e.g. disk:0.5,0.5,0.4 or unit-square (repeatable)");
  cmd->add_option("--grid", f.grid, "cells along the long side of the domain box");
  cmd->add_option("--min-short-cells", f.min_short_cells, "minimum cells across the short side");
  cmd->add_option("--p", f.p, "exponent p (number or inf)");
  cmd->add_option("--q", f.q, "exponent q (number or inf)");
  cmd->add_option("--seed", f.seed, "run seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--tolerance", f.tolerance, "relative objective change per step");
  cmd->add_option("--max-iterations", f.max_iterations, "solver iteration cap");
  cmd->add_option("--inner-iterations", f.inner_iterations, "primal-dual iterations per Cheeger step");
}

ExperimentConfig build_config(const std::string& command, const Flags& f) {
  ExperimentConfig cfg;
  if (!f.config_file.empty()) cfg = load_config(f.config_file, cfg);
  cfg.command = command;
  std::vector<std::string> seen;
  auto set = [&](const std::string& key, const std::string& value) {
    const bool append = std::find(seen.begin(), seen.end(), key) != seen.end();
    set_config_value(cfg, key, value, append);
    seen.push_back(key);
  };
  for (const auto& a : f.sets) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + a + "'");
    set(a.substr(0, eq), a.substr(eq + 1));
  }
  for (const auto& s : f.shapes) set("shape", s);
  if (!f.domain.empty()) set("domain", f.domain);
  for (const auto& p : f.p) set("p", p);
  for (const auto& q : f.q) set("q", q);
  for (int n : f.punctures) set("puncture", std::to_string(n));
  if (!f.mode.empty()) set("mode", f.mode);
  if (!f.out.empty()) set("output", f.out);
  if (!f.battery.empty()) set("battery", f.battery);
  if (!f.family.empty()) set("family", f.family);
  if (f.grid != 0) set("resolution", std::to_string(f.grid));
  if (f.min_short_cells >= 0) set("min_short_cells", std::to_string(f.min_short_cells));
  if (f.max_iterations != 0) set("max_iterations", std::to_string(f.max_iterations));
  if (f.inner_iterations != 0) set("inner_iterations", std::to_string(f.inner_iterations));
  if (f.steps >= 0) set("steps", std::to_string(f.steps));
  if (f.batch != 0) set("batch", std::to_string(f.batch));
  if (f.tolerance != 0.0) set("tolerance", format_double(f.tolerance));
  if (f.temperature != 0.0) set("temperature", format_double(f.temperature));
  if (f.cooling != 0.0) set("cooling", format_double(f.cooling));
  if (!std::isnan(f.slack)) set("monotonicity_slack", format_double(f.slack));
  if (f.seed >= 0) set("seed", std::to_string(f.seed));
  if (f.repair) set("repair", "true");
  validate_config(cfg);
  return cfg;
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg) {
  std::ofstream os(dir / "manifest.txt", std::ios::binary);
  if (!os) throw Error("cannot write manifest");
  os << "# cheegerlab run manifest\n";
  os << "version=" << CHEEGERLAB_VERSION << "\n";
#if defined(__VERSION__)
  os << "compiler=" << __VERSION__ << "\n";
#endif
  os << serialize_config(cfg);
}

struct Domain {
  std::string name;
  Grid2D grid;
  DomainMask mask;
};

Domain load_domain(const ExperimentConfig& cfg) {
  if (cfg.shapes.size() != 1) throw InvalidArgument("this command takes exactly one shape");
  Domain d;
  d.name = cfg.shapes.front();
  const ShapePtr shape = parse_shape(d.name);
  d.grid = domain_grid(*shape, cfg.resolution, cfg.min_short_cells);
  d.mask = rasterize(*shape, d.grid);
  return d;
}

std::string fmt(double v) { return format_double(v); }

// CSV cells never carry commas; shape strings use ';' in their place.
std::string cell(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  return s;
}

void write_checks(const fs::path& path, const CheckReport& report) {
  CsvWriter csv(path, {"check", "domain", "p", "q", "lhs_dimensionless", "rhs_dimensionless",
                       "margin_dimensionless", "pass", "reference"});
  for (const Check& c : report.rows) {
    csv.row({c.name, cell(c.domain), format_exponent(c.p), format_exponent(c.q), fmt(c.lhs), fmt(c.rhs), fmt(c.margin),
             c.pass ? "true" : "false", cell(c.reference)});
  }
}

int cmd_eigen(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const Domain d = load_domain(cfg);
  const double p = cfg.p.front();
  const EigenResult r = principal_eigen(d.mask, d.grid, p, cfg.solver_options());
  write_field_pgm(dir / "field_eigen.pgm", r.eigenfunction);
  write_field_csv(dir / "field_eigen.csv", r.eigenfunction, "u_per_length^(2/p)");
  {
    CsvWriter csv(dir / "history.csv", {"iteration", "rayleigh_quotient_per_length^p"});
    for (std::size_t k = 0; k < r.history.size(); ++k) csv.row({std::to_string(k), fmt(r.history[k])});
  }
  CsvWriter csv(dir / "report.csv", {"domain", "p", "lambda_per_length^p", "lambda_root_per_length", "iterations",
                                     "residual", "converged"});
  csv.row({cell(d.name), format_exponent(p), fmt(r.lambda), fmt(std::pow(r.lambda, 1.0 / p)), std::to_string(r.iterations),
           fmt(r.residual), r.converged ? "true" : "false"});
  out << "eigen " << d.name << " p=" << format_exponent(p) << " lambda=" << fmt(r.lambda)
      << " iterations=" << r.iterations << "\n";
  return 0;
}

int cmd_cheeger(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const Domain d = load_domain(cfg);
  const CheegerResult r = cheeger_dinkelbach(d.mask, d.grid, cfg.mode, cfg.solver_options());
  write_mask_pgm(dir / "mask_cheeger.pgm", r.cheeger_set, d.grid);
  {
    CsvWriter csv(dir / "history.csv", {"iteration", "h_per_length"});
    for (std::size_t k = 0; k < r.history.size(); ++k) csv.row({std::to_string(k), fmt(r.history[k])});
  }
  const PerimeterArea pa = perimeter_area(r.cheeger_set, d.grid, cfg.mode);
  CsvWriter csv(dir / "report.csv", {"domain", "mode", "h_per_length", "perimeter_length", "area_length^2",
                                     "iterations", "inner_iterations"});
  csv.row({cell(d.name), to_string(cfg.mode), fmt(r.h), fmt(pa.perimeter), fmt(pa.area), std::to_string(r.iterations),
           std::to_string(r.inner_iterations)});
  out << "cheeger " << d.name << " mode=" << to_string(cfg.mode) << " h=" << fmt(r.h) << "\n";
  return 0;
}

int cmd_torsion(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const Domain d = load_domain(cfg);
  const double p = cfg.p.front();
  const TorsionResult r = torsion(d.mask, d.grid, p, cfg.solver_options());
  write_field_pgm(dir / "field_torsion.pgm", r.field);
  write_field_csv(dir / "field_torsion.csv", r.field, "w_length^(p/(p-1))");
  const double max_w = *std::max_element(r.field.values.begin(), r.field.values.end());
  CsvWriter csv(dir / "report.csv", {"domain", "p", "max_w_length^(p/(p-1))", "energy_length^((3p-2)/(p-1))",
                                     "iterations", "clamp_magnitude"});
  csv.row({cell(d.name), format_exponent(p), fmt(max_w), fmt(r.energy), std::to_string(r.iterations),
           fmt(r.clamp_magnitude)});
  out << "torsion " << d.name << " p=" << format_exponent(p) << " max_w=" << fmt(max_w) << " energy=" << fmt(r.energy)
      << "\n";
  return 0;
}

const std::vector<std::string> kReportHeader{"domain",
                                             "p",
                                             "q",
                                             "lambda_root_p_per_length",
                                             "lambda_root_q_per_length",
                                             "F_dimensionless",
                                             "checks_passed"};

int cmd_ratio(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const Domain d = load_domain(cfg);
  const RatioReport r = ratio_F(d.mask, d.grid, cfg.p.front(), cfg.q.front(), cfg.solver_options(), d.name);
  const CheckReport checks =
      verify_inequalities(r, is_convex_shape(d.name) && r.p == 2.0 && r.q == 1.0);
  write_checks(dir / "checks.csv", checks);
  CsvWriter csv(dir / "report.csv", kReportHeader);
  const std::size_t passed = checks.rows.size() - checks.failures();
  csv.row({cell(d.name), format_exponent(r.p), format_exponent(r.q), fmt(r.lambda_root_p), fmt(r.lambda_root_q), fmt(r.F),
           std::to_string(passed) + "/" + std::to_string(checks.rows.size())});
  out << "ratio " << d.name << " p=" << format_exponent(r.p) << " q=" << format_exponent(r.q) << " F=" << fmt(r.F)
      << "\n";
  return 0;
}

int cmd_verify(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const CheckReport report = run_battery(battery_from_config(cfg));
  write_checks(dir / "checks.csv", report);
  out << "verify rows=" << report.rows.size() << " failed=" << report.failures() << "\n";
  if (!report.all_passed()) throw ChecksFailed{report.failures()};
  return 0;
}

int cmd_optimize(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const ShapePtr D = parse_shape(cfg.domain);
  const Grid2D grid = domain_grid(*D, cfg.resolution, 0, false);
  const ShapeOptResult r =
      optimize_mask(*D, grid, cfg.p.front(), cfg.q.front(), cfg.anneal_options(), cfg.solver_options());
  {
    CsvWriter csv(dir / "trace.csv", {"step", "F_dimensionless", "best_F_dimensionless", "accepted",
                                      "temperature_dimensionless"});
    for (const TraceEntry& e : r.trace)
      csv.row({std::to_string(e.step), fmt(e.F), fmt(e.best_F), e.accepted ? "true" : "false", fmt(e.temperature)});
  }
  write_mask_pgm(dir / "mask_initial.pgm", r.initial_mask, grid);
  write_mask_pgm(dir / "mask_best.pgm", r.best_mask, grid);
  if (r.rescaled) write_mask_pgm(dir / "mask_best_rescaled.pgm", r.best_mask, r.rescaled_grid);
  CsvWriter csv(dir / "report.csv", {"domain", "p", "q", "initial_F_dimensionless", "best_F_dimensionless",
                                     "accepted", "rescale_t_dimensionless", "lambda_p_rescaled_per_length^p",
                                     "degenerate"});
  csv.row({cell(cfg.domain), format_exponent(cfg.p.front()), format_exponent(cfg.q.front()), fmt(r.initial_F),
           fmt(r.best_F), std::to_string(r.accepted), fmt(r.rescale_t), fmt(r.lambda_p_rescaled),
           r.degenerate ? "true" : "false"});
  out << "optimize " << cfg.domain << " best_F=" << fmt(r.best_F) << " initial_F=" << fmt(r.initial_F)
      << " t=" << fmt(r.rescale_t) << " lambda_p=" << fmt(r.lambda_p_rescaled)
      << (r.degenerate ? " warning=all-proposals-rejected" : "") << "\n";
  return 0;
}

void write_punctures(const fs::path& path, const std::vector<PunctureRow>& rows, double p, double q) {
  CsvWriter csv(path, {"n", "p", "q", "removed_cells", "inradius_length", "lambda_root_p_per_length",
                       "lambda_root_q_per_length", "F_dimensionless"});
  for (const PunctureRow& r : rows)
    csv.row({std::to_string(r.n), format_exponent(p), format_exponent(q), std::to_string(r.removed_cells),
             fmt(r.inradius), fmt(r.lambda_root_p), fmt(r.lambda_root_q), fmt(r.F)});
}

int cmd_sweep(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  SweepOptions opts;
  opts.resolution = cfg.resolution;
  opts.min_short_cells = cfg.min_short_cells;
  opts.solver = cfg.solver_options();
  opts.punctures = cfg.punctures;
  opts.seed = cfg.seed;
  const SweepReport report = run_sweep(cfg.shapes, cfg.p, cfg.q, opts);
  {
    auto header = kReportHeader;
    header.push_back("error");
    CsvWriter csv(dir / "report.csv", header);
    for (const SweepRow& r : report.rows) {
      csv.row({cell(r.domain), format_exponent(r.p), format_exponent(r.q), fmt(r.lambda_root_p), fmt(r.lambda_root_q),
               fmt(r.F), std::to_string(r.checks_passed) + "/" + std::to_string(r.checks_total), cell(r.error)});
      out << "sweep " << r.domain << " p=" << format_exponent(r.p) << " q=" << format_exponent(r.q)
          << (r.ok() ? " F=" + fmt(r.F) : " error=" + r.error) << "\n";
    }
  }
  CsvWriter csv(dir / "summary.csv", {"p", "q", "min_F_dimensionless", "min_domain", "max_F_dimensionless",
                                      "max_domain", "note"});
  for (const SweepSummary& s : report.summaries) {
    csv.row({format_exponent(s.p), format_exponent(s.q), fmt(s.min_F), cell(s.min_domain), fmt(s.max_F),
             cell(s.max_domain), cell(s.note)});
    if (!s.punctures.empty())
      write_punctures(dir / ("punctures_p" + format_exponent(s.p) + "_q" + format_exponent(s.q) + ".csv"),
                      s.punctures, s.p, s.q);
  }
  return 0;
}

int cmd_puncture(const ExperimentConfig& cfg, const fs::path& dir, std::ostream& out) {
  const Grid2D grid = make_grid(cfg.resolution, cfg.resolution, {2.2, 2.2}, {-1.1, -1.1});
  const double p = cfg.p.front(), q = cfg.q.front();
  if (!(q <= 2.0 && p >= 2.0)) throw InvalidArgument("puncture experiment needs q <= 2 <= p");
  const auto rows = puncture_experiment(cfg.punctures, p, q, grid, cfg.seed, cfg.solver_options());
  write_punctures(dir / "report.csv", rows, p, q);
  for (const PunctureRow& r : rows)
    out << "puncture n=" << r.n << " inradius=" << fmt(r.inradius) << " F=" << fmt(r.F) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalues, Cheeger constants and the ratio F_{p,q} on planar grid domains", "cheegerlab"};
  app.set_version_flag("--version", std::string(CHEEGERLAB_VERSION));
  app.require_subcommand(1, 1);
  Flags f;
  auto* eigen = app.add_subcommand("eigen", "first Dirichlet eigenvalue of the p-Laplacian");
  auto* cheeger = app.add_subcommand("cheeger", "Cheeger constant and Cheeger set");
  auto* tors = app.add_subcommand("torsion", "p-torsion function");
  auto* ratio = app.add_subcommand("ratio", "F_{p,q} with inequality checks");
  auto* verify = app.add_subcommand("verify", "run the verification battery");
  auto* optimize = app.add_subcommand("optimize", "anneal F_{p,q} over masks inside a domain");
  auto* sweep = app.add_subcommand("sweep", "F_{p,q} over domains x p x q");
  auto* puncture = app.add_subcommand("puncture", "F_{p,q} of the unit disk minus n points");
  for (auto* c : {eigen, cheeger, tors, ratio, verify, optimize, sweep, puncture}) add_common(c, f);
  cheeger->add_option("--mode", f.mode, "isotropic or anisotropic");
  verify->add_option("--battery", f.battery, "default, none, or a comma-separated domain list");
  verify->add_option("--slack", f.slack, "relative slack of the monotonicity rows");
  optimize->add_option("--domain", f.domain, "containing domain D");
  optimize->add_option("--steps", f.steps, "annealing steps");
  optimize->add_option("--batch", f.batch, "cells flipped per proposal");
  optimize->add_option("--temperature", f.temperature, "initial temperature");
  optimize->add_option("--cooling", f.cooling, "cooling factor per step");
  optimize->add_flag("--repair", f.repair, "keep the largest connected component");
  sweep->add_option("--puncture", f.punctures, "puncture counts attached to the summary");
  puncture->add_option("--n", f.punctures, "puncture counts");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << CHEEGERLAB_VERSION << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  try {
    const ExperimentConfig cfg = build_config(command, f);
    const fs::path dir = cfg.output;
    ensure_directory(dir);
    write_manifest(dir, cfg);
    if (command == "eigen") return cmd_eigen(cfg, dir, out);
    if (command == "cheeger") return cmd_cheeger(cfg, dir, out);
    if (command == "torsion") return cmd_torsion(cfg, dir, out);
    if (command == "ratio") return cmd_ratio(cfg, dir, out);
    if (command == "verify") return cmd_verify(cfg, dir, out);
    if (command == "optimize") return cmd_optimize(cfg, dir, out);
    if (command == "sweep") return cmd_sweep(cfg, dir, out);
    if (command == "puncture") return cmd_puncture(cfg, dir, out);
  } catch (const ChecksFailed& e) {
    err << "error: " << e.failures << " verification rows failed\n";
    return 1;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: unknown command\n" << app.help();
  return 2;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace cheegerlab
