#include "cheegerlab/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "cheegerlab/error.hpp"
#include "cheegerlab/io.hpp"
#include "cheegerlab/ratio.hpp"

namespace cheegerlab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& s) {
  const std::string t = trim(s);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InvalidArgument("not a number: '" + s + "'");
  return v;
}

template <class Int>
Int parse_integer(const std::string& s) {
  const std::string t = trim(s);
  Int v{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw InvalidArgument("not an integer: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  const std::string t = trim(s);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InvalidArgument("not a boolean: '" + s + "'");
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item));
  return out;
}

std::vector<double> expect_numbers(const std::string& args, std::size_t count, const std::string& spec) {
  auto v = parse_numbers(args);
  if (v.size() != count) throw InvalidArgument("shape '" + spec + "' needs " + std::to_string(count) + " numbers");
  return v;
}

double suffix_number(const std::string& spec, const std::string& prefix) {
  return parse_number(spec.substr(prefix.size()));
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

ShapePtr parse_shape(const std::string& raw) {
  const std::string spec = trim(raw);
  if (spec == "unit-disk") return make_disk({0.0, 0.0}, 1.0);
  if (spec == "unit-square") return make_rectangle({0.0, 0.0}, 1.0, 1.0);
  if (spec == "l-shape")
    return make_polygon({{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}});
  if (spec == "annulus") return make_difference(make_disk({0.0, 0.0}, 1.0), make_disk({0.0, 0.0}, 0.5));
  if (spec == "punctured-disk") {
    std::vector<Point2> points;
    for (std::uint64_t k = 1; k <= 5; ++k) points.push_back(halton_disk_point(k));
    return make_punctured(make_disk({0.0, 0.0}, 1.0), std::move(points), 1.0);
  }
  if (starts_with(spec, "rect-")) return family_shape(Family::rectangle, suffix_number(spec, "rect-"));
  if (starts_with(spec, "ellipse-")) return family_shape(Family::ellipse, suffix_number(spec, "ellipse-"));
  if (starts_with(spec, "stadium-")) return family_shape(Family::stadium, suffix_number(spec, "stadium-"));

  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InvalidArgument("unknown shape '" + spec + "'");
  const std::string kind = spec.substr(0, colon), args = spec.substr(colon + 1);
  ShapePtr shape;
  if (kind == "disk") {
    const auto v = expect_numbers(args, 3, spec);
    shape = make_disk({v[0], v[1]}, v[2]);
  } else if (kind == "rect" || kind == "rectangle") {
    const auto v = expect_numbers(args, 4, spec);
    shape = make_rectangle({v[0], v[1]}, v[2], v[3]);
  } else if (kind == "polygon") {
    const auto v = parse_numbers(args);
    if (v.size() < 6 || v.size() % 2 != 0) throw InvalidArgument("polygon needs at least three x,y pairs");
    std::vector<Point2> pts;
    for (std::size_t k = 0; k < v.size(); k += 2) pts.push_back({v[k], v[k + 1]});
    shape = make_polygon(std::move(pts));
  } else {
    throw InvalidArgument("unknown shape '" + spec + "'");
  }
  validate(*shape);
  return shape;
}

bool is_convex_shape(const std::string& raw) {
  const std::string spec = trim(raw);
  return spec == "unit-disk" || spec == "unit-square" || starts_with(spec, "rect-") || starts_with(spec, "ellipse-") ||
         starts_with(spec, "stadium-") || starts_with(spec, "disk:") || starts_with(spec, "rect:") ||
         starts_with(spec, "rectangle:");
}

Grid2D domain_grid(const ShapeSpec& shape, int resolution, int min_short_cells, bool margin) {
  if (resolution < 2) throw InvalidArgument("resolution must be at least 2");
  const BoundingBox bb = bounding_box(shape);
  const double w = bb.hi.x - bb.lo.x, hgt = bb.hi.y - bb.lo.y;
  const double long_side = std::max(w, hgt), short_side = std::min(w, hgt);
  double h = long_side / resolution;
  if (min_short_cells > 0) h = std::min(h, short_side / min_short_cells);
  const double mx = margin ? std::max(0.05 * w, 2.0 * h) : 0.0;
  const double my = margin ? std::max(0.05 * hgt, 2.0 * h) : 0.0;
  const int nx = static_cast<int>(std::ceil((w + 2.0 * mx) / h - 1e-9));
  const int ny = static_cast<int>(std::ceil((hgt + 2.0 * my) / h - 1e-9));
  // Center the shape in the (slightly larger) whole-cell box.
  const double ox = bb.lo.x - 0.5 * (nx * h - w), oy = bb.lo.y - 0.5 * (ny * h - hgt);
  return make_grid(nx, ny, {nx * h, ny * h}, {ox, oy});
}

SolverOptions ExperimentConfig::solver_options() const {
  SolverOptions s = solver;
  s.seed = seed;
  return s;
}

AnnealOptions ExperimentConfig::anneal_options() const {
  AnnealOptions a = anneal;
  a.seed = seed;
  return a;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& raw, bool append) {
  const std::string value = trim(raw);
  if (key == "command") {
    cfg.command = value;
  } else if (key == "shape") {
    if (!append) cfg.shapes.clear();
    cfg.shapes.push_back(value);
  } else if (key == "domain") {
    cfg.domain = value;
  } else if (key == "resolution") {
    cfg.resolution = parse_integer<int>(value);
  } else if (key == "min_short_cells") {
    cfg.min_short_cells = parse_integer<int>(value);
  } else if (key == "p" || key == "q") {
    auto& list = key == "p" ? cfg.p : cfg.q;
    if (!append) list.clear();
    list.push_back(parse_exponent(value));
  } else if (key == "mode") {
    cfg.mode = perimeter_mode_from_string(value);
  } else if (key == "max_iterations") {
    cfg.solver.max_iterations = parse_integer<int>(value);
  } else if (key == "tolerance") {
    cfg.solver.tolerance = parse_number(value);
  } else if (key == "inner_iterations") {
    cfg.solver.inner_iterations = parse_integer<int>(value);
  } else if (key == "continuation") {
    cfg.solver.continuation = parse_bool(value);
  } else if (key == "steps") {
    cfg.anneal.steps = parse_integer<int>(value);
  } else if (key == "temperature") {
    cfg.anneal.initial_temperature = parse_number(value);
  } else if (key == "cooling") {
    cfg.anneal.cooling = parse_number(value);
  } else if (key == "batch") {
    cfg.anneal.batch = parse_integer<int>(value);
  } else if (key == "repair") {
    cfg.anneal.connectivity_repair = parse_bool(value);
  } else if (key == "seed") {
    cfg.seed = parse_integer<std::uint64_t>(value);
  } else if (key == "output") {
    cfg.output = value;
  } else if (key == "battery") {
    cfg.battery = value;
  } else if (key == "monotonicity_slack") {
    cfg.monotonicity_slack = parse_number(value);
  } else if (key == "puncture") {
    if (!append) cfg.punctures.clear();
    cfg.punctures.push_back(parse_integer<int>(value));
  } else if (key == "family") {
    cfg.family = value;
  } else {
    throw InvalidArgument("unknown configuration key '" + key + "'");
  }
}

ExperimentConfig parse_config(std::istream& is, ExperimentConfig base) {
  std::vector<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const bool append = std::find(seen.begin(), seen.end(), key) != seen.end();
    set_config_value(base, key, t.substr(eq + 1), append);
    seen.push_back(key);
  }
  return base;
}

ExperimentConfig parse_config_string(const std::string& text, ExperimentConfig base) {
  std::istringstream is(text);
  return parse_config(is, std::move(base));
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot read configuration '" + path + "'");
  return parse_config(is, std::move(base));
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  auto line = [&](const char* key, const std::string& v) { os << key << '=' << v << '\n'; };
  line("command", cfg.command);
  for (const auto& s : cfg.shapes) line("shape", s);
  line("domain", cfg.domain);
  line("resolution", std::to_string(cfg.resolution));
  line("min_short_cells", std::to_string(cfg.min_short_cells));
  for (double p : cfg.p) line("p", format_exponent(p));
  for (double q : cfg.q) line("q", format_exponent(q));
  line("mode", to_string(cfg.mode));
  line("max_iterations", std::to_string(cfg.solver.max_iterations));
  line("tolerance", format_double(cfg.solver.tolerance));
  line("inner_iterations", std::to_string(cfg.solver.inner_iterations));
  line("continuation", cfg.solver.continuation ? "true" : "false");
  line("steps", std::to_string(cfg.anneal.steps));
  line("temperature", format_double(cfg.anneal.initial_temperature));
  line("cooling", format_double(cfg.anneal.cooling));
  line("batch", std::to_string(cfg.anneal.batch));
  line("repair", cfg.anneal.connectivity_repair ? "true" : "false");
  line("seed", std::to_string(cfg.seed));
  line("output", cfg.output);
  line("battery", cfg.battery);
  line("monotonicity_slack", format_double(cfg.monotonicity_slack));
  for (int n : cfg.punctures) line("puncture", std::to_string(n));
  line("family", cfg.family);
  return os.str();
}

void validate_config(const ExperimentConfig& cfg) {
  if (std::find(kCommands.begin(), kCommands.end(), cfg.command) == kCommands.end())
    throw InvalidArgument("unknown command '" + cfg.command + "'");
  if (cfg.resolution < 16 || cfg.resolution > 1024) throw InvalidArgument("resolution must lie in [16, 1024]");
  if (cfg.min_short_cells < 0) throw InvalidArgument("min_short_cells must be non-negative");
  check_options(cfg.solver_options());
  check_anneal(cfg.anneal_options());
  for (const auto& s : cfg.shapes) parse_shape(s);
  parse_shape(cfg.domain);
  family_from_string(cfg.family);
  if (cfg.output.empty()) throw InvalidArgument("output directory must be named");
  if (cfg.output.find_first_of("\n\r") != std::string::npos) throw InvalidArgument("bad output directory");
  for (double p : cfg.p)
    if (!(p >= 1.0)) throw InvalidArgument("exponents must lie in [1, inf]");
  for (double q : cfg.q)
    if (!(q >= 1.0)) throw InvalidArgument("exponents must lie in [1, inf]");
  for (int n : cfg.punctures)
    if (n < 0) throw InvalidArgument("puncture count must be non-negative");
  const bool pairs = cfg.command == "ratio" || cfg.command == "sweep" || cfg.command == "optimize" ||
                     cfg.command == "puncture";
  if (pairs) {
    if (cfg.p.empty() || cfg.q.empty()) throw InvalidArgument("p and q lists must be non-empty");
    for (double p : cfg.p)
      for (double q : cfg.q) check_regime(p, q);
  }
  if (cfg.command != "sweep" && (cfg.p.size() > 1 || cfg.q.size() > 1) && cfg.command != "verify")
    throw InvalidArgument("only sweep takes several exponents");
  if (cfg.shapes.empty() && cfg.command != "optimize" && cfg.command != "puncture" && cfg.command != "verify")
    throw InvalidArgument("no shape given");
}

}  // namespace cheegerlab
