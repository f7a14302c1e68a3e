#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/geometry.hpp"
#include "cheegerlab/shapeopt.hpp"

namespace cheegerlab {

/// Shape strings:
///   disk:cx,cy,r          rect:x,y,w,h          polygon:x1,y1,x2,y2,...
///   unit-disk             unit-square           l-shape
///   annulus               punctured-disk        rect-<aspect>
///   ellipse-<aspect>      stadium-<aspect>
ShapePtr parse_shape(const std::string& spec);

/// True for the convex entries of the grammar (disks, rectangles, ellipses, stadiums).
bool is_convex_shape(const std::string& spec);

/// Grid over the shape's bounding box, widened by 5% per side (at least two
/// cells) when `margin` is set. The spacing is the long side over
/// `resolution`, reduced when needed to keep min_short_cells across the
/// short side.
Grid2D domain_grid(const ShapeSpec& shape, int resolution, int min_short_cells = 0, bool margin = true);

/// Everything one command run depends on. Stored as flat key=value lines;
/// list keys (shape, p, q, puncture) repeat once per entry.
struct ExperimentConfig {
  std::string command = "ratio";
  std::vector<std::string> shapes{"unit-disk"};
  std::string domain = "unit-square";  // D of the optimize command
  int resolution = 128;
  int min_short_cells = 16;
  std::vector<double> p{2.0};
  std::vector<double> q{1.0};
  PerimeterMode mode = PerimeterMode::isotropic;
  SolverOptions solver;  // seed field unused; see `seed`
  AnnealOptions anneal;  // seed field unused; see `seed`
  std::uint64_t seed = 7;
  std::string output = "out";
  std::string battery = "default";
  double monotonicity_slack = 0.02;
  std::vector<int> punctures{0, 5, 20, 80};
  std::string family = "rectangle";

  /// Solver and anneal options with the run seed applied.
  SolverOptions solver_options() const;
  AnnealOptions anneal_options() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

inline const std::vector<std::string> kCommands{"eigen", "cheeger", "torsion", "ratio", "verify",
                                               "optimize", "sweep", "puncture"};

/// Applies "key=value" lines on top of `base`. Blank lines and lines starting
/// with '#' are skipped. The first occurrence of a list key replaces the
/// list, later occurrences append. Unknown keys and bad values throw
/// InvalidArgument.
ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {});
ExperimentConfig parse_config_string(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Applies one "key=value" assignment.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value, bool append);

/// Canonical form: every key once in a fixed order, lists as repeated keys.
std::string serialize_config(const ExperimentConfig& cfg);

/// Throws InvalidArgument when the configuration cannot run.
void validate_config(const ExperimentConfig& cfg);

}  // namespace cheegerlab
