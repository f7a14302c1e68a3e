#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cheegerlab/config.hpp"
#include "cheegerlab/ratio.hpp"

namespace cheegerlab {

struct BatteryOptions {
  std::vector<std::string> domains;
  std::vector<std::pair<double, double>> pairs;  // (p, q)
  int resolution = 128;
  int min_short_cells = 16;

  std::vector<std::string> monotonicity_domains{"unit-disk", "unit-square"};
  std::vector<double> monotonicity_p{1.0, 1.5, 2.0, 3.0, 4.0};
  double monotonicity_slack = 0.02;  // relative

  std::vector<double> one_d_lengths{0.5, 1.0, 2.0};
  int one_d_nodes = 2000;
  double one_d_tolerance = 0.005;  // relative

  SolverOptions solver;
};

/// disk, square, rectangles 1 x {0.5, 0.2, 0.1, 0.05}, L-shape, annulus, punctured disk.
std::vector<std::string> default_battery_domains();
/// (2,1) (3,1) (3,2) (4,2) (inf,1) (inf,2)
std::vector<std::pair<double, double>> default_battery_pairs();

/// battery=default selects the standard domains; otherwise the value is a
/// comma-separated domain list ("none" for an empty list).
BatteryOptions battery_from_config(const ExperimentConfig& cfg);

/// Runs every check suite on the battery; one row per (domain, check).
///   generalized / cheeger / convex_lower / convex_upper   per domain and pair
///                                     (convex rows at (2,1) on convex domains)
///   monotonicity        p lambda_p^(1/p) >= (1 - slack) x previous value
///   domain_monotonicity lambda_2 and h of nested battery domains
///   scaling             Rayleigh quotient of a fixed field under spacing 2h
///   one_d               1-D F_{p,q} against pi_p / pi_q for each length
/// Throws InvalidArgument("nothing to verify") on an empty domain list.
CheckReport run_battery(const BatteryOptions& opts);

}  // namespace cheegerlab
