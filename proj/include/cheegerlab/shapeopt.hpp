#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/geometry.hpp"
#include "cheegerlab/ratio.hpp"

namespace cheegerlab {

struct RescaleResult {
  double t = 1.0;
  Grid2D grid;  // rescale_spacing(grid, t)
  double lambda = 0.0;  // lambda_p of the mask on the original grid
};

/// t with lambda_p(t Omega) = t^-p lambda_p(Omega) = 1, i.e. t = lambda^(1/p).
/// With `strict`, t > 1 is rejected because t Omega would leave D.
double constraint_scale(double lambda, double p, bool strict = false);
RescaleResult rescale_to_constraint(const DomainMask& mask, const Grid2D& grid, double p,
                                    const SolverOptions& opts = {}, bool strict = false);

struct AnnealOptions {
  int steps = 2000;
  double initial_temperature = 0.01;  // in units of F
  double cooling = 0.998;  // per step
  int batch = 4;  // cells flipped per proposal
  std::uint64_t seed = 7;
  bool connectivity_repair = false;  // keep the largest 4-connected component

  friend bool operator==(const AnnealOptions&, const AnnealOptions&) = default;
};

void check_anneal(const AnnealOptions& opts);

struct TraceEntry {
  int step = 0;
  double F = 0.0;  // F of the proposal (of the initial mask at step 0)
  double best_F = 0.0;  // best seen up to and including this step
  bool accepted = false;
  double temperature = 0.0;
};

struct ShapeOptResult {
  DomainMask initial_mask;
  double initial_F = 0.0;
  DomainMask best_mask;
  double best_F = 0.0;
  std::vector<TraceEntry> trace;
  int accepted = 0;
  int solver_failures = 0;  // proposals rejected because a solve failed
  bool degenerate = false;  // no proposal was ever accepted

  // Normalization lambda_p(t Omega) = 1 of the best mask (p < inf only).
  bool rescaled = false;
  double rescale_t = 1.0;
  Grid2D rescaled_grid;
  double lambda_p_rescaled = 0.0;  // re-solved on rescaled_grid
};

/// Random union of disks inside `domain`, reduced to its largest component.
DomainMask random_blob(const DomainMask& domain, const Grid2D& grid, std::uint64_t seed);

/// Simulated annealing of F_{p,q} over masks inside D.
///
/// Each step flips a batch of frontier cells of one kind (all additions or
/// all removals) clustered around a random frontier cell, evaluates F with
/// warm-started solvers and accepts by the Metropolis rule
/// exp(-(F_new - F) / T) with T = T0 cooling^step. The best mask seen is
/// returned and, for p < inf, rescaled so that lambda_p = 1.
/// `initial` replaces the random blob start (intersected with D).
ShapeOptResult optimize_mask(const ShapeSpec& domain, const Grid2D& grid, double p, double q,
                             const AnnealOptions& anneal, const SolverOptions& solver = {},
                             const DomainMask* initial = nullptr);

// ---------------------------------------------------------------------------
// Parametric families

enum class Family { rectangle, ellipse, stadium };

std::string to_string(Family family);
Family family_from_string(const std::string& s);

/// Member of a family with long side `length` along x and short side
/// aspect * length; the stadium has semicircular caps of diameter aspect * length.
ShapePtr family_shape(Family family, double aspect, double length = 1.0);

struct ParametricOptions {
  double aspect_lo = 0.05;
  double aspect_hi = 1.0;
  std::vector<double> sample_aspects{1.0, 0.5, 0.2, 0.1, 0.05};
  int golden_iterations = 10;
  bool maximize = false;
  double length = 1.0;
  int long_cells = 256;  // cells along the long side
  int min_short_cells = 32;  // at least this many cells across the short side
  SolverOptions solver;
};

void check_parametric(const ParametricOptions& opts);

struct ParametricSample {
  double aspect = 0.0;
  double F = 0.0;
  double lambda_root_p = 0.0;
  double lambda_root_q = 0.0;
  Grid2D grid;
};

struct ParametricResult {
  double best_aspect = 0.0;
  double best_F = 0.0;
  std::vector<ParametricSample> samples;  // sample_aspects first, then the search points
};

/// Grid with spacing min(length / long_cells, aspect * length / min_short_cells)
/// and a two-cell margin around the family member.
Grid2D family_grid(Family family, double aspect, const ParametricOptions& opts);
ParametricSample evaluate_family(Family family, double aspect, double p, double q, const ParametricOptions& opts);

/// Golden-section search of F over [aspect_lo, aspect_hi] (minimum unless
/// opts.maximize) plus the fixed sample curve.
ParametricResult optimize_parametric(Family family, double p, double q, const ParametricOptions& opts = {});

// ---------------------------------------------------------------------------
// Punctured disks

struct PunctureRow {
  int n = 0;
  std::size_t removed_cells = 0;
  double inradius = 0.0;
  double lambda_root_p = 0.0;
  double lambda_root_q = 0.0;
  double F = 0.0;
};

/// n-th point (n >= 1) of a Halton (2, 3) sequence mapped area-uniformly
/// into the unit disk.
Point2 halton_disk_point(std::uint64_t index);

/// F_{p,q} of the unit disk centered in `grid` minus n single-cell
/// punctures at the first n low-discrepancy points, for each n in n_list.
/// The puncture sets are nested in n; `seed` offsets the sequence.
std::vector<PunctureRow> puncture_experiment(const std::vector<int>& n_list, double p, double q, const Grid2D& grid,
                                             std::uint64_t seed, const SolverOptions& opts = {});

}  // namespace cheegerlab
