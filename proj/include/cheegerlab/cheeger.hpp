#pragma once

#include <vector>

#include "cheegerlab/eigensolver.hpp"
#include "cheegerlab/error.hpp"
#include "cheegerlab/geometry.hpp"

namespace cheegerlab {

struct CheegerResult {
  double h = 0.0;
  DomainMask cheeger_set;
  int iterations = 0;  // ratio updates
  int inner_iterations = 0;  // primal-dual iterations, all steps together
  PerimeterMode mode = PerimeterMode::isotropic;
  std::vector<double> history;  // strictly decreasing ratio estimates

  // Relaxed indicator and dual edge variables of the last convex solve;
  // reusable as a warm start on the same grid.
  std::vector<double> relaxation;
  std::vector<double> dual;
};

/// Raised when the ratio iteration exhausts max_iterations; carries the best
/// set found so far.
class CheegerNonConvergence : public SolverError {
 public:
  explicit CheegerNonConvergence(CheegerResult best)
      : SolverError("Cheeger ratio iteration did not converge"), best_(std::move(best)) {}
  const CheegerResult& best() const { return best_; }

 private:
  CheegerResult best_;
};

/// Discrete Cheeger constant min P(E)/|E| over cell sets E inside the mask.
///
/// Dinkelbach iteration: with the current ratio h_k, approximately solve
///   min_{0 <= u <= 1, u = 0 off the mask}  TV(u) - h_k * sum u h^2
/// by a first-order primal-dual scheme, take the best superlevel set on the
/// level ladder {0.01, ..., 0.99} and adopt its ratio when it improves on h_k.
/// The total variation is the pairwise form of perimeter_area(mode), so it
/// obeys the discrete coarea formula. When a step finds no improvement the
/// convex solve is continued once with 4x the budget (unless it had already
/// settled) before stopping.
///
/// `warm` seeds the relaxation and the initial ratio (the previous set
/// intersected with `mask` is used as a candidate).
CheegerResult cheeger_dinkelbach(const DomainMask& mask, const Grid2D& grid, PerimeterMode mode,
                                 const SolverOptions& opts = {}, const CheegerResult* warm = nullptr);

/// Exhaustive oracle, anisotropic perimeter, at most 20 cells. Ties go to the
/// smallest area, then to the lexicographically smallest sorted cell list.
CheegerResult cheeger_bruteforce(const DomainMask& mask, const Grid2D& grid);

/// Analytic Cheeger constant of a disk (2/R) or an a x b rectangle (1/r with
/// (a - 2r)(b - 2r) = pi r^2, bisection to 1e-12).
double cheeger_convex_oracle(const ShapeSpec& shape);

}  // namespace cheegerlab
