#pragma once

#include <cstdint>
#include <vector>

#include "cheegerlab/geometry.hpp"

namespace cheegerlab {

/// Real values on grid cells, zero outside the mask.
struct ScalarField {
  Grid2D grid;
  DomainMask mask;
  std::vector<double> values;

  double operator()(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Zero field over `mask`.
ScalarField make_field(const Grid2D& grid, const DomainMask& mask);

/// Throws InvalidArgument unless the field is finite, sized to its grid and
/// vanishes outside its mask.
void check_field(const ScalarField& field);

struct SolverOptions {
  int max_iterations = 50000;
  double tolerance = 1e-8;  // relative change of the objective per step
  std::uint64_t seed = 0;
  bool continuation = true;  // warm-start p != 2 solves from the p = 2 minimizer
  int inner_iterations = 1000;  // primal-dual iterations per Cheeger ratio step

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

void check_options(const SolverOptions& opts);

struct EigenResult {
  double lambda = 0.0;
  ScalarField eigenfunction;  // nonnegative, discrete p-norm one
  int iterations = 0;
  double residual = 0.0;  // preconditioned gradient norm relative to lambda
  double p = 2.0;
  bool converged = false;
  std::vector<double> history;  // quotient after every accepted step
};

/// Discrete p-Rayleigh quotient
///   sum_c |grad u|^p h^2 / sum_c |u|^p h^2
/// with forward differences and zero padding outside the mask (and outside
/// the grid); |grad u| is the Euclidean norm of the two differences.
double rayleigh_quotient(const ScalarField& u, double p);

/// First Dirichlet eigenvalue of the discrete p-Laplacian, 1 < p < inf.
///
/// Minimizes the Rayleigh quotient by Armijo-backtracked descent along
/// Laplacian-preconditioned Polak-Ribiere directions, projecting onto
/// nonnegative fields (|u|) and renormalizing after every step. The returned
/// lambda is the final quotient, an upper bound of the discrete minimum.
/// `warm_start`, when given, seeds the iteration (restricted to `mask`).
EigenResult principal_eigen(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts = {},
                            const ScalarField* warm_start = nullptr);

/// p = 2 cross-check: inverse power iteration on the 5-point Laplacian.
EigenResult dirichlet_eigen_power(const DomainMask& mask, const Grid2D& grid, double tolerance = 1e-12,
                                  int max_iterations = 10000);

/// First eigenvalue of the 1-D p-Laplacian on (0, L) with n interior nodes.
double eigen_1d(double length, double p, int n, const SolverOptions& opts = {});

struct TorsionResult {
  ScalarField field;  // w >= 0, zero outside the mask
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  double clamp_magnitude = 0.0;  // largest negative value removed at the end
  std::vector<double> energy_history;
};

/// Discrete p-energy (1/p) sum |grad w|^p h^2 - sum w h^2.
double torsion_energy(const ScalarField& w, double p);

/// Minimizer of the torsion energy over fields vanishing outside the mask,
/// i.e. the solution of -Delta_p w = 1 in the mask, w = 0 outside.
TorsionResult torsion(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts = {});

/// Cells where the field exceeds the threshold.
DomainMask positivity_set(const ScalarField& w, double threshold = 1e-10);

/// ||w_A - w_B||_{L^p} between the torsion functions of two masks.
double gamma_distance(const DomainMask& a, const DomainMask& b, const Grid2D& grid, double p,
                      const SolverOptions& opts = {});

/// Discrete p-norm (sum |u|^p h^2)^(1/p).
double field_norm(const ScalarField& u, double p);

}  // namespace cheegerlab
