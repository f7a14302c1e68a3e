#pragma once

#include <functional>
#include <span>
#include <vector>

namespace cheegerlab::detail {

/// Smooth objective with a preconditioner and an optional projection.
///
/// `project` maps a trial point back to the feasible set in place and returns
/// the factor by which it rescaled the point (1 when it does not rescale), so
/// that the conjugate direction can follow.
struct DescentProblem {
  std::function<double(std::span<const double>)> value;
  std::function<double(std::span<const double>, std::span<double>)> value_gradient;
  std::function<void(std::span<const double>, std::span<double>)> precondition;
  std::function<double(std::span<double>)> project;
};

struct DescentOptions {
  int max_iterations = 50000;
  double tolerance = 1e-8;
};

struct DescentResult {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // sqrt(g . P^-1 g)
  bool converged = false;
  std::vector<double> history;
};

/// Preconditioned Polak-Ribiere+ descent with Armijo backtracking; every
/// accepted step strictly decreases the objective. Stops when the relative
/// change of the objective drops below the tolerance or when no decrease is
/// found along the preconditioned steepest direction.
DescentResult minimize(const DescentProblem& problem, std::vector<double>& x, const DescentOptions& opts);

}  // namespace cheegerlab::detail
