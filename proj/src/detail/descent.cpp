#include "detail/descent.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cheegerlab::detail {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

constexpr double kArmijo = 1e-4;
constexpr int kMaxBacktracks = 60;

}  // namespace

DescentResult minimize(const DescentProblem& problem, std::vector<double>& x, const DescentOptions& opts) {
  const std::size_t n = x.size();
  std::vector<double> g(n), z(n), d(n), g_next(n), z_next(n), trial(n), probe(n);
  DescentResult out;
  if (problem.project) problem.project(x);
  double f = problem.value_gradient(x, g);
  problem.precondition(g, z);
  out.history.push_back(f);
  for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];
  bool steepest = true;
  // First trial step moves x by its own size; the model probe and
  // backtracking refine it from there.
  auto natural_step = [&] {
    const double dn = std::sqrt(dot(d, d));
    const double xn = std::sqrt(dot(x, x));
    return dn > 0.0 && xn > 0.0 ? xn / dn : 1.0;
  };
  double step = natural_step();
  int quiet = 0;

  for (int it = 0; it < opts.max_iterations; ++it) {
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];
      steepest = true;
      slope = dot(g, d);
      if (!(slope < 0.0)) {
        out.converged = true;  // stationary
        break;
      }
    }

    // Backtracking with one safeguarded quadratic-model probe per trial.
    double a = step, f_trial = f, scale = 1.0;
    bool accepted = false;
    auto evaluate = [&](double alpha, std::vector<double>& out, double& sc) {
      for (std::size_t k = 0; k < n; ++k) out[k] = x[k] + alpha * d[k];
      sc = problem.project ? problem.project(out) : 1.0;
      return problem.value(out);
    };
    for (int bt = 0; bt < kMaxBacktracks; ++bt) {
      f_trial = evaluate(a, trial, scale);
      const double curvature = f_trial - f - slope * a;
      if (curvature > 0.0 && std::isfinite(f_trial)) {
        const double a_model = std::clamp(-slope * a * a / (2.0 * curvature), 0.1 * a, 10.0 * a);
        if (std::abs(a_model - a) > 0.05 * a) {
          double scale_model = 1.0;
          const double f_model = evaluate(a_model, probe, scale_model);
          if (f_model < f_trial) {
            a = a_model;
            f_trial = f_model;
            scale = scale_model;
            trial.swap(probe);
          }
        }
      }
      if (f_trial <= f + kArmijo * a * slope && f_trial < f) {
        accepted = true;
        break;
      }
      a *= 0.25;
    }
    if (!accepted) {
      if (!steepest) {
        for (std::size_t k = 0; k < n; ++k) d[k] = -z[k];
        steepest = true;
        step = natural_step();
        continue;
      }
      out.converged = true;  // no decrease left at working precision
      break;
    }

    x.swap(trial);
    for (double& v : d) v *= scale;
    const double f_next = problem.value_gradient(x, g_next);
    problem.precondition(g_next, z_next);
    out.history.push_back(f_next);
    out.iterations = it + 1;

    const double change = std::abs(f - f_next);
    f = f_next;
    const double denom = dot(z, g);
    double beta = 0.0;
    if (denom > 0.0) {
      double num = 0.0;
      for (std::size_t k = 0; k < n; ++k) num += z_next[k] * (g_next[k] - g[k]);
      beta = std::max(0.0, num / denom);
    }
    g.swap(g_next);
    z.swap(z_next);
    for (std::size_t k = 0; k < n; ++k) d[k] = -z[k] + beta * d[k];
    steepest = beta == 0.0;
    step = a;

    // Two quiet steps in a row guard against a stop after one poorly scaled step.
    quiet = change <= opts.tolerance * std::abs(f) ? quiet + 1 : 0;
    if (quiet >= 2) {
      out.converged = true;
      break;
    }
  }
  out.value = f;
  out.residual = std::sqrt(std::max(0.0, dot(g, z)));
  return out;
}

}  // namespace cheegerlab::detail
