#include "cheegerlab/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "cheegerlab/error.hpp"
#include "detail/descent.hpp"
#include "detail/stencil.hpp"

namespace cheegerlab {

using detail::pow_abs;

ScalarField make_field(const Grid2D& grid, const DomainMask& mask) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  return ScalarField{grid, mask, std::vector<double>(grid.size(), 0.0)};
}

void check_field(const ScalarField& field) {
  if (!field.mask.same_shape(field.grid) || field.values.size() != field.grid.size())
    throw InvalidArgument("field does not match its grid");
  for (std::size_t k = 0; k < field.values.size(); ++k) {
    if (!std::isfinite(field.values[k])) throw InvalidArgument("non-finite field value");
    if (!field.mask.at(k) && field.values[k] != 0.0) throw InvalidArgument("field nonzero outside its mask");
  }
}

void check_options(const SolverOptions& opts) {
  if (opts.max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (!(opts.tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (opts.inner_iterations < 1) throw InvalidArgument("inner_iterations must be at least 1");
}

double field_norm(const ScalarField& u, double p) {
  double s = 0.0;
  for (double v : u.values) s += pow_abs(v, p);
  return std::pow(s * u.grid.h * u.grid.h, 1.0 / p);
}

namespace {

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidArgument("p must satisfy 1 < p < inf; use cheeger / lambda_root");
}

void require_mask(const DomainMask& mask, const Grid2D& grid) {
  if (!mask.same_shape(grid)) throw InvalidArgument("mask does not match grid");
  if (mask.empty()) throw InvalidArgument("empty mask");
}

std::vector<double> gather(const ScalarField& f, const detail::MaskIndexing& idx) {
  std::vector<double> u(idx.unknown_to_cell.size());
  for (std::size_t k = 0; k < u.size(); ++k) u[k] = f.values[idx.unknown_to_cell[k]];
  return u;
}

ScalarField scatter(std::span<const double> u, const Grid2D& grid, const DomainMask& mask,
                    const detail::MaskIndexing& idx, double factor) {
  ScalarField f = make_field(grid, mask);
  for (std::size_t k = 0; k < u.size(); ++k) f.values[idx.unknown_to_cell[k]] = factor * u[k];
  return f;
}

double sum_pow(std::span<const double> u, double p) {
  double s = 0.0;
  for (double v : u) s += pow_abs(v, p);
  return s;
}

/// |u| followed by unit p-norm; returns the applied scale.
double project_nonnegative_unit(std::span<double> u, double p) {
  for (double& v : u) v = std::abs(v);
  const double norm = std::pow(sum_pow(u, p), 1.0 / p);
  if (!(norm > 0.0) || !std::isfinite(norm)) return 1.0;
  const double s = 1.0 / norm;
  for (double& v : u) v *= s;
  return s;
}

struct RayleighRun {
  std::vector<double> u;
  detail::DescentResult descent;
};

/// Minimizes the unit-spacing quotient sum |Du|^p / sum |u|^p from `u`.
RayleighRun minimize_rayleigh(const detail::DifferenceStencil& stencil, const detail::LaplacianPreconditioner& pre,
                              std::vector<double> u, double p, const SolverOptions& opts) {
  detail::DescentProblem problem;
  problem.value = [&](std::span<const double> x) { return stencil.energy(x, p) / sum_pow(x, p); };
  problem.value_gradient = [&](std::span<const double> x, std::span<double> g) {
    const double num = stencil.energy_gradient(x, p, g);
    const double den = sum_pow(x, p);
    const double r = num / den;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double a = std::abs(x[k]);
      const double dden = p == 2.0 ? 2.0 * x[k] : (a == 0.0 ? 0.0 : p * std::pow(a, p - 1.0) * (x[k] > 0 ? 1.0 : -1.0));
      g[k] = (g[k] - r * dden) / den;
    }
    return r;
  };
  problem.precondition = [&](std::span<const double> g, std::span<double> z) { pre.apply(g, z); };
  problem.project = [p](std::span<double> x) { return project_nonnegative_unit(x, p); };
  RayleighRun run;
  run.descent = detail::minimize(problem, u, {opts.max_iterations, opts.tolerance});
  run.u = std::move(u);
  return run;
}

std::vector<double> random_positive(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 1.5);
  std::vector<double> u(n);
  for (double& v : u) v = dist(rng);
  return u;
}

}  // namespace

double rayleigh_quotient(const ScalarField& u, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw InvalidArgument("p must satisfy 1 <= p < inf");
  check_field(u);
  const Grid2D& g = u.grid;
  // Padded sweep over the cells whose forward differences can touch u.
  auto at = [&](int i, int j) { return g.in_bounds(i, j) ? u.values[g.index(i, j)] : 0.0; };
  double num = 0.0;
  for (int j = -1; j < g.ny; ++j) {
    for (int i = -1; i < g.nx; ++i) {
      const double s = at(i, j);
      const double gx = (at(i + 1, j) - s) / g.h;
      const double gy = (at(i, j + 1) - s) / g.h;
      const double n2 = gx * gx + gy * gy;
      num += p == 2.0 ? n2 : std::pow(n2, 0.5 * p);
    }
  }
  double den = 0.0;
  for (double v : u.values) den += pow_abs(v, p);
  if (den == 0.0) throw InvalidArgument("null Rayleigh candidate");
  return (num * g.h * g.h) / (den * g.h * g.h);
}

EigenResult principal_eigen(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts,
                            const ScalarField* warm_start) {
  require_exponent(p);
  require_mask(mask, grid);
  check_options(opts);

  const auto idx = detail::index_mask(mask);
  const auto stencil = detail::make_stencil(mask, idx);
  const detail::LaplacianPreconditioner pre(stencil);

  std::vector<double> u;
  if (warm_start != nullptr && warm_start->values.size() == grid.size()) {
    u = gather(*warm_start, idx);
    for (double& v : u) v = std::abs(v);
    if (std::all_of(u.begin(), u.end(), [](double v) { return v == 0.0; })) u.clear();
  }
  if (u.empty() && opts.continuation && p != 2.0) {
    SolverOptions base = opts;
    base.continuation = false;
    const auto seed_run = minimize_rayleigh(stencil, pre, random_positive(idx.unknown_to_cell.size(), opts.seed), 2.0, base);
    u = seed_run.u;
  }
  if (u.empty()) u = random_positive(idx.unknown_to_cell.size(), opts.seed);

  auto run = minimize_rayleigh(stencil, pre, std::move(u), p, opts);

  // Unit spacing -> spacing h: the quotient scales by h^-p and the unit
  // p-norm needs a factor h^(-2/p).
  const double h = grid.h;
  EigenResult out;
  out.p = p;
  out.lambda = run.descent.value * std::pow(h, -p);
  out.iterations = run.descent.iterations;
  out.residual = run.descent.residual / run.descent.value;
  out.converged = run.descent.converged;
  out.history.reserve(run.descent.history.size());
  for (double r : run.descent.history) out.history.push_back(r * std::pow(h, -p));
  out.eigenfunction = scatter(run.u, grid, mask, idx, std::pow(h, -2.0 / p));
  return out;
}

EigenResult dirichlet_eigen_power(const DomainMask& mask, const Grid2D& grid, double tolerance, int max_iterations) {
  require_mask(mask, grid);
  if (!(tolerance > 0.0) || max_iterations < 1) throw InvalidArgument("invalid power iteration options");
  const auto idx = detail::index_mask(mask);
  const auto stencil = detail::make_stencil(mask, idx);
  const Eigen::SparseMatrix<double> L = stencil.laplacian();
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(L);
  if (factor.info() != Eigen::Success) throw SolverError("Laplacian factorization failed");

  Eigen::VectorXd u = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(idx.unknown_to_cell.size()));
  u.normalize();
  double lambda = u.dot(L * u);
  EigenResult out;
  out.p = 2.0;
  out.history.push_back(lambda);
  for (int it = 0; it < max_iterations; ++it) {
    u = factor.solve(u);
    u.normalize();
    const double next = u.dot(L * u);
    out.history.push_back(next);
    out.iterations = it + 1;
    const double change = std::abs(next - lambda);
    lambda = next;
    if (change <= tolerance * lambda) {
      out.converged = true;
      break;
    }
  }
  const double h = grid.h;
  out.lambda = lambda / (h * h);
  out.residual = (L * u - lambda * u).norm() / lambda;
  for (double& v : out.history) v /= h * h;
  std::vector<double> values(u.data(), u.data() + u.size());
  for (double& v : values) v = std::abs(v);
  out.eigenfunction = scatter(values, grid, mask, idx, 1.0 / h);  // unit 2-norm with weight h^2
  return out;
}

double eigen_1d(double length, double p, int n, const SolverOptions& opts) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("interval length must be positive");
  require_exponent(p);
  if (n < 16) throw InvalidArgument("eigen_1d needs at least 16 interior nodes");
  check_options(opts);
  const auto stencil = detail::make_stencil_1d(n);
  const detail::LaplacianPreconditioner pre(stencil);
  std::vector<double> u;
  if (opts.continuation && p != 2.0) {
    SolverOptions base = opts;
    base.continuation = false;
    u = minimize_rayleigh(stencil, pre, random_positive(static_cast<std::size_t>(n), opts.seed), 2.0, base).u;
  } else {
    u = random_positive(static_cast<std::size_t>(n), opts.seed);
  }
  const auto run = minimize_rayleigh(stencil, pre, std::move(u), p, opts);
  const double h = length / (n + 1);
  return run.descent.value * std::pow(h, -p);
}

// ---------------------------------------------------------------------------
// Torsion

double torsion_energy(const ScalarField& w, double p) {
  require_exponent(p);
  check_field(w);
  const Grid2D& g = w.grid;
  auto at = [&](int i, int j) { return g.in_bounds(i, j) ? w.values[g.index(i, j)] : 0.0; };
  double grad = 0.0;
  for (int j = -1; j < g.ny; ++j) {
    for (int i = -1; i < g.nx; ++i) {
      const double s = at(i, j);
      const double gx = (at(i + 1, j) - s) / g.h;
      const double gy = (at(i, j + 1) - s) / g.h;
      grad += std::pow(gx * gx + gy * gy, 0.5 * p);
    }
  }
  const double load = std::accumulate(w.values.begin(), w.values.end(), 0.0);
  return (grad / p - load) * g.h * g.h;
}

TorsionResult torsion(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts) {
  require_exponent(p);
  require_mask(mask, grid);
  check_options(opts);
  const auto idx = detail::index_mask(mask);
  const auto stencil = detail::make_stencil(mask, idx);
  const detail::LaplacianPreconditioner pre(stencil);
  const std::size_t n = idx.unknown_to_cell.size();

  // Unit-spacing problem: min (1/p) sum |Dv|^p - sum v.
  detail::DescentProblem problem;
  problem.value = [&](std::span<const double> v) {
    return stencil.energy(v, p) / p - std::accumulate(v.begin(), v.end(), 0.0);
  };
  problem.value_gradient = [&](std::span<const double> v, std::span<double> g) {
    const double e = stencil.energy_gradient(v, p, g);
    for (double& x : g) x = x / p - 1.0;
    return e / p - std::accumulate(v.begin(), v.end(), 0.0);
  };
  problem.precondition = [&](std::span<const double> g, std::span<double> z) { pre.apply(g, z); };

  // Start on the best multiple of the p = 2 solution.
  std::vector<double> v(n), ones(n, 1.0);
  pre.apply(ones, v);
  const double scale =
      std::pow(std::accumulate(v.begin(), v.end(), 0.0) / stencil.energy(v, p), 1.0 / (p - 1.0));
  for (double& x : v) x *= scale;

  const double tol = std::max(1e-15, 1e-4 * opts.tolerance);
  const auto run = detail::minimize(problem, v, {opts.max_iterations, tol});

  TorsionResult out;
  for (double& x : v) {
    if (x < 0.0) {
      out.clamp_magnitude = std::max(out.clamp_magnitude, -x);
      x = 0.0;
    }
  }
  const double h = grid.h;
  const double field_scale = std::pow(h, p / (p - 1.0));
  const double energy_scale = std::pow(h, (3.0 * p - 2.0) / (p - 1.0));
  out.field = scatter(v, grid, mask, idx, field_scale);
  out.clamp_magnitude *= field_scale;
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.energy = problem.value(v) * energy_scale;
  for (double e : run.history) out.energy_history.push_back(e * energy_scale);
  return out;
}

DomainMask positivity_set(const ScalarField& w, double threshold) {
  DomainMask out(w.grid.nx, w.grid.ny);
  for (std::size_t k = 0; k < w.values.size(); ++k)
    if (w.values[k] > threshold) out.set(k, true);
  return out;
}

double gamma_distance(const DomainMask& a, const DomainMask& b, const Grid2D& grid, double p,
                      const SolverOptions& opts) {
  require_exponent(p);
  if (!a.same_shape(grid) || !b.same_shape(grid)) throw InvalidArgument("masks live on different grids");
  const auto wa = torsion(a, grid, p, opts);
  const auto wb = torsion(b, grid, p, opts);
  double s = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) s += pow_abs(wa.field.values[k] - wb.field.values[k], p);
  return std::pow(s * grid.h * grid.h, 1.0 / p);
}

}  // namespace cheegerlab
