#include "cheegerlab/shapeopt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cheegerlab/error.hpp"

namespace cheegerlab {

double constraint_scale(double lambda, double p, bool strict) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("eigenvalue must be positive and finite");
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("rescaling needs 1 < p < inf");
  const double t = std::pow(lambda, 1.0 / p);
  if (strict && t > 1.0) throw InvalidArgument("rescaled domain escapes D");
  return t;
}

RescaleResult rescale_to_constraint(const DomainMask& mask, const Grid2D& grid, double p, const SolverOptions& opts,
                                    bool strict) {
  if (!(p > 1.0) || std::isinf(p)) throw InvalidArgument("rescaling needs 1 < p < inf");
  RescaleResult r;
  r.lambda = principal_eigen(mask, grid, p, opts).lambda;
  r.t = constraint_scale(r.lambda, p, strict);
  r.grid = rescale_spacing(grid, r.t);
  return r;
}

void check_anneal(const AnnealOptions& opts) {
  if (opts.steps < 0) throw InvalidArgument("anneal steps must be non-negative");
  if (!(opts.initial_temperature > 0.0) || !std::isfinite(opts.initial_temperature))
    throw InvalidArgument("initial temperature must be positive");
  if (!(opts.cooling > 0.0 && opts.cooling < 1.0)) throw InvalidArgument("cooling factor must lie in (0, 1)");
  if (opts.batch < 1) throw InvalidArgument("flip batch must be at least 1");
}

DomainMask random_blob(const DomainMask& domain, const Grid2D& grid, std::uint64_t seed) {
  if (!domain.same_shape(grid) || domain.empty()) throw InvalidArgument("blob needs a non-empty domain");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double w = grid.nx * grid.h, hgt = grid.ny * grid.h, span = std::min(w, hgt);
  DomainMask blob(grid.nx, grid.ny);
  for (int k = 0; k < 3; ++k) {
    const Point2 c{grid.ox + w * (0.3 + 0.4 * unit(rng)), grid.oy + hgt * (0.3 + 0.4 * unit(rng))};
    const double r = span * (0.15 + 0.15 * unit(rng));
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        const Point2 x = grid.center(i, j);
        if (std::hypot(x.x - c.x, x.y - c.y) <= r && domain(i, j)) blob.set(i, j, true);
      }
  }
  if (blob.empty()) return domain;
  return largest_component(blob);
}

namespace {

constexpr int kDx[4] = {1, -1, 0, 0};
constexpr int kDy[4] = {0, 0, 1, -1};

bool is_frontier(const DomainMask& mask, const DomainMask& domain, int i, int j) {
  if (!domain(i, j)) return false;
  const bool in = mask(i, j);
  // Cells beyond the grid read as outside the set.
  for (int k = 0; k < 4; ++k)
    if (mask.get_padded(i + kDx[k], j + kDy[k]) != in) return true;
  return false;
}

struct Proposal {
  std::vector<std::size_t> cells;
  bool add = false;
};

Proposal propose(const DomainMask& mask, const DomainMask& domain, const Grid2D& grid, int batch,
                 std::mt19937_64& rng) {
  std::vector<std::size_t> frontier;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      if (is_frontier(mask, domain, i, j)) frontier.push_back(grid.index(i, j));
  Proposal out;
  if (frontier.empty()) return out;
  const std::size_t pick = frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
  const int pi = static_cast<int>(pick % static_cast<std::size_t>(grid.nx));
  const int pj = static_cast<int>(pick / static_cast<std::size_t>(grid.nx));
  out.add = !mask.at(pick);
  // The batch is the `batch` same-kind frontier cells nearest to the pick.
  std::vector<std::pair<int, std::size_t>> near;
  for (std::size_t c : frontier) {
    if (mask.at(c) == mask.at(pick)) {
      const int i = static_cast<int>(c % static_cast<std::size_t>(grid.nx));
      const int j = static_cast<int>(c / static_cast<std::size_t>(grid.nx));
      near.emplace_back((i - pi) * (i - pi) + (j - pj) * (j - pj), c);
    }
  }
  const std::size_t take = std::min(near.size(), static_cast<std::size_t>(batch));
  std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(take), near.end());
  for (std::size_t k = 0; k < take; ++k) out.cells.push_back(near[k].second);
  return out;
}

}  // namespace

ShapeOptResult optimize_mask(const ShapeSpec& domain_spec, const Grid2D& grid, double p, double q,
                             const AnnealOptions& anneal, const SolverOptions& solver, const DomainMask* initial) {
  check_regime(p, q);
  if (!(q < p)) throw InvalidArgument("shape optimization needs q < p");
  check_anneal(anneal);
  check_options(solver);
  const DomainMask domain = rasterize(domain_spec, grid);

  ShapeOptResult res;
  if (initial != nullptr) {
    if (!initial->same_shape(grid)) throw InvalidArgument("initial mask does not match grid");
    res.initial_mask = *initial;
    for (std::size_t k = 0; k < domain.size(); ++k)
      if (!domain.at(k)) res.initial_mask.set(k, false);
    if (res.initial_mask.empty()) throw InvalidArgument("initial mask lies outside D");
  } else {
    res.initial_mask = random_blob(domain, grid, anneal.seed);
  }

  RootEvaluator roots(solver);
  DomainMask current = res.initial_mask;
  double current_F = ratio_F(roots, current, grid, p, q).F;
  res.initial_F = current_F;
  res.best_mask = current;
  res.best_F = current_F;
  res.trace.push_back({0, current_F, current_F, true, anneal.initial_temperature});

  std::mt19937_64 rng(anneal.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temperature = anneal.initial_temperature;
  for (int step = 1; step <= anneal.steps; ++step) {
    TraceEntry entry;
    entry.step = step;
    entry.temperature = temperature;
    const Proposal prop = propose(current, domain, grid, anneal.batch, rng);
    const double draw = unit(rng);
    DomainMask candidate = current;
    for (std::size_t c : prop.cells) candidate.set(c, prop.add);
    if (anneal.connectivity_repair && !candidate.empty()) candidate = largest_component(candidate);

    entry.F = std::numeric_limits<double>::quiet_NaN();
    if (!prop.cells.empty() && !candidate.empty()) {
      try {
        entry.F = ratio_F(roots, candidate, grid, p, q).F;
      } catch (const SolverError&) {
        ++res.solver_failures;
      }
    }
    if (std::isfinite(entry.F)) {
      const double delta = entry.F - current_F;
      entry.accepted = delta <= 0.0 || draw < std::exp(-delta / temperature);
    }
    if (entry.accepted) {
      current = std::move(candidate);
      current_F = entry.F;
      ++res.accepted;
      if (current_F < res.best_F) {
        res.best_F = current_F;
        res.best_mask = current;
      }
    }
    entry.best_F = res.best_F;
    res.trace.push_back(entry);
    temperature *= anneal.cooling;
  }
  res.degenerate = anneal.steps > 0 && res.accepted == 0;

  if (!std::isinf(p)) {
    const RescaleResult r = rescale_to_constraint(res.best_mask, grid, p, solver);
    res.rescaled = true;
    res.rescale_t = r.t;
    res.rescaled_grid = r.grid;
    res.lambda_p_rescaled = principal_eigen(res.best_mask, r.grid, p, solver).lambda;
  }
  return res;
}

// ---------------------------------------------------------------------------

std::string to_string(Family family) {
  switch (family) {
    case Family::rectangle: return "rectangle";
    case Family::ellipse: return "ellipse";
    case Family::stadium: return "stadium";
  }
  return "rectangle";
}

Family family_from_string(const std::string& s) {
  if (s == "rectangle") return Family::rectangle;
  if (s == "ellipse") return Family::ellipse;
  if (s == "stadium") return Family::stadium;
  throw InvalidArgument("unknown family '" + s + "'");
}

ShapePtr family_shape(Family family, double aspect, double length) {
  if (!(aspect > 0.0 && aspect <= 1.0)) throw InvalidArgument("aspect must lie in (0, 1]");
  if (!(length > 0.0)) throw InvalidArgument("length must be positive");
  const double a = aspect * length;
  switch (family) {
    case Family::rectangle: return make_rectangle({0.0, 0.0}, length, a);
    case Family::ellipse: {
      // Polygon with enough vertices that its deviation from the ellipse is
      // far below any usable cell size.
      constexpr int kVertices = 2048;
      std::vector<Point2> v;
      v.reserve(kVertices);
      for (int k = 0; k < kVertices; ++k) {
        const double th = 2.0 * std::numbers::pi * k / kVertices;
        v.push_back({0.5 * length * (1.0 + std::cos(th)), 0.5 * a * (1.0 + std::sin(th))});
      }
      return make_polygon(std::move(v));
    }
    case Family::stadium: {
      const double r = 0.5 * a;
      ShapePtr shape = make_union(make_disk({r, r}, r), make_disk({length - r, r}, r));
      if (length - a > 0.0) shape = make_union(shape, make_rectangle({r, 0.0}, length - a, a));
      return shape;
    }
  }
  throw InvalidArgument("unknown family");
}

void check_parametric(const ParametricOptions& opts) {
  if (!(opts.aspect_lo > 0.0 && opts.aspect_lo < opts.aspect_hi && opts.aspect_hi <= 1.0))
    throw InvalidArgument("aspect range must satisfy 0 < lo < hi <= 1");
  if (opts.golden_iterations < 0) throw InvalidArgument("golden-section iterations must be non-negative");
  if (opts.long_cells < 2 || opts.min_short_cells < 2) throw InvalidArgument("cell counts must be at least 2");
  if (!(opts.length > 0.0)) throw InvalidArgument("length must be positive");
  for (double a : opts.sample_aspects)
    if (!(a > 0.0 && a <= 1.0)) throw InvalidArgument("sample aspects must lie in (0, 1]");
}

Grid2D family_grid(Family family, double aspect, const ParametricOptions& opts) {
  (void)family;
  const double a = aspect * opts.length;
  const double h = std::min(opts.length / opts.long_cells, a / opts.min_short_cells);
  constexpr int kMargin = 2;
  const int nx = static_cast<int>(std::ceil(opts.length / h - 1e-9)) + 2 * kMargin;
  const int ny = static_cast<int>(std::ceil(a / h - 1e-9)) + 2 * kMargin;
  return make_grid(nx, ny, {nx * h, ny * h}, {-kMargin * h, -kMargin * h});
}

ParametricSample evaluate_family(Family family, double aspect, double p, double q, const ParametricOptions& opts) {
  check_regime(p, q);
  const ShapePtr shape = family_shape(family, aspect, opts.length);
  ParametricSample s;
  s.aspect = aspect;
  s.grid = family_grid(family, aspect, opts);
  const DomainMask mask = rasterize(*shape, s.grid);
  const RatioReport r = ratio_F(mask, s.grid, p, q, opts.solver, to_string(family));
  s.F = r.F;
  s.lambda_root_p = r.lambda_root_p;
  s.lambda_root_q = r.lambda_root_q;
  return s;
}

ParametricResult optimize_parametric(Family family, double p, double q, const ParametricOptions& opts) {
  check_regime(p, q);
  check_parametric(opts);
  ParametricResult res;
  const double sign = opts.maximize ? -1.0 : 1.0;
  auto record = [&](double aspect) {
    res.samples.push_back(evaluate_family(family, aspect, p, q, opts));
    const double F = res.samples.back().F;
    if (res.samples.size() == 1 || sign * F < sign * res.best_F) {
      res.best_F = F;
      res.best_aspect = aspect;
    }
    return sign * F;
  };
  for (double a : opts.sample_aspects) record(a);

  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = opts.aspect_lo, hi = opts.aspect_hi;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = record(x1), f2 = record(x2);
  for (int it = 0; it < opts.golden_iterations; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = record(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = record(x2);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

namespace {

double radical_inverse(std::uint64_t n, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base), f = inv, r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

}  // namespace

Point2 halton_disk_point(std::uint64_t index) {
  const double r = std::sqrt(radical_inverse(index, 2));
  const double th = 2.0 * std::numbers::pi * radical_inverse(index, 3);
  return {r * std::cos(th), r * std::sin(th)};
}

std::vector<PunctureRow> puncture_experiment(const std::vector<int>& n_list, double p, double q, const Grid2D& grid,
                                             std::uint64_t seed, const SolverOptions& opts) {
  check_regime(p, q);
  if (n_list.empty()) throw InvalidArgument("empty puncture list");
  for (int n : n_list)
    if (n < 0) throw InvalidArgument("puncture count must be non-negative");
  const Point2 ext = grid.extent();
  const Point2 center{grid.ox + 0.5 * ext.x, grid.oy + 0.5 * ext.y};
  const ShapePtr disk = make_disk(center, 1.0);
  const int n_max = *std::max_element(n_list.begin(), n_list.end());
  std::vector<Point2> points;
  for (int k = 0; k < n_max; ++k) {
    const Point2 x = halton_disk_point(seed + static_cast<std::uint64_t>(k) + 1);
    points.push_back({center.x + x.x, center.y + x.y});
  }
  const DomainMask full = rasterize(*disk, grid);

  RootEvaluator roots(opts);
  std::vector<PunctureRow> rows;
  for (int n : n_list) {
    PunctureRow row;
    row.n = n;
    const std::vector<Point2> first(points.begin(), points.begin() + n);
    const DomainMask mask = n == 0 ? full : rasterize(*make_punctured(disk, first, 1.0), grid);
    row.removed_cells = full.count() - mask.count();
    row.inradius = inradius(mask, grid);
    const RatioReport r = ratio_F(roots, mask, grid, p, q);
    row.lambda_root_p = r.lambda_root_p;
    row.lambda_root_q = r.lambda_root_q;
    row.F = r.F;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cheegerlab
